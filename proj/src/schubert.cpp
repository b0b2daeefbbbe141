#include "fingeo/schubert.hpp"

#include <chrono>
#include <random>
#include <sstream>

namespace fingeo {

// -- omega_forms -------------------------------------------------------------------

FormSpace omega_forms(const SubspaceBasis& a1, int n, int k) {
    if (static_cast<int>(a1.ambient()) != n) throw DomainError("omega_forms: ambient dimension mismatch");
    if (k < 1 || k > n) throw DomainError("omega_forms: need 1 <= k <= n");
    const int h = static_cast<int>(a1.dim());
    auto table = IndexTable::get(n, k);
    if (h > n - k) {
        // Only the zero form vanishes on Omega(A_1) when h > n-k.
        return {SubspaceBasis::zero(a1.tower(), a1.level(), table->size()), FormSpace::Provenance::HodgeDual,
                "h > n-k: zero space (no nonzero alternating form has such a large kernel)"};
    }
    const std::uint64_t target = IndexTable::binomial(static_cast<std::uint64_t>(n - h), static_cast<std::uint64_t>(k));
    SubspaceBasis comp = complement(a1);
    const int d = n - k - h; // completions of a1 to dimension n-k
    auto dsub = IndexTable::get(n - h, d);
    IncrementalRref inc(a1.tower(), a1.level(), table->size());
    for (size_t ci = 0; ci < dsub->size() && inc.rank() < target; ++ci) {
        std::vector<Vector> rows;
        for (size_t i = 0; i < a1.dim(); ++i) rows.push_back(a1.basis_row(i));
        for (auto zi : dsub->subset(ci)) rows.push_back(comp.basis_row(zi));
        SubspaceBasis c = SubspaceBasis::span_of(rows);
        if (static_cast<int>(c.dim()) != n - k) throw InternalError("omega_forms completion lost dimension");
        inc.add(hodge_form(c, table));
    }
    if (inc.rank() != target) throw InternalError("omega_forms rank did not stabilize at binom(n-h,k)");
    return {inc.to_basis(), FormSpace::Provenance::HodgeDual, ""};
}

// -- trace equations ----------------------------------------------------------------

Matrix trace_equations(const BlockDecomposition& bd, const SubspaceBasis& W) {
    if (W.level() != Level::Sub || W.ambient() != bd.ambient())
        throw DomainError("trace_equations expects W in the GF(q)-model");
    const auto& tw = *bd.tower();
    const int r = bd.r(), t = bd.t();
    // RREF dual of W under the dot pairing of GF(q)^{rt}
    SubspaceBasis dual = W.dim() == 0 ? SubspaceBasis::full(bd.tower(), Level::Sub, bd.ambient())
                                      : kernel(W.matrix());
    Matrix a(bd.tower(), Level::Top, dual.dim(), static_cast<size_t>(r));
    const auto& star = tw.trace_dual_basis();
    for (size_t row = 0; row < dual.dim(); ++row)
        for (int j = 0; j < r; ++j) {
            code_t acc = 0;
            for (int l = 0; l < t; ++l)
                acc = tw.add(acc, tw.mul(dual.matrix().at(row, static_cast<size_t>(j * t + l)), star[static_cast<size_t>(l)]));
            a.set(row, static_cast<size_t>(j), acc);
        }
    return a;
}

SubspaceBasis solve_trace_equations(const BlockDecomposition& bd, const Matrix& a) {
    const auto& tw = *bd.tower();
    const int r = bd.r(), t = bd.t();
    if (a.cols() != static_cast<size_t>(r)) throw DomainError("trace equation matrix must have r columns");
    // each row j gives the GF(q)-form  x |-> sum_j' Tr(a_{jj'} xi^l) * coeff_{j' t + l}
    Matrix forms(bd.tower(), Level::Sub, a.rows(), bd.ambient());
    for (size_t row = 0; row < a.rows(); ++row)
        for (int j = 0; j < r; ++j)
            for (int l = 0; l < t; ++l)
                forms.set(row, static_cast<size_t>(j * t + l),
                          tw.trace(tw.mul(a.at(row, static_cast<size_t>(j)), tw.power_basis()[static_cast<size_t>(l)])));
    if (a.rows() == 0) return SubspaceBasis::full(bd.tower(), Level::Sub, bd.ambient());
    return kernel(forms);
}

// -- minor forms --------------------------------------------------------------------

namespace {

code_t det_small(const FieldTower& tw, std::vector<code_t>& a, int n) {
    code_t det = 1;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        while (piv < n && a[static_cast<size_t>(piv) * n + col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            for (int j = col; j < n; ++j)
                std::swap(a[static_cast<size_t>(piv) * n + j], a[static_cast<size_t>(col) * n + j]);
            det = tw.neg(det);
        }
        code_t d = a[static_cast<size_t>(col) * n + col];
        det = tw.mul(det, d);
        code_t dinv = tw.inv(d);
        for (int i = col + 1; i < n; ++i) {
            code_t f = tw.mul(a[static_cast<size_t>(i) * n + col], dinv);
            if (!f) continue;
            for (int j = col; j < n; ++j)
                a[static_cast<size_t>(i) * n + j] =
                    tw.sub(a[static_cast<size_t>(i) * n + j], tw.mul(f, a[static_cast<size_t>(col) * n + j]));
        }
    }
    return det;
}

} // namespace

FormSpace minor_forms(const BlockDecomposition& bd, const Matrix& a) {
    const auto& tw = *bd.tower();
    const int r = bd.r(), t = bd.t();
    if (a.cols() != static_cast<size_t>(r)) throw DomainError("minor_forms: coefficient matrix must have r columns");
    const int n = static_cast<int>(a.rows());
    const auto& ft = bd.functions();
    if (n < t)
        return {SubspaceBasis::zero(bd.tower(), Level::Top, ft.size()), FormSpace::Provenance::Minor,
                "fewer equations than t: every spread element meets the span of W (degenerate)"};
    // conj[j][x][i] = a_{jx}^{q^i}
    std::vector<code_t> conj(static_cast<size_t>(n) * static_cast<size_t>(r) * static_cast<size_t>(t));
    for (int j = 0; j < n; ++j)
        for (int x = 0; x < r; ++x) {
            code_t v = a.at(static_cast<size_t>(j), static_cast<size_t>(x));
            for (int i = 0; i < t; ++i) {
                conj[(static_cast<size_t>(j) * r + static_cast<size_t>(x)) * static_cast<size_t>(t) + static_cast<size_t>(i)] = v;
                v = tw.frob(v, 1);
            }
        }
    auto subsets = IndexTable::get(n, t);
    IncrementalRref inc(bd.tower(), Level::Top, ft.size());
    std::vector<code_t> form(ft.size());
    std::vector<code_t> minor(static_cast<size_t>(t) * static_cast<size_t>(t));
    for (size_t si = 0; si < subsets->size(); ++si) {
        const auto& J = subsets->subset(si);
        std::vector<int> f(static_cast<size_t>(t), 0);
        for (size_t idx = 0; idx < ft.size(); ++idx) {
            // coefficient at f: det of the t x t matrix (i,l) -> a_{J_l, f(i)}^{q^i}
            for (int i = 0; i < t; ++i)
                for (int l = 0; l < t; ++l)
                    minor[static_cast<size_t>(i) * t + l] =
                        conj[(static_cast<size_t>(J[static_cast<size_t>(l)]) * r +
                              static_cast<size_t>(f[static_cast<size_t>(i)])) * static_cast<size_t>(t) + static_cast<size_t>(i)];
            form[idx] = det_small(tw, minor, t);
            for (int i = t - 1; i >= 0; --i) {
                if (++f[static_cast<size_t>(i)] < r) break;
                f[static_cast<size_t>(i)] = 0;
            }
        }
        inc.add_codes(form);
    }
    return {inc.to_basis(), FormSpace::Provenance::Minor, ""};
}

// -- pipeline -----------------------------------------------------------------------

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Rank of the span of b_{0,j_0} ^ ... ^ b_{t-1,j_{t-1}} over all row choices,
// with prefix-shared wedge extension and early termination at stop_at.
std::uint64_t wedge_span_rank(const TowerPtr& tower, const std::vector<Matrix>& blocks, int d,
                              std::uint64_t stop_at) {
    const int t = static_cast<int>(blocks.size());
    std::vector<IndexTablePtr> tables;
    for (int l = 1; l <= t; ++l) tables.push_back(IndexTable::get(d, l));
    IncrementalRref inc(tower, Level::Top, tables.back()->size());
    // depth-first over row tuples; cur is the wedge of the chosen prefix
    auto descend = [&](auto&& self, int level, const Vector& cur) -> bool {
        if (level == t) return false; // handled by caller
        for (size_t j = 0; j < blocks[static_cast<size_t>(level)].rows(); ++j) {
            Vector next = level == 0 ? blocks[0].row(j)
                                     : wedge_extend(tables[static_cast<size_t>(level - 1)], cur,
                                                    blocks[static_cast<size_t>(level)].row(j),
                                                    tables[static_cast<size_t>(level)]);
            if (level + 1 == t) {
                inc.add(next);
                if (inc.rank() >= stop_at) return true;
            } else if (self(self, level + 1, next)) {
                return true;
            }
        }
        return false;
    };
    if (t == 1) {
        for (size_t j = 0; j < blocks[0].rows(); ++j) {
            inc.add(blocks[0].row(j));
            if (inc.rank() >= stop_at) break;
        }
    } else {
        descend(descend, 0, Vector::zero(tower, Level::Top, static_cast<size_t>(d)));
    }
    return inc.rank();
}

struct SpanRoute {
    std::uint64_t dim_S = 0;
    std::vector<SubspaceBasis> ubar; // projected blocks in ambient coordinates
};

SpanRoute span_route(const BlockDecomposition& bd, const SubspaceBasis& W_star, const SubspaceBasis& W_nat,
                     std::uint64_t bound, std::mt19937_64* scramble_rng) {
    const int t = bd.t();
    const int d = static_cast<int>(W_nat.dim());
    SpanRoute out;
    std::vector<Matrix> coords;
    for (int i = 0; i < t; ++i) {
        SubspaceBasis ub = project(bd.block(i), W_nat, W_star);
        out.ubar.push_back(ub);
        Matrix b(bd.tower(), Level::Top, ub.dim(), static_cast<size_t>(d));
        for (size_t row = 0; row < ub.dim(); ++row) {
            auto cs = W_nat.coordinates(ub.basis_row(row));
            if (!cs) throw InternalError("projected block does not lie in the complement");
            for (int col = 0; col < d; ++col) b.set(row, static_cast<size_t>(col), (*cs)[static_cast<size_t>(col)]);
        }
        if (scramble_rng) b = random_invertible(bd.tower(), Level::Top, b.rows(), *scramble_rng) * b;
        coords.push_back(std::move(b));
    }
    out.dim_S = wedge_span_rank(bd.tower(), coords, d, bound);
    return out;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) { return IndexTable::binomial(n, k); }

} // namespace

bool CodimReport::all_invariants_pass() const {
    for (const auto& c : invariants)
        if (!c.pass) return false;
    return true;
}

std::uint64_t alpha_span_deficit(const BlockDecomposition& bd, const std::vector<Vector>& points) {
    return bd.functions().size() - alpha_rank(bd, points);
}

std::uint64_t point_evaluation_route(const LinearSetSpec& spec, std::uint64_t cap) {
    BlockDecomposition bd(spec.tower(), spec.r());
    SubspaceBasis W = build_W(bd, spec);
    auto pws = points_and_weights(bd, W, cap);
    std::vector<Vector> pts;
    pts.reserve(pws.size());
    for (auto& pw : pws) pts.push_back(std::move(pw.point));
    return alpha_span_deficit(bd, pts);
}

CodimReport codim_pipeline(const LinearSetSpec& spec, const PipelineOptions& opts) {
    const auto& tower = spec.tower();
    const auto& tw = *tower;
    BlockDecomposition bd(tower, spec.r());
    const int r = spec.r(), t = spec.t();
    const int rt = r * t;

    CodimReport rep;
    rep.q = static_cast<int>(tw.q());
    rep.r = r;
    rep.t = t;

    auto check = [&rep](const std::string& name, bool pass, std::string detail = {}) {
        rep.invariants.push_back({name, pass, std::move(detail)});
    };

    SubspaceBasis W = build_W(bd, spec);
    rep.rank = static_cast<int>(W.dim());
    const int m1 = rep.rank;
    rep.dual_dim = rt - m1;
    rep.bound = binom(static_cast<std::uint64_t>(rep.dual_dim), static_cast<std::uint64_t>(t));
    if (rep.bound > opts.max_dual_dim)
        throw CapError("binom(rt-m-1,t) = " + std::to_string(rep.bound) + " exceeds the dual-dimension cap " +
                       std::to_string(opts.max_dual_dim));

    // linear set analysis needs point enumeration; degrade gracefully past the cap
    std::vector<Vector> points;
    try {
        auto pws = points_and_weights(bd, W, opts.max_enum);
        for (auto& pw : pws) points.push_back(pw.point);
        LinearSetReport lr = analyze_linear_set(bd, W, opts.max_enum);
        check("vector-count identity sum(q^w - 1) = q^{m+1} - 1", lr.vector_count_identity);
        if (lr.proper && t == 2) check("t=2 identity h = m+1-r", lr.t2_identity);
        if (lr.proper && t > 2) check("h bound h*(t-1) <= m+1-r", lr.h_bound);
        rep.linset = std::move(lr);
    } catch (const CapError&) {
        rep.linset.reset();
    }

    BlockParams bp = rep.linset ? BlockParams{.h = rep.linset->h,
                                              .c = rep.linset->c,
                                              .proper = rep.linset->proper,
                                              .h_per_block = rep.linset->h_per_block,
                                              .t2_identity = rep.linset->t2_identity,
                                              .h_bound = rep.linset->h_bound,
                                              .W_star = extend_to_W_star(bd, W)}
                                : block_params(bd, W);
    rep.h = bp.h;
    rep.c = bp.c;
    rep.proper = bp.proper;
    check("c = r - h", rep.c == r - rep.h);
    rep.injective = m1 > rt - t - rep.c;

    // route of record: dimension of the span of decomposable wedges
    Stopwatch sw_span;
    SubspaceBasis W_nat = complement(bp.W_star);
    SpanRoute main_route = span_route(bd, bp.W_star, W_nat, rep.bound, nullptr);
    rep.dim_S = main_route.dim_S;
    if (opts.collect_timings) rep.timings["span"] = sw_span.seconds();

    for (int i = 0; i < t; ++i) {
        check("dim Ubar_" + std::to_string(i) + " = c", static_cast<int>(main_route.ubar[static_cast<size_t>(i)].dim()) == rep.c);
        for (int j = i + 1; j < t; ++j)
            rep.pairwise_dims[{i, j}] =
                static_cast<int>(meet(main_route.ubar[static_cast<size_t>(i)], main_route.ubar[static_cast<size_t>(j)]).dim());
    }

    check("dim_S <= binom(rt-m-1,t)", rep.dim_S <= rep.bound,
          std::to_string(rep.dim_S) + " <= " + std::to_string(rep.bound));
    if (rep.proper) check("dim_S = bound iff m+1 > rt-t-c", (rep.dim_S == rep.bound) == rep.injective);

    if (rep.proper && t == 3 && r > 2 && m1 <= 3 * r - 3 - rep.c) {
        std::uint64_t predicted = binom(static_cast<std::uint64_t>(3 * r - m1), 3) -
                                  3 * binom(static_cast<std::uint64_t>(3 * r - m1 - rep.c), 3);
        rep.t3_closed_form = predicted;
        check("t=3 closed form", rep.dim_S == predicted,
              "dim_S=" + std::to_string(rep.dim_S) + " predicted=" + std::to_string(predicted));
    }

    // complement independence: randomized complements and block basis changes
    std::mt19937_64 rng(opts.seed);
    for (int trial = 0; trial < opts.complement_trials; ++trial) {
        SubspaceBasis alt = random_complement(bp.W_star, rng);
        SpanRoute alt_route = span_route(bd, bp.W_star, alt, rep.bound, &rng);
        rep.complement_trial_dims.push_back(alt_route.dim_S);
    }
    bool complement_independent = true;
    for (auto v : rep.complement_trial_dims) complement_independent = complement_independent && v == rep.dim_S;
    if (opts.complement_trials > 0)
        check("dim_S independent of the complement and of block bases", complement_independent);

    if (opts.route_minors) {
        Stopwatch sw;
        Matrix a = trace_equations(bd, W);
        check("trace equation count = rt-m-1", static_cast<int>(a.rows()) == rt - m1);
        check("trace equations round trip to W", solve_trace_equations(bd, a) == W);
        FormSpace mf = minor_forms(bd, a);
        rep.minor_rank = mf.dim();
        // minors vanish on the image: spot-check on enumerated points
        bool vanish = true;
        size_t sampled = 0;
        for (const auto& x : points) {
            if (sampled >= 16) break;
            Vector av = alpha_raw(bd, x);
            for (size_t fi = 0; fi < mf.dim() && vanish; ++fi)
                vanish = mf.basis.basis_row(fi).dot(av) == 0;
            ++sampled;
        }
        if (!points.empty()) check("minor forms vanish on alpha(P) for sampled P", vanish);
        if (opts.collect_timings) rep.timings["minors"] = sw.seconds();
    }

    if (opts.route_points) {
        Stopwatch sw;
        if (bd.functions().size() > opts.max_dual_dim)
            throw CapError("r^t exceeds the dual-dimension cap for the point route");
        if (points.empty())
            throw CapError("the point route needs the full point enumeration; raise the enumeration cap");
        rep.point_deficit = alpha_span_deficit(bd, points);
        check("point deficit >= dim_S", *rep.point_deficit >= rep.dim_S);
        check("point-evaluation deficit equals dim_S", *rep.point_deficit == rep.dim_S,
              "deficit=" + std::to_string(*rep.point_deficit) + " dim_S=" + std::to_string(rep.dim_S));
        if (opts.collect_timings) rep.timings["points"] = sw.seconds();
    }

    if (rep.minor_rank && rep.point_deficit)
        check("minor rank <= point deficit", *rep.minor_rank <= *rep.point_deficit,
              std::to_string(*rep.minor_rank) + " <= " + std::to_string(*rep.point_deficit));

    return rep;
}

} // namespace fingeo
