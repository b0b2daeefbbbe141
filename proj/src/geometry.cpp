#include "fingeo/geometry.hpp"

namespace fingeo {

// -- FunctionTable ------------------------------------------------------------

FunctionTable::FunctionTable(int r, int t) : r_(r), t_(t) {
    if (r < 1 || t < 1) throw DomainError("function table requires positive r and t");
    size_ = 1;
    for (int i = 0; i < t; ++i) {
        size_ *= static_cast<std::size_t>(r);
        if (size_ > (1u << 24)) throw CapError("r^t exceeds the supported monomial table size");
    }
}

std::vector<int> FunctionTable::tuple(std::size_t index) const {
    std::vector<int> f(static_cast<size_t>(t_));
    for (int i = t_ - 1; i >= 0; --i) {
        f[static_cast<size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(r_));
        index /= static_cast<std::size_t>(r_);
    }
    return f;
}

std::size_t FunctionTable::index(const std::vector<int>& f) const {
    if (f.size() != static_cast<size_t>(t_)) throw DomainError("function tuple has wrong arity");
    std::size_t idx = 0;
    for (int i = 0; i < t_; ++i) {
        if (f[static_cast<size_t>(i)] < 0 || f[static_cast<size_t>(i)] >= r_)
            throw DomainError("function value out of range");
        idx = idx * static_cast<std::size_t>(r_) + static_cast<std::size_t>(f[static_cast<size_t>(i)]);
    }
    return idx;
}

std::size_t FunctionTable::shifted(std::size_t idx, int shift) const {
    auto f = tuple(idx);
    std::vector<int> g(f.size());
    for (int j = 0; j < t_; ++j) {
        int src = ((j + shift) % t_ + t_) % t_;
        g[static_cast<size_t>(j)] = f[static_cast<size_t>(src)];
    }
    return index(g);
}

// -- BlockDecomposition ---------------------------------------------------------

BlockDecomposition::BlockDecomposition(TowerPtr tower, int r)
    : tower_(std::move(tower)), r_(r), functions_(r, tower_->t()) {
    if (r < 1) throw DomainError("block decomposition requires r >= 1");
}

SubspaceBasis BlockDecomposition::block(int i) const {
    const int t = this->t();
    if (i < 0 || i >= t) throw DomainError("block index out of range");
    std::vector<Vector> rows;
    for (int j = 0; j < r_; ++j)
        rows.push_back(Vector::unit(tower_, Level::Top, ambient(), static_cast<size_t>(i * r_ + j)));
    return SubspaceBasis::span_of(rows);
}

Vector BlockDecomposition::sigma(const Vector& v) const {
    const int t = this->t();
    if (v.size() != ambient()) throw DomainError("sigma: vector length mismatch");
    std::vector<code_t> out(v.size());
    for (int i = 0; i < t; ++i) {
        int src = (i + t - 1) % t;
        for (int j = 0; j < r_; ++j)
            out[static_cast<size_t>(i * r_ + j)] = tower_->frob(v.code(static_cast<size_t>(src * r_ + j)), 1);
    }
    return {tower_, Level::Top, std::move(out), false};
}

SubspaceBasis BlockDecomposition::sigma(const SubspaceBasis& s) const {
    std::vector<Vector> rows;
    for (size_t i = 0; i < s.dim(); ++i) rows.push_back(sigma(s.basis_row(i)));
    if (rows.empty()) return SubspaceBasis::zero(tower_, Level::Top, ambient());
    return SubspaceBasis::span_of(rows);
}

bool BlockDecomposition::is_sigma_fixed_vector(const Vector& v) const { return sigma(v) == v; }

Vector BlockDecomposition::to_fix_model(const Vector& a) const {
    const int t = this->t();
    if (a.level() != Level::Sub || a.size() != ambient()) throw DomainError("to_fix_model expects a GF(q)-model vector");
    std::vector<code_t> point(static_cast<size_t>(r_));
    for (int j = 0; j < r_; ++j) {
        std::vector<code_t> coords(static_cast<size_t>(t));
        for (int l = 0; l < t; ++l) coords[static_cast<size_t>(l)] = a.code(static_cast<size_t>(j * t + l));
        point[static_cast<size_t>(j)] = tower_->assemble_from_sub(coords);
    }
    std::vector<code_t> out(ambient());
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < r_; ++j)
            out[static_cast<size_t>(i * r_ + j)] = tower_->frob(point[static_cast<size_t>(j)], i);
    return {tower_, Level::Top, std::move(out), false};
}

Vector BlockDecomposition::from_fix_model(const Vector& w) const {
    if (w.size() != ambient()) throw DomainError("from_fix_model: vector length mismatch");
    std::vector<code_t> x(static_cast<size_t>(r_));
    for (int j = 0; j < r_; ++j) x[static_cast<size_t>(j)] = w.code(static_cast<size_t>(j));
    return expand_point(Vector(tower_, Level::Top, std::move(x), false));
}

Vector BlockDecomposition::read_point(const Vector& a) const {
    const int t = this->t();
    if (a.size() != ambient()) throw DomainError("read_point: vector length mismatch");
    std::vector<code_t> out(static_cast<size_t>(r_));
    for (int j = 0; j < r_; ++j) {
        std::vector<code_t> coords(static_cast<size_t>(t));
        for (int l = 0; l < t; ++l) coords[static_cast<size_t>(l)] = a.code(static_cast<size_t>(j * t + l));
        out[static_cast<size_t>(j)] = tower_->assemble_from_sub(coords);
    }
    return {tower_, Level::Top, std::move(out), false};
}

Vector BlockDecomposition::expand_point(const Vector& x) const {
    const int t = this->t();
    if (x.size() != static_cast<size_t>(r_)) throw DomainError("expand_point: expected r coordinates");
    std::vector<code_t> out(ambient());
    for (int j = 0; j < r_; ++j) {
        auto coords = tower_->expand_over_sub(x.code(static_cast<size_t>(j)));
        for (int l = 0; l < t; ++l) out[static_cast<size_t>(j * t + l)] = coords[static_cast<size_t>(l)];
    }
    return {tower_, Level::Sub, std::move(out), false};
}

const SubspaceBasis& BlockDecomposition::fix_subgeometry_restricted() const {
    if (!fix_restricted_) {
        const int t = this->t();
        const size_t n = ambient();
        Matrix m(tower_, Level::Sub, n * static_cast<size_t>(t), n * static_cast<size_t>(t));
        size_t col = 0;
        for (size_t j = 0; j < n; ++j)
            for (int l = 0; l < t; ++l, ++col) {
                Vector basis_vec = Vector::unit(tower_, Level::Top, n, j).scaled(tower_->power_basis()[static_cast<size_t>(l)]);
                Vector diff = sigma(basis_vec) - basis_vec;
                Vector expanded = expand_to_sub(diff);
                for (size_t row = 0; row < n * static_cast<size_t>(t); ++row) m.set(row, col, expanded.code(row));
            }
        fix_restricted_ = kernel(m);
        if (fix_restricted_->dim() != n)
            throw InternalError("Fix(sigma) has unexpected GF(q)-dimension");
    }
    return *fix_restricted_;
}

// -- points and spreads -----------------------------------------------------------

std::vector<Vector> projective_points(const TowerPtr& tower, Level level, std::size_t len, std::uint64_t cap) {
    const std::uint64_t fsize = tower->level_size(level);
    std::uint64_t count = 0, power = 1;
    for (size_t j = 0; j < len; ++j) {
        count += power;
        power *= fsize;
    }
    if (count > cap)
        throw CapError("projective point enumeration of size " + std::to_string(count) + " exceeds cap " +
                       std::to_string(cap));
    std::vector<code_t> scalars;
    for (const auto& e : tower->elements(level)) scalars.push_back(e.code());
    std::vector<Vector> pts;
    pts.reserve(static_cast<size_t>(count));
    for (size_t lead = 0; lead < len; ++lead) {
        size_t tail = len - lead - 1;
        std::uint64_t combos = 1;
        for (size_t i = 0; i < tail; ++i) combos *= fsize;
        for (std::uint64_t n = 0; n < combos; ++n) {
            std::vector<code_t> v(len, 0);
            v[lead] = 1;
            std::uint64_t rest = n;
            for (size_t i = 0; i < tail; ++i) {
                v[lead + 1 + i] = scalars[static_cast<size_t>(rest % fsize)];
                rest /= fsize;
            }
            pts.emplace_back(tower, level, std::move(v), false);
        }
    }
    return pts;
}

SpreadElement field_reduce(const BlockDecomposition& bd, const Vector& x) {
    if (x.size() != static_cast<size_t>(bd.r())) throw DomainError("field_reduce: expected r coordinates");
    if (x.is_zero()) throw DomainError("field_reduce of the zero vector");
    const auto& tw = *bd.tower();
    Vector point = x.canonicalized();
    std::vector<Vector> rows;
    for (int l = 0; l < bd.t(); ++l) rows.push_back(bd.expand_point(point.scaled(tw.power_basis()[static_cast<size_t>(l)])));
    SubspaceBasis reduced = SubspaceBasis::span_of(rows);
    if (reduced.dim() != static_cast<size_t>(bd.t())) throw InternalError("field reduction lost dimension");
    return {std::move(point), std::move(reduced)};
}

std::vector<SpreadElement> desarguesian_spread(const BlockDecomposition& bd, std::uint64_t cap) {
    auto pts = projective_points(bd.tower(), Level::Top, static_cast<size_t>(bd.r()), cap);
    std::vector<SpreadElement> out;
    out.reserve(pts.size());
    for (const auto& x : pts) out.push_back(field_reduce(bd, x));
    return out;
}

bool sigma_fix_check(const BlockDecomposition& bd, const SubspaceBasis& w) {
    if (w.level() != Level::Top || w.ambient() != bd.ambient())
        throw DomainError("sigma_fix_check expects a GF(q^t)-subspace of the block-decomposed space");
    if (bd.sigma(w) != w) return false;
    SubspaceBasis restricted = restrict_scalars(w);
    SubspaceBasis fixed = meet(restricted, bd.fix_subgeometry_restricted());
    if (fixed.dim() != w.dim())
        throw InternalError("sigma-fixed subspace whose rational points have the wrong dimension");
    return true;
}

// -- alpha ------------------------------------------------------------------------

namespace {

std::vector<code_t> alpha_codes(const BlockDecomposition& bd, const Vector& x) {
    if (x.size() != static_cast<size_t>(bd.r())) throw DomainError("alpha: expected r coordinates");
    if (x.is_zero()) throw DomainError("alpha of the zero vector");
    const auto& tw = *bd.tower();
    const int r = bd.r(), t = bd.t();
    // conjugates[j][i] = x_j^{q^i}
    std::vector<code_t> conj(static_cast<size_t>(r) * static_cast<size_t>(t));
    for (int j = 0; j < r; ++j) {
        code_t v = x.code(static_cast<size_t>(j));
        for (int i = 0; i < t; ++i) {
            conj[static_cast<size_t>(j * t + i)] = v;
            v = tw.frob(v, 1);
        }
    }
    const auto& ft = bd.functions();
    std::vector<code_t> out(ft.size());
    // lexicographic walk: digits of the index give f directly
    std::vector<int> f(static_cast<size_t>(t), 0);
    for (size_t idx = 0; idx < ft.size(); ++idx) {
        code_t prod = 1;
        for (int i = 0; i < t && prod; ++i) prod = tw.mul(prod, conj[static_cast<size_t>(f[static_cast<size_t>(i)] * t + i)]);
        out[idx] = prod;
        for (int i = t - 1; i >= 0; --i) {
            if (++f[static_cast<size_t>(i)] < r) break;
            f[static_cast<size_t>(i)] = 0;
        }
    }
    return out;
}

} // namespace

Vector alpha_raw(const BlockDecomposition& bd, const Vector& x) {
    return {bd.tower(), Level::Top, alpha_codes(bd, x), false};
}

Vector alpha(const BlockDecomposition& bd, const Vector& x) { return alpha_raw(bd, x).canonicalized(); }

std::size_t alpha_rank(const BlockDecomposition& bd, const std::vector<Vector>& points) {
    IncrementalRref inc(bd.tower(), Level::Top, bd.functions().size());
    for (const auto& x : points) inc.add_codes(alpha_codes(bd, x));
    return inc.rank();
}

PluckerVector fix_span_wedge(const BlockDecomposition& bd, const Vector& x) {
    if (x.size() != static_cast<size_t>(bd.r())) throw DomainError("fix_span_wedge: expected r coordinates");
    if (x.is_zero()) throw DomainError("fix_span_wedge of the zero vector");
    const int r = bd.r(), t = bd.t();
    std::vector<code_t> xhat(bd.ambient(), 0);
    for (int j = 0; j < r; ++j) xhat[static_cast<size_t>(j)] = x.code(static_cast<size_t>(j));
    Vector cur(bd.tower(), Level::Top, std::move(xhat), false);
    std::vector<Vector> rows;
    for (int i = 0; i < t; ++i) {
        rows.push_back(cur);
        if (i + 1 < t) cur = bd.sigma(cur);
    }
    return wedge(rows);
}

const std::vector<code_t>& BlockDecomposition::diagram_sign_pattern() const {
    if (sign_pattern_.empty()) {
        const auto& tw = *tower_;
        Vector ones(tower_, Level::Top, std::vector<code_t>(static_cast<size_t>(r_), 1), false);
        auto w = fix_span_wedge(*this, ones);
        auto a = alpha_codes(*this, ones); // all entries 1
        const auto& ft = functions_;
        const int t = this->t();
        std::vector<code_t> pattern(ft.size());
        const code_t minus_one = tw.neg(1);
        for (size_t idx = 0; idx < ft.size(); ++idx) {
            auto f = ft.tuple(idx);
            std::uint32_t mask = 0;
            for (int i = 0; i < t; ++i) mask |= 1u << (i * r_ + f[static_cast<size_t>(i)]);
            code_t ratio = tw.mul(w.coord(w.table()->index_of_mask(mask)), tw.inv(a[idx]));
            if (ratio != 1 && ratio != minus_one)
                throw InternalError("diagram sign pattern is not a sign");
            pattern[idx] = ratio;
        }
        sign_pattern_ = std::move(pattern);
    }
    return sign_pattern_;
}

bool diagram_commutes(const BlockDecomposition& bd, const Vector& x) {
    const auto& tw = *bd.tower();
    const int r = bd.r(), t = bd.t();
    auto w = fix_span_wedge(bd, x);
    auto a = alpha_codes(bd, x);
    const auto& pattern = bd.diagram_sign_pattern();
    const auto& ft = bd.functions();
    // one-index-per-block coordinates match alpha up to the sign pattern
    std::vector<bool> seen(w.coords().size(), false);
    for (size_t idx = 0; idx < ft.size(); ++idx) {
        auto f = ft.tuple(idx);
        std::uint32_t mask = 0;
        for (int i = 0; i < t; ++i) mask |= 1u << (i * r + f[static_cast<size_t>(i)]);
        size_t wi = w.table()->index_of_mask(mask);
        seen[wi] = true;
        if (w.coord(wi) != tw.mul(pattern[idx], a[idx])) return false;
    }
    // all other coordinates vanish
    for (size_t i = 0; i < w.coords().size(); ++i)
        if (!seen[i] && w.coord(i) != 0) return false;
    return true;
}

Vector sigma_dagger(const BlockDecomposition& bd, const Vector& v) {
    const auto& ft = bd.functions();
    if (v.size() != ft.size()) throw DomainError("sigma_dagger: expected r^t coordinates");
    const auto& tw = *bd.tower();
    std::vector<code_t> out(v.size());
    for (size_t idx = 0; idx < ft.size(); ++idx) out[idx] = tw.frob(v.code(ft.shifted(idx, 1)), 1);
    return {bd.tower(), Level::Top, std::move(out), false};
}

// -- Segre structure ------------------------------------------------------------------

bool rank_one_check(const BlockDecomposition& bd, const SpreadElement& elt, bool /*subgeometry_expected*/) {
    const auto& tw = *bd.tower();
    const int r = bd.r(), t = bd.t();
    auto scalars = tw.elements(Level::Sub);
    const size_t dim = elt.reduced.dim();
    // walk all nonzero GF(q)-combinations of the basis rows
    std::vector<size_t> digit(dim, 0);
    std::uint64_t total = 1;
    for (size_t i = 0; i < dim; ++i) total *= scalars.size();
    for (std::uint64_t nidx = 1; nidx < total; ++nidx) {
        std::uint64_t rest = nidx;
        std::vector<code_t> v(bd.ambient(), 0);
        for (size_t i = 0; i < dim; ++i) {
            code_t c = scalars[static_cast<size_t>(rest % scalars.size())].code();
            rest /= scalars.size();
            if (!c) continue;
            for (size_t j = 0; j < bd.ambient(); ++j)
                v[j] = tw.add(v[j], tw.mul(c, elt.reduced.matrix().at(i, j)));
        }
        Matrix reshaped(bd.tower(), Level::Sub, static_cast<size_t>(r), static_cast<size_t>(t));
        for (int j = 0; j < r; ++j)
            for (int l = 0; l < t; ++l) reshaped.set(static_cast<size_t>(j), static_cast<size_t>(l), v[static_cast<size_t>(j * t + l)]);
        if (rank_of(reshaped) != 1) return false;
    }
    return true;
}

SubspaceBasis segre_spread_element(const BlockDecomposition& bd, const Vector& x) {
    if (x.is_zero()) throw DomainError("segre_spread_element of the zero vector");
    const int r = bd.r(), t = bd.t();
    // Pi*_u over GF(q^t)
    std::vector<code_t> xhat(bd.ambient(), 0);
    for (int j = 0; j < r; ++j) xhat[static_cast<size_t>(j)] = x.canonicalized().code(static_cast<size_t>(j));
    Vector cur(bd.tower(), Level::Top, std::move(xhat), false);
    std::vector<Vector> rows;
    for (int i = 0; i < t; ++i) {
        rows.push_back(cur);
        if (i + 1 < t) cur = bd.sigma(cur);
    }
    SubspaceBasis pi_star = SubspaceBasis::span_of(rows);
    // solve the sigma-fixpoint equations: restrict scalars, intersect with Fix
    SubspaceBasis fixed_part = meet(restrict_scalars(pi_star), bd.fix_subgeometry_restricted());
    std::vector<Vector> reduced_rows;
    for (size_t i = 0; i < fixed_part.dim(); ++i) {
        Vector fix_vec = assemble_from_sub(fixed_part.basis_row(i), t);
        if (!bd.is_sigma_fixed_vector(fix_vec)) throw InternalError("fixpoint solution is not sigma-fixed");
        reduced_rows.push_back(bd.from_fix_model(fix_vec));
    }
    if (reduced_rows.empty()) throw InternalError("empty sigma-fixpoint intersection");
    return SubspaceBasis::span_of(reduced_rows);
}

} // namespace fingeo
