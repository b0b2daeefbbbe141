#include "fingeo/linset.hpp"

#include <algorithm>
#include <sstream>

namespace fingeo {

// -- expression parser ---------------------------------------------------------

namespace {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            throw ParseError(std::string("expected '") + c + "' " + what, pos, token_here());
        ++pos;
    }
    std::string token_here() const {
        if (pos >= text.size()) return "<end>";
        std::size_t end = pos;
        auto issym = [&](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
        if (issym(text[end])) {
            while (end < text.size() && issym(text[end])) ++end;
        } else {
            ++end;
        }
        return text.substr(pos, end - pos);
    }
    std::uint64_t integer(const char* what) {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw ParseError(std::string("expected an integer ") + what, pos, token_here());
        std::uint64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + static_cast<std::uint64_t>(text[pos] - '0');
            if (v > (1ull << 40)) throw ParseError("integer literal too large", pos, token_here());
            ++pos;
        }
        return v;
    }
    std::string identifier() {
        skip_ws();
        if (pos >= text.size() || !(std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            throw ParseError("expected a variable name", pos, token_here());
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return text.substr(start, pos - start);
    }
};

code_t parse_coeff(Lexer& lx, const TowerPtr& tower) {
    lx.skip_ws();
    if (lx.peek() == '[') {
        std::size_t at = lx.pos;
        lx.expect('[', "to open a coefficient list");
        std::vector<int> coeffs;
        if (!lx.accept(']')) {
            do {
                coeffs.push_back(static_cast<int>(lx.integer("coefficient")));
            } while (lx.accept(','));
            lx.expect(']', "to close the coefficient list");
        }
        if (coeffs.size() > static_cast<size_t>(tower->degree()))
            throw ParseError("coefficient list longer than e*t", at, "[");
        return tower->from_coeffs(coeffs).code();
    }
    std::size_t at = lx.pos;
    std::uint64_t v = lx.integer("coefficient");
    if (v >= tower->size())
        throw ParseError("integer literal " + std::to_string(v) + " is not an element code (field size " +
                             std::to_string(tower->size()) + ")",
                         at, std::to_string(v));
    return static_cast<code_t>(v);
}

// ['^q' ['^' int]] with x^{q^k} also accepted
int parse_frobenius(Lexer& lx, const TowerPtr& tower, std::vector<ParseWarning>* warnings) {
    if (!lx.accept('^')) return 0;
    std::size_t at = lx.pos;
    bool braced = lx.accept('{');
    lx.skip_ws();
    if (lx.peek() != 'q')
        throw ParseError("Frobenius power must be written ^q or ^{q^k}", lx.pos, lx.token_here());
    ++lx.pos;
    int exponent = 1;
    if (lx.accept('^')) exponent = static_cast<int>(lx.integer("Frobenius exponent"));
    if (braced) lx.expect('}', "to close the Frobenius power");
    if (exponent >= tower->t()) {
        if (warnings)
            warnings->push_back(
                {"Frobenius exponent " + std::to_string(exponent) + " reduced mod t=" + std::to_string(tower->t()),
                 at});
        exponent %= tower->t();
    }
    return exponent;
}

} // namespace

Expr parse_expression(const std::string& text, const std::vector<VariableSpec>& vars, const TowerPtr& tower,
                      std::vector<ParseWarning>* warnings) {
    Lexer lx{text};
    Expr expr;
    do {
        ExprTerm term;
        lx.skip_ws();
        char c = lx.peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '[') {
            term.coeff = parse_coeff(lx, tower);
            lx.expect('*', "between the coefficient and the variable");
        }
        std::size_t at = lx.pos;
        std::string name = lx.identifier();
        auto it = std::find_if(vars.begin(), vars.end(), [&](const VariableSpec& v) { return v.name == name; });
        if (it == vars.end()) throw ParseError("unknown variable '" + name + "'", at, name);
        term.var = static_cast<size_t>(it - vars.begin());
        term.frob = parse_frobenius(lx, tower, warnings);
        expr.terms.push_back(term);
    } while (lx.accept('+'));
    if (!lx.eof()) throw ParseError("unexpected trailing input", lx.pos, lx.token_here());
    return expr;
}

std::string expression_to_string(const Expr& e, const std::vector<VariableSpec>& vars, const TowerPtr& tower) {
    std::ostringstream os;
    for (size_t i = 0; i < e.terms.size(); ++i) {
        const auto& t = e.terms[i];
        if (i) os << " + ";
        if (t.coeff != 1) os << tower->element(t.coeff).to_string() << "*";
        os << vars[t.var].name;
        if (t.frob == 1) os << "^q";
        if (t.frob > 1) os << "^q^" << t.frob;
    }
    if (e.terms.empty()) os << "0";
    return os.str();
}

// -- LinearSetSpec ------------------------------------------------------------------

LinearSetSpec::LinearSetSpec(TowerPtr tower, int r, std::vector<VariableSpec> vars, std::vector<std::string> coords)
    : tower_(std::move(tower)), r_(r), vars_(std::move(vars)), coord_strings_(std::move(coords)) {
    if (r_ < 1) throw ConfigError("linear set spec requires r >= 1");
    if (vars_.empty()) throw ConfigError("linear set spec requires at least one variable");
    for (size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        if (v.name.empty()) throw ConfigError("variable without a name");
        if (v.degree < 1 || tower_->t() % v.degree != 0)
            throw ConfigError("variable '" + v.name + "' has degree " + std::to_string(v.degree) +
                              ", which does not divide t=" + std::to_string(tower_->t()));
        if (v.dimension() < 1)
            throw ConfigError("variable '" + v.name + "' has no degrees of freedom after its constraints");
        for (size_t j = 0; j < i; ++j)
            if (vars_[j].name == v.name) throw ConfigError("duplicate variable name '" + v.name + "'");
    }
    if (coord_strings_.size() != static_cast<size_t>(r_))
        throw ConfigError("expected " + std::to_string(r_) + " coordinate expressions, got " +
                          std::to_string(coord_strings_.size()));
    for (size_t i = 0; i < coord_strings_.size(); ++i) {
        try {
            coords_.push_back(parse_expression(coord_strings_[i], vars_, tower_, &warnings_));
        } catch (const ParseError& e) {
            throw ParseError("coordinate " + std::to_string(i) + ": " + e.what(), e.column(), e.token());
        }
    }
    int m1 = declared_rank();
    int lo = r_, hi = r_ * tower_->t() - tower_->t();
    if (m1 < lo || m1 > hi)
        throw ConfigError("rank m+1=" + std::to_string(m1) + " violates r <= m+1 <= rt-t (" + std::to_string(lo) +
                          " <= m+1 <= " + std::to_string(hi) + ")");
}

int LinearSetSpec::declared_rank() const {
    int m1 = 0;
    for (const auto& v : vars_) m1 += v.dimension();
    return m1;
}

// -- build_W ----------------------------------------------------------------------------

SubspaceBasis build_W(const BlockDecomposition& bd, const LinearSetSpec& spec) {
    const auto& tw = *bd.tower();
    if (!tw.same_as(*spec.tower())) throw FieldMismatchError("spec and block decomposition use different towers");
    if (bd.r() != spec.r()) throw DomainError("spec and block decomposition disagree on r");
    IncrementalRref inc(bd.tower(), Level::Sub, bd.ambient());
    for (size_t vi = 0; vi < spec.vars().size(); ++vi) {
        const auto& var = spec.vars()[vi];
        auto domain = tw.intermediate_field_basis(var.degree, var.trace_zero);
        if (static_cast<int>(domain.size()) != var.dimension())
            throw InternalError("variable domain basis has unexpected dimension");
        for (code_t b : domain) {
            std::vector<code_t> x(static_cast<size_t>(spec.r()), 0);
            for (int j = 0; j < spec.r(); ++j) {
                code_t acc = 0;
                for (const auto& term : spec.coords()[static_cast<size_t>(j)].terms) {
                    if (term.var != vi) continue;
                    acc = tw.add(acc, tw.mul(term.coeff, tw.frob(b, term.frob)));
                }
                x[static_cast<size_t>(j)] = acc;
            }
            inc.add(bd.expand_point(Vector(bd.tower(), Level::Top, std::move(x), false)));
        }
    }
    if (static_cast<int>(inc.rank()) != spec.declared_rank())
        throw ConfigError("inconsistent spec: declared rank " + std::to_string(spec.declared_rank()) +
                          " but the expanded coordinate vectors span dimension " + std::to_string(inc.rank()));
    return inc.to_basis();
}

// -- points, weights, minimality ----------------------------------------------------------

std::vector<PointWithWeight> points_and_weights(const BlockDecomposition& bd, const SubspaceBasis& W,
                                                std::uint64_t cap) {
    if (W.level() != Level::Sub || W.ambient() != bd.ambient())
        throw DomainError("points_and_weights expects W in the GF(q)-model");
    const auto& tw = *bd.tower();
    const size_t m1 = W.dim();
    std::uint64_t total = 1;
    for (size_t i = 0; i < m1; ++i) {
        total *= tw.q();
        if (total > cap)
            throw CapError("enumerating q^{m+1} = " + std::to_string(total) + "+ vectors exceeds cap " +
                           std::to_string(cap));
    }
    std::vector<code_t> scalars;
    for (const auto& e : tw.elements(Level::Sub)) scalars.push_back(e.code());
    std::map<std::vector<code_t>, int> weights; // canonical point -> weight (deterministic order)
    std::vector<size_t> digit(m1, 0);
    for (std::uint64_t n = 1; n < total; ++n) {
        // odometer over coefficient tuples, last digit fastest
        size_t i = m1;
        while (i-- > 0) {
            if (++digit[i] < scalars.size()) break;
            digit[i] = 0;
        }
        std::vector<code_t> w(bd.ambient(), 0);
        for (size_t k = 0; k < m1; ++k) {
            code_t c = scalars[digit[k]];
            if (!c) continue;
            for (size_t j = 0; j < bd.ambient(); ++j) w[j] = tw.add(w[j], tw.mul(c, W.matrix().at(k, j)));
        }
        Vector point = bd.read_point(Vector(bd.tower(), Level::Sub, std::move(w), false)).canonicalized();
        weights.emplace(point.codes(), -1);
    }
    std::vector<PointWithWeight> out;
    out.reserve(weights.size());
    for (auto& [codes, weight] : weights) {
        Vector point(bd.tower(), Level::Top, codes, false);
        weight = static_cast<int>(meet(W, field_reduce(bd, point).reduced).dim());
        out.push_back({std::move(point), weight});
    }
    return out;
}

bool minimality_check(const BlockDecomposition& bd, const SubspaceBasis& W,
                      const std::vector<PointWithWeight>& points) {
    IncrementalRref span(bd.tower(), Level::Sub, bd.ambient());
    for (const auto& pw : points) {
        if (pw.weight != 1) continue;
        SubspaceBasis common = meet(W, field_reduce(bd, pw.point).reduced);
        if (common.dim() != 1) throw InternalError("weight-1 point with a larger intersection");
        span.add(common.basis_row(0));
    }
    return span.rank() == W.dim();
}

// -- W* and the block parameters ------------------------------------------------------------

SubspaceBasis extend_to_W_star(const BlockDecomposition& bd, const SubspaceBasis& W) {
    if (W.level() != Level::Sub || W.ambient() != bd.ambient())
        throw DomainError("extend_to_W_star expects W in the GF(q)-model");
    std::vector<Vector> rows;
    for (size_t i = 0; i < W.dim(); ++i) rows.push_back(bd.to_fix_model(W.basis_row(i)));
    if (rows.empty()) return SubspaceBasis::zero(bd.tower(), Level::Top, bd.ambient());
    SubspaceBasis W_star = SubspaceBasis::span_of(rows);
    if (W_star.dim() != W.dim())
        throw InternalError("GF(q^t)-extension of W changed dimension");
    if (!sigma_fix_check(bd, W_star)) throw InternalError("W* is not sigma-fixed");
    return W_star;
}

BlockParams block_params(const BlockDecomposition& bd, const SubspaceBasis& W) {
    BlockParams out{.h = 0, .c = 0, .proper = false, .h_per_block = {}, .t2_identity = true, .h_bound = true,
                    .W_star = extend_to_W_star(bd, W)};
    const int r = bd.r(), t = bd.t();
    const int m1 = static_cast<int>(W.dim());
    for (int i = 0; i < t; ++i)
        out.h_per_block.push_back(static_cast<int>(meet(bd.block(i), out.W_star).dim()));
    for (int i = 1; i < t; ++i)
        if (out.h_per_block[static_cast<size_t>(i)] != out.h_per_block[0])
            throw InternalError("dim(U_i meet W*) differs between blocks");
    out.h = out.h_per_block[0];
    out.c = r - out.h;
    // proper: the projection of W* on U_0 spans U_0 (and the rank bound
    // m+1 <= rt-t, enforced at spec validation, rules out the full set)
    Matrix proj(bd.tower(), Level::Top, out.W_star.dim(), static_cast<size_t>(r));
    for (size_t i = 0; i < out.W_star.dim(); ++i)
        for (int j = 0; j < r; ++j) proj.set(i, static_cast<size_t>(j), out.W_star.matrix().at(i, static_cast<size_t>(j)));
    bool spans = rank_of(proj) == static_cast<size_t>(r);
    out.proper = spans && m1 <= r * t - t;
    if (out.proper) {
        if (t == 2) out.t2_identity = (out.h == m1 - r);
        if (t > 2) out.h_bound = (out.h * (t - 1) <= m1 - r);
    }
    return out;
}

LinearSetReport analyze_linear_set(const BlockDecomposition& bd, const SubspaceBasis& W, std::uint64_t cap) {
    LinearSetReport rep;
    rep.rank = static_cast<int>(W.dim());
    auto points = points_and_weights(bd, W, cap);
    rep.point_count = points.size();
    const auto& tw = *bd.tower();
    // sum over points of (q^w - 1) must count the nonzero vectors of W
    unsigned long long covered = 0;
    for (const auto& pw : points) {
        ++rep.weight_spectrum[pw.weight];
        unsigned long long qw = 1;
        for (int i = 0; i < pw.weight; ++i) qw *= tw.q();
        covered += qw - 1;
    }
    unsigned long long qm1 = 1;
    for (int i = 0; i < rep.rank; ++i) qm1 *= tw.q();
    rep.vector_count_identity = (covered == qm1 - 1);
    rep.minimal = minimality_check(bd, W, points);
    BlockParams bp = block_params(bd, W);
    rep.proper = bp.proper;
    rep.h = bp.h;
    rep.c = bp.c;
    rep.h_per_block = bp.h_per_block;
    rep.t2_identity = bp.t2_identity;
    rep.h_bound = bp.h_bound;
    return rep;
}

} // namespace fingeo
