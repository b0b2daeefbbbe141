#pragma once

#include <map>
#include <string>

#include "fingeo/geometry.hpp"

namespace fingeo {

struct VariableSpec {
    std::string name;
    int degree = 1;          // domain GF(q^degree), degree | t
    bool trace_zero = false; // restrict to the trace-zero hyperplane over GF(q)
    int dimension() const { return degree - (trace_zero ? 1 : 0); }
};

/// One summand of a coordinate expression: coeff * var^{q^frob}.
struct ExprTerm {
    code_t coeff = 1;
    std::size_t var = 0;
    int frob = 0;
};

struct Expr {
    std::vector<ExprTerm> terms;
};

struct ParseWarning {
    std::string message;
    std::size_t column = 0;
};

/// Recursive-descent parser for the coordinate grammar
///     expr := term ('+' term)*
///     term := [coeff '*'] var ['^q' ['^' int]]
/// The braced spelling var^{q^k} is also accepted. Coefficients are field
/// element literals: a small integer (little-endian base-p digit encoding)
/// or a coefficient list like [1,0,1]. Whitespace-insensitive.
/// Frobenius exponents >= t are reduced mod t with a warning.
Expr parse_expression(const std::string& text, const std::vector<VariableSpec>& vars, const TowerPtr& tower,
                      std::vector<ParseWarning>* warnings = nullptr);

std::string expression_to_string(const Expr& e, const std::vector<VariableSpec>& vars, const TowerPtr& tower);

/// Parametric description of a defining subspace W: variables with
/// subfield/trace constraints and r coordinate expressions, GF(q)-linear by
/// construction of the grammar.
class LinearSetSpec {
public:
    LinearSetSpec(TowerPtr tower, int r, std::vector<VariableSpec> vars, std::vector<std::string> coords);

    const TowerPtr& tower() const { return tower_; }
    int r() const { return r_; }
    int t() const { return tower_->t(); }
    const std::vector<VariableSpec>& vars() const { return vars_; }
    const std::vector<Expr>& coords() const { return coords_; }
    const std::vector<std::string>& coord_strings() const { return coord_strings_; }
    const std::vector<ParseWarning>& warnings() const { return warnings_; }
    /// Declared rank m+1: the sum of the variable dimensions.
    int declared_rank() const;

private:
    TowerPtr tower_;
    int r_;
    std::vector<VariableSpec> vars_;
    std::vector<std::string> coord_strings_;
    std::vector<Expr> coords_;
    std::vector<ParseWarning> warnings_;
};

/// The defining subspace W in the GF(q)-model GF(q)^{rt}: the span of the
/// expanded coordinate vectors over a GF(q)-basis of the constrained
/// variable domains. Throws ConfigError when the computed rank differs from
/// the declared one (inconsistent spec).
SubspaceBasis build_W(const BlockDecomposition& bd, const LinearSetSpec& spec);

struct PointWithWeight {
    Vector point; // canonical homogeneous coordinates in PG(r-1,q^t)
    int weight;   // dim of W meet field_reduce(point)
};

/// All points of the linear set with their weights, by exhaustive
/// enumeration of the q^{m+1}-1 nonzero vectors of W. Deterministic order.
std::vector<PointWithWeight> points_and_weights(const BlockDecomposition& bd, const SubspaceBasis& W,
                                                std::uint64_t cap = FieldTower::kDefaultEnumCap);

/// Spanning criterion on the weight-1 points: true iff their W-vectors span
/// W. False signals that a smaller defining subspace exists.
bool minimality_check(const BlockDecomposition& bd, const SubspaceBasis& W,
                      const std::vector<PointWithWeight>& points);

struct BlockParams {
    int h = 0; ///< dim(U_i meet W*), equal across blocks
    int c = 0; ///< r - h = dim of the projected blocks
    bool proper = false;
    std::vector<int> h_per_block;
    bool t2_identity = true; ///< h = m+1-r (t = 2, proper)
    bool h_bound = true;     ///< h*(t-1) <= m+1-r (t > 2, proper)
    SubspaceBasis W_star;    ///< the sigma-fixed GF(q^t)-extension of W
};

/// Extension W* of W: the GF(q^t)-row-span of the fix-model images of W's
/// basis. Verified sigma-fixed.
SubspaceBasis extend_to_W_star(const BlockDecomposition& bd, const SubspaceBasis& W);

BlockParams block_params(const BlockDecomposition& bd, const SubspaceBasis& W);

struct LinearSetReport {
    int rank = 0;
    std::uint64_t point_count = 0;
    std::map<int, std::uint64_t> weight_spectrum;
    bool vector_count_identity = false; ///< sum over points of (q^w - 1) = q^{m+1} - 1
    bool proper = false;
    bool minimal = false;
    int h = 0;
    int c = 0;
    std::vector<int> h_per_block;
    bool t2_identity = true;
    bool h_bound = true;
};

LinearSetReport analyze_linear_set(const BlockDecomposition& bd, const SubspaceBasis& W,
                                   std::uint64_t cap = FieldTower::kDefaultEnumCap);

} // namespace fingeo
