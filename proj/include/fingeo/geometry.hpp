#pragma once

#include <optional>

#include "fingeo/exterior.hpp"

namespace fingeo {

/// Ordered table of the functions f: {0..t-1} -> {0..r-1}, lexicographic in
/// (f(0), ..., f(t-1)). Coordinatizes the spread variety's ambient space of
/// dimension r^t.
class FunctionTable {
public:
    FunctionTable(int r, int t);
    int r() const { return r_; }
    int t() const { return t_; }
    std::size_t size() const { return size_; }
    std::vector<int> tuple(std::size_t index) const;
    std::size_t index(const std::vector<int>& f) const;
    /// Index of f' with f'(j) = f((j + shift) mod t).
    std::size_t shifted(std::size_t index, int shift) const;

private:
    int r_, t_;
    std::size_t size_;
};

/// GF(q^t)^{rt} split into t column blocks U_i of width r, with the
/// Frobenius collineation sigma (cyclic block shift + entrywise q-th power)
/// whose fixed points form the rational subgeometry PG(rt-1,q).
///
/// Two coordinatizations of that subgeometry are used:
///  - the GF(q)-model GF(q)^{rt}, coordinate-major: slot j*t+l is the
///    xi^l-coefficient of the j-th GF(q^t)-coordinate;
///  - the fix model: vectors (v, v^q, ..., v^{q^{t-1}}) in GF(q^t)^{rt}.
/// to_fix_model / from_fix_model translate between them.
class BlockDecomposition {
public:
    BlockDecomposition(TowerPtr tower, int r);

    int r() const { return r_; }
    int t() const { return tower_->t(); }
    const TowerPtr& tower() const { return tower_; }
    std::size_t ambient() const { return static_cast<std::size_t>(r_) * static_cast<std::size_t>(t()); }

    SubspaceBasis block(int i) const;
    Vector sigma(const Vector& v) const;
    SubspaceBasis sigma(const SubspaceBasis& s) const;
    bool is_sigma_fixed_vector(const Vector& v) const;

    Vector to_fix_model(const Vector& a) const;
    Vector from_fix_model(const Vector& w) const;
    /// Read a GF(q)-model vector as the point of PG(r-1,q^t) it expands.
    Vector read_point(const Vector& a) const;
    Vector expand_point(const Vector& x) const;

    /// Fix(sigma) inside the scalar restriction of GF(q^t)^{rt} (ambient
    /// rt*t over GF(q)); dimension rt.
    const SubspaceBasis& fix_subgeometry_restricted() const;

    const FunctionTable& functions() const { return functions_; }
    /// Per-(r,t) scalars relating the one-index-per-block Pluecker
    /// coordinates of a spread element to the alpha monomials; computed once
    /// from the all-ones point and cached. Entries are +-1.
    const std::vector<code_t>& diagram_sign_pattern() const;

private:
    TowerPtr tower_;
    int r_;
    FunctionTable functions_;
    mutable std::optional<SubspaceBasis> fix_restricted_;
    mutable std::vector<code_t> sign_pattern_;
};

/// One element of the Desarguesian spread: the point of PG(r-1,q^t) it
/// represents and its field reduction, a dim-t GF(q)-subspace of GF(q)^{rt}.
struct SpreadElement {
    Vector point;
    SubspaceBasis reduced;
};

/// Canonical representatives (first nonzero coordinate 1) of the points of
/// the projective space of F^len at the given level, deterministic order.
std::vector<Vector> projective_points(const TowerPtr& tower, Level level, std::size_t len,
                                      std::uint64_t cap = FieldTower::kDefaultEnumCap);

/// Linear representation of a point: the GF(q)-subspace {lambda x}.
SpreadElement field_reduce(const BlockDecomposition& bd, const Vector& x);

/// One spread element per point of PG(r-1,q^t).
std::vector<SpreadElement> desarguesian_spread(const BlockDecomposition& bd,
                                               std::uint64_t cap = FieldTower::kDefaultEnumCap);

/// True iff sigma(w) = w as subspaces; when true, the GF(q)-dimension of
/// w meet Fix(sigma) is asserted to equal dim w.
bool sigma_fix_check(const BlockDecomposition& bd, const SubspaceBasis& w);

/// Monomial coordinates of the spread variety: value at f is
/// prod_i x_{f(i)}^{q^i}. Canonically scaled; alpha_raw keeps raw values.
Vector alpha(const BlockDecomposition& bd, const Vector& x);
Vector alpha_raw(const BlockDecomposition& bd, const Vector& x);

/// Rank over GF(q^t) of the stacked alpha images of the given points.
std::size_t alpha_rank(const BlockDecomposition& bd, const std::vector<Vector>& points);

/// Raw Pluecker coordinates (wedge fold, no scaling) of the span
/// <xhat, xhat^sigma, ..., xhat^{sigma^{t-1}}>, xhat = x placed in U_0.
PluckerVector fix_span_wedge(const BlockDecomposition& bd, const Vector& x);

/// Checks the diagram: the wedge coordinates of the field-reduced element
/// vanish off the one-index-per-block subsets and match alpha there, up to
/// the cached per-(r,t) sign pattern.
bool diagram_commutes(const BlockDecomposition& bd, const Vector& x);

/// Induced collineation on the r^t monomial coordinates.
Vector sigma_dagger(const BlockDecomposition& bd, const Vector& v);

/// True iff every point of the reduced subspace, reshaped as the r x t
/// matrix of GF(q)-expansion coefficients, has rank 1 (lies on the Segre
/// variety). The flag records the caller's expectation for reporting only.
bool rank_one_check(const BlockDecomposition& bd, const SpreadElement& elt, bool subgeometry_expected = false);

/// Verification path for the Segre-spread correspondence: construct
/// Pi*_u over GF(q^t), intersect with Fix(sigma) by solving the fixpoint
/// equations, and return the result in the GF(q)-model. Equals
/// field_reduce(x).reduced.
SubspaceBasis segre_spread_element(const BlockDecomposition& bd, const Vector& x);

} // namespace fingeo
