#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "fingeo/linalg.hpp"

namespace fingeo {

/// Ordered table of all k-subsets of {0..n-1} in lexicographic order, with
/// inverse lookup. Coordinatizes the exterior power: dim = binom(n,k).
/// Immutable and shareable; instances are cached per (n,k), with an optional
/// on-disk layer under FINGEO_CACHE_DIR (validated on load, recomputed on
/// any mismatch).
class IndexTable {
public:
    static std::shared_ptr<const IndexTable> get(int n, int k);

    int n() const { return n_; }
    int k() const { return k_; }
    std::size_t size() const { return subsets_.size(); }
    const std::vector<std::uint8_t>& subset(std::size_t i) const { return subsets_[i]; }
    std::uint32_t mask(std::size_t i) const { return masks_[i]; }
    std::size_t index_of_mask(std::uint32_t mask) const;
    /// Sign of the permutation (subset, complement) of {0..n-1}: +1 or -1,
    /// as the parity of sum(subset[i] - i).
    int complement_sign(std::size_t i) const;
    std::uint32_t complement_mask(std::size_t i) const;

    static std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

protected:
    IndexTable(int n, int k);

private:
    int n_, k_;
    std::vector<std::vector<std::uint8_t>> subsets_;
    std::vector<std::uint32_t> masks_;
    std::unordered_map<std::uint32_t, std::size_t> lookup_;
};

using IndexTablePtr = std::shared_ptr<const IndexTable>;

/// Coordinate vector on an exterior power, indexed by an IndexTable.
/// The zero vector is representable (a wedge of dependent vectors); points
/// of the projective embedding are canonicalized to first nonzero = 1.
class PluckerVector {
public:
    PluckerVector(IndexTablePtr table, Vector coords);

    const IndexTablePtr& table() const { return table_; }
    const Vector& coords() const { return coords_; }
    code_t coord(std::size_t i) const { return coords_.code(i); }
    bool is_zero() const { return coords_.is_zero(); }
    PluckerVector canonicalized() const { return {table_, coords_.canonicalized()}; }
    bool operator==(const PluckerVector& o) const;

private:
    IndexTablePtr table_;
    Vector coords_;
};

/// Pluecker image of a k-dimensional subspace: coordinate at S = k x k minor
/// of the basis matrix on columns S, scaled so the first nonzero coordinate
/// is 1. Computed from minors directly (the wedge fold is a separate code
/// path, cross-checked in tests).
PluckerVector plucker(const SubspaceBasis& w);
PluckerVector plucker(const SubspaceBasis& w, const IndexTablePtr& table);

/// Multilinear alternating expansion of v_1 ^ ... ^ v_k. Zero iff the
/// vectors are dependent; not projectively normalized.
PluckerVector wedge(const std::vector<Vector>& vectors);

/// One step of the wedge fold: (w ^ v) for w on (n,l) coordinates.
Vector wedge_extend(const IndexTablePtr& from, const Vector& w, const Vector& v, const IndexTablePtr& to);

/// The linear form on the k-th exterior power sending a pure wedge to its
/// full n-fold wedge against a fixed basis of c (dim c = n-k): coefficient
/// at S is the complementary minor times the sign of (S, complement).
Vector hodge_form(const SubspaceBasis& c, const IndexTablePtr& table);

/// Kernel of an alternating k-form given by dual coordinates: the set of x
/// with f(x, ., ..., .) = 0.
SubspaceBasis form_kernel(const Vector& form, const IndexTablePtr& table, const TowerPtr& tower, Level level);

struct DecomposabilityResult {
    bool decomposable = false;
    std::optional<SubspaceBasis> witness; // the subspace w with plucker(w) ~ v
};

/// Wedge-kernel test: v is totally decomposable iff dim{x : x ^ v = 0} = k,
/// in which case that kernel is the witness subspace.
DecomposabilityResult is_decomposable(const PluckerVector& v);

} // namespace fingeo
