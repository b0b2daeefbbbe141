#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "fingeo/gf.hpp"

namespace fingeo {

/// Dense coordinate vector over one tower level.
class Vector {
public:
    Vector(TowerPtr tower, Level level, std::vector<code_t> codes, bool validate = true);
    static Vector zero(TowerPtr tower, Level level, std::size_t n);
    static Vector unit(TowerPtr tower, Level level, std::size_t n, std::size_t i);

    std::size_t size() const { return codes_.size(); }
    code_t code(std::size_t i) const { return codes_[i]; }
    void set_code(std::size_t i, code_t c) { codes_[i] = c; }
    const std::vector<code_t>& codes() const { return codes_; }
    FieldElement at(std::size_t i) const;
    const TowerPtr& tower() const { return tower_; }
    Level level() const { return level_; }
    bool is_zero() const;

    Vector operator+(const Vector& o) const;
    Vector operator-(const Vector& o) const;
    Vector scaled(code_t c) const;
    code_t dot(const Vector& o) const;
    bool operator==(const Vector& o) const;
    bool operator!=(const Vector& o) const { return !(*this == o); }

    /// Projective normalization: first nonzero coordinate scaled to 1.
    Vector canonicalized() const;

private:
    TowerPtr tower_;
    Level level_;
    std::vector<code_t> codes_;
};

/// Dense row-major matrix over one tower level.
class Matrix {
public:
    Matrix(TowerPtr tower, Level level, std::size_t rows, std::size_t cols);
    static Matrix identity(TowerPtr tower, Level level, std::size_t n);
    static Matrix from_rows(const std::vector<Vector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const TowerPtr& tower() const { return tower_; }
    Level level() const { return level_; }

    code_t at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, code_t c) { data_[i * cols_ + j] = c; }
    std::span<const code_t> row_codes(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    Vector row(std::size_t i) const;
    void set_row(std::size_t i, const Vector& v);

    Matrix transposed() const;
    Matrix operator*(const Matrix& o) const;
    bool operator==(const Matrix& o) const;

private:
    TowerPtr tower_;
    Level level_;
    std::size_t rows_, cols_;
    std::vector<code_t> data_;
};

/// Canonical subspace representation: reduced row echelon basis. Two
/// subspaces are equal iff their SubspaceBasis matrices are identical.
class SubspaceBasis {
public:
    static SubspaceBasis span_of(const Matrix& rows);
    static SubspaceBasis span_of(const std::vector<Vector>& rows);
    static SubspaceBasis zero(TowerPtr tower, Level level, std::size_t ambient);
    static SubspaceBasis full(TowerPtr tower, Level level, std::size_t ambient);

    std::size_t dim() const { return mat_.rows(); }
    std::size_t ambient() const { return mat_.cols(); }
    const Matrix& matrix() const { return mat_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    const TowerPtr& tower() const { return mat_.tower(); }
    Level level() const { return mat_.level(); }
    Vector basis_row(std::size_t i) const { return mat_.row(i); }

    bool contains(const Vector& v) const;
    /// Coefficients of v in this basis, or nullopt if v is outside.
    std::optional<std::vector<code_t>> coordinates(const Vector& v) const;

    bool operator==(const SubspaceBasis& o) const { return mat_ == o.mat_; }
    bool operator!=(const SubspaceBasis& o) const { return !(*this == o); }

private:
    friend class IncrementalRref;
    SubspaceBasis(Matrix mat, std::vector<std::size_t> pivots)
        : mat_(std::move(mat)), pivots_(std::move(pivots)) {}

    Matrix mat_;
    std::vector<std::size_t> pivots_;
};

// -- lattice operations -------------------------------------------------------

/// Intersection of row spaces. Asserts the modular dimension law against
/// the join; same ambient space and level required.
SubspaceBasis meet(const SubspaceBasis& a, const SubspaceBasis& b);
/// Sum of row spaces.
SubspaceBasis join(const SubspaceBasis& a, const SubspaceBasis& b);
/// Deterministic complement: standard basis vectors, smallest indices
/// first, extending the pivot set of w.
SubspaceBasis complement(const SubspaceBasis& w);
/// Component of v in `onto` along the direct-sum decomposition
/// onto + along = ambient. Throws DomainError when the frame is not a
/// direct sum.
Vector project(const Vector& v, const SubspaceBasis& onto, const SubspaceBasis& along);
SubspaceBasis project(const SubspaceBasis& s, const SubspaceBasis& onto, const SubspaceBasis& along);

/// Right null space {x : m x = 0}.
SubspaceBasis kernel(const Matrix& m);
/// Left null space {u : u m = 0}.
SubspaceBasis left_kernel(const Matrix& m);
/// u with u * rows = v, when it exists.
std::optional<Vector> solve_left(const Matrix& rows, const Vector& v);
std::size_t rank_of(const Matrix& m);

/// View a subspace over GF(q^t) in F^n as a GF(q)-subspace of F^{n*t}:
/// coordinate j*t+l holds the xi^l-coefficient of coordinate j.
SubspaceBasis restrict_scalars(const SubspaceBasis& s);
Vector expand_to_sub(const Vector& v);
Vector assemble_from_sub(const Vector& v, int t);

/// Uniformly random complement of w (seeded by the caller's generator).
SubspaceBasis random_complement(const SubspaceBasis& w, std::mt19937_64& rng);
Matrix random_invertible(const TowerPtr& tower, Level level, std::size_t n, std::mt19937_64& rng);

/// Number of k-dimensional subspaces of F^n over a field with fsize elements.
std::uint64_t gaussian_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t fsize);

/// Every k-dimensional subspace of F^n at the given level, enumerated by
/// echelon shape (pivot pattern, then free entries). Deterministic order;
/// refuses counts above the cap.
std::vector<SubspaceBasis> enumerate_subspaces(const TowerPtr& tower, Level level, std::size_t n, std::size_t k,
                                               std::uint64_t cap = FieldTower::kDefaultEnumCap);

// -- incremental elimination -----------------------------------------------------

/// Single elimination engine behind rref/rank/meet/join. Maintains a row
/// echelon basis; vectors may be streamed in and the rank observed after
/// each step (the codimension pipeline stops early at its upper bound).
/// Over characteristic 2 with e*t <= 16 rows are held as packed coefficient
/// planes; the generic code path computes the same canonical result.
class IncrementalRref {
public:
    IncrementalRref(TowerPtr tower, Level level, std::size_t cols);
    ~IncrementalRref();
    IncrementalRref(IncrementalRref&&) noexcept;
    IncrementalRref& operator=(IncrementalRref&&) noexcept;

    /// Reduce v against the current basis; keep it if independent.
    /// Returns true when the rank increased.
    bool add(const Vector& v);
    bool add_codes(std::span<const code_t> codes);
    std::size_t rank() const;
    /// Canonical (fully reduced) basis of everything added so far.
    SubspaceBasis to_basis() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

enum class EliminationBackend { Auto, Generic, Packed };
/// Test hook: force one elimination backend on this thread.
void set_elimination_backend(EliminationBackend b);
EliminationBackend elimination_backend();

} // namespace fingeo
