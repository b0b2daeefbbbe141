#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fingeo/errors.hpp"

namespace fingeo {

/// Packed element representation: the GF(p)-coefficient vector
/// (c_0, ..., c_{d-1}) of an element, stored as the integer sum c_i * p^i.
using code_t = std::uint32_t;

/// Tower level an element is asserted to lie in: GF(q) or GF(q^t).
enum class Level : std::uint8_t { Sub, Top };

class FieldElement;
class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

/// The chain GF(p) <= GF(q) <= GF(q^t), q = p^e, with a single absolute
/// representation: every element is a GF(p)-coefficient vector modulo one
/// irreducible polynomial of degree e*t over GF(p). The subfield GF(q) is
/// the embedded copy generated by a designated root of a degree-e
/// irreducible; membership is a Frobenius fixpoint test.
///
/// Immutable after construction; all operations are const and pure.
class FieldTower : public std::enable_shared_from_this<FieldTower> {
public:
    struct Options {
        /// Monic irreducible of degree e*t over GF(p), coefficients
        /// little-endian (c_0 first, leading 1 included). Defaults to the
        /// lexicographically least irreducible, high-degree coefficients
        /// compared first.
        std::optional<std::vector<int>> top_modulus;
        /// Monic irreducible of degree e over GF(p) presenting GF(q).
        std::optional<std::vector<int>> sub_modulus;
    };

    static TowerPtr make(int p, int e, int t, const Options& opts = {});

    int p() const { return p_; }
    int e() const { return e_; }
    int t() const { return t_; }
    /// Degree of the top field over GF(p).
    int degree() const { return deg_; }
    std::uint64_t q() const { return q_; }
    /// Cardinality of the top field GF(q^t).
    std::uint64_t size() const { return size_; }
    std::uint64_t level_size(Level lv) const { return lv == Level::Sub ? q_ : size_; }

    const std::vector<int>& top_modulus() const { return top_mod_; }
    const std::vector<int>& sub_modulus() const { return sub_mod_; }

    /// Structural equality: same (p, e, t) and the same moduli.
    bool same_as(const FieldTower& other) const;

    // -- element factories -------------------------------------------------

    FieldElement zero() const;
    FieldElement one() const;
    /// Class of x modulo the top modulus; (1, xi, ..., xi^{t-1}) is the
    /// fixed GF(q)-basis used by every expansion in the toolkit.
    FieldElement generator() const;
    /// Designated root of the sub modulus: the image of GF(q)'s abstract
    /// generator under the recorded embedding.
    FieldElement subfield_generator() const;
    /// Element with the given code; tagged with the weakest correct level.
    FieldElement element(code_t code) const;
    /// Element with the given code and asserted level; throws DomainError
    /// if the tag would be inconsistent.
    FieldElement element(code_t code, Level lv) const;
    /// From a little-endian GF(p)-coefficient list (length <= e*t).
    FieldElement from_coeffs(const std::vector<int>& coeffs) const;

    std::vector<int> coeffs_of(code_t code) const;
    static code_t encode(const std::vector<int>& coeffs, int p);

    // -- raw code arithmetic (hot path; no level bookkeeping) ---------------

    code_t add(code_t a, code_t b) const;
    code_t sub(code_t a, code_t b) const;
    code_t neg(code_t a) const;
    code_t mul(code_t a, code_t b) const;
    code_t inv(code_t a) const; ///< throws DomainError on zero
    code_t pow(code_t a, std::int64_t k) const;
    /// a^{q^i}; i >= 0, reduced mod t (the Frobenius has order t).
    code_t frob(code_t a, int i = 1) const;
    /// Relative trace/norm of GF(q^t) over GF(q); results lie in GF(q).
    code_t trace(code_t a) const;
    code_t norm(code_t a) const;
    /// Sum of the first s Frobenius conjugates; restricted to GF(q^s) this
    /// is the trace onto GF(q).
    code_t trace_from(code_t a, int s) const;

    bool in_level(code_t a, Level lv) const;
    Level min_level(code_t a) const;

    // -- tower structure -----------------------------------------------------

    /// Codes of 1, xi, ..., xi^{t-1}.
    const std::vector<code_t>& power_basis() const { return power_basis_; }
    /// Trace-dual basis of the power basis: trace(dual[i] * xi^j) = [i==j].
    const std::vector<code_t>& trace_dual_basis() const { return trace_dual_; }
    /// Codes of 1, rho, ..., rho^{e-1}: GF(p)-basis of the embedded GF(q).
    const std::vector<code_t>& subfield_basis() const { return sub_basis_; }
    /// GF(q)-coordinates of a w.r.t. the power basis (t codes, each in GF(q)).
    std::vector<code_t> expand_over_sub(code_t a) const;
    code_t assemble_from_sub(const std::vector<code_t>& coords) const;
    /// GF(q)-basis of the intermediate field GF(q^s), s | t, optionally of
    /// its trace-zero hyperplane (trace taken onto GF(q)). Deterministic.
    std::vector<code_t> intermediate_field_basis(int s, bool trace_zero = false) const;

    // -- enumeration --------------------------------------------------------

    static constexpr std::uint64_t kDefaultEnumCap = 1ull << 20;

    /// All elements of the level, each exactly once, ordered
    /// lexicographically by coefficient vector. Throws CapError when the
    /// level size exceeds the cap.
    std::vector<FieldElement> elements(Level lv, std::uint64_t cap = kDefaultEnumCap) const;

    std::string describe() const;

private:
    FieldTower() = default;

    void build_tables();
    code_t mul_slow(code_t a, code_t b) const;

    int p_ = 0, e_ = 0, t_ = 0, deg_ = 0;
    std::uint64_t q_ = 0, size_ = 0;
    std::vector<int> top_mod_, sub_mod_;
    std::vector<std::uint64_t> p_pows_;   // p^0 .. p^deg
    code_t xi_ = 0;                       // class of x, the tower generator
    code_t sub_gen_ = 0;                  // rho
    std::vector<code_t> power_basis_;     // xi^l
    std::vector<code_t> sub_basis_;       // rho^k
    std::vector<code_t> trace_dual_;
    std::vector<std::uint8_t> expand_inv_; // deg x deg over GF(p), row-major:
                                           // inverse of (xi^l rho^k) basis matrix
    // log/antilog tables, built when size <= kMulTableCap
    static constexpr std::uint64_t kMulTableCap = 1ull << 16;
    bool tabled_ = false;
    std::vector<code_t> exp_, frob1_;
    std::vector<std::uint32_t> log_;
};

/// A value of the tower's top field, tagged with the weakest tower level
/// known to contain it. The tag is metadata: equality compares codes.
class FieldElement {
public:
    FieldElement(TowerPtr tower, code_t code, Level level)
        : tower_(std::move(tower)), code_(code), level_(level) {}

    const TowerPtr& tower() const { return tower_; }
    code_t code() const { return code_; }
    Level level() const { return level_; }
    bool is_zero() const { return code_ == 0; }
    bool is_one() const { return code_ == 1; }
    std::vector<int> coeffs() const { return tower_->coeffs_of(code_); }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement inverse() const;
    FieldElement pow(std::int64_t k) const;
    /// a^{q^i}. Accepts any i >= 0 (reduced mod t); frobenius(t) is the
    /// identity on GF(q^t).
    FieldElement frobenius(int i = 1) const;
    FieldElement trace() const;
    FieldElement norm() const;

    std::string to_string() const;

private:
    friend class FieldTower;
    const FieldTower& checked_tower(const FieldElement& other) const;

    TowerPtr tower_;
    code_t code_ = 0;
    Level level_ = Level::Top;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

} // namespace fingeo
