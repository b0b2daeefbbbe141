// Test-only brute-force oracles. Everything here recomputes expected values
// by exhaustive enumeration or naive polynomial arithmetic, independently of
// the library code paths under test.
#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "fingeo/gf.hpp"
#include "fingeo/linalg.hpp"

namespace oracle {

using fingeo::code_t;
using fingeo::Level;
using fingeo::TowerPtr;

// Naive GF(p) polynomial product reduced modulo the tower's top modulus.
// Used to cross-check table-based field multiplication.
inline code_t poly_mul_mod(const TowerPtr& tw, code_t a, code_t b) {
    int p = tw->p();
    auto digits = [&](code_t c) {
        std::vector<int> d;
        while (c) {
            d.push_back(static_cast<int>(c % static_cast<code_t>(p)));
            c /= static_cast<code_t>(p);
        }
        return d;
    };
    auto da = digits(a), db = digits(b);
    std::vector<int> prod(da.size() + db.size() + 1, 0);
    for (size_t i = 0; i < da.size(); ++i)
        for (size_t j = 0; j < db.size(); ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    const auto& mod = tw->top_modulus();
    int dm = static_cast<int>(mod.size()) - 1;
    for (int i = static_cast<int>(prod.size()) - 1; i >= dm; --i) {
        int c = prod[static_cast<size_t>(i)];
        if (!c) continue;
        for (int j = 0; j <= dm; ++j) {
            int& slot = prod[static_cast<size_t>(i - dm + j)];
            slot = ((slot - c * mod[static_cast<size_t>(j)]) % p + p) % p;
        }
    }
    code_t out = 0;
    for (size_t i = std::min<size_t>(prod.size(), 32); i-- > 0;)
        out = out * static_cast<code_t>(p) + static_cast<code_t>(i < prod.size() ? prod[i] : 0);
    return out;
}

// All vectors in the row space, by exhaustive coefficient enumeration.
inline std::set<std::vector<code_t>> span_points(const fingeo::SubspaceBasis& s) {
    const auto& tw = *s.tower();
    auto scalars = tw.elements(s.level());
    std::set<std::vector<code_t>> pts;
    std::vector<size_t> idx(s.dim(), 0);
    size_t total = 1;
    for (size_t i = 0; i < s.dim(); ++i) total *= scalars.size();
    for (size_t n = 0; n < total; ++n) {
        size_t rest = n;
        std::vector<code_t> v(s.ambient(), 0);
        for (size_t i = 0; i < s.dim(); ++i) {
            code_t c = scalars[rest % scalars.size()].code();
            rest /= scalars.size();
            if (!c) continue;
            for (size_t j = 0; j < s.ambient(); ++j) v[j] = tw.add(v[j], tw.mul(c, s.matrix().at(i, j)));
        }
        pts.insert(std::move(v));
    }
    return pts;
}

// Every k-dimensional subspace of F^n at the given level, enumerated by
// reduced-row-echelon shape: choose the pivot columns, then run through all
// assignments of the free entries.
inline std::vector<fingeo::SubspaceBasis> all_subspaces(const TowerPtr& tw, Level lv, size_t n, size_t k) {
    std::vector<fingeo::SubspaceBasis> out;
    if (k == 0) {
        out.push_back(fingeo::SubspaceBasis::zero(tw, lv, n));
        return out;
    }
    auto scalars = tw->elements(lv);
    std::vector<size_t> piv(k);
    for (size_t i = 0; i < k; ++i) piv[i] = i;
    auto next_combination = [&]() {
        size_t i = k;
        while (i-- > 0) {
            if (piv[i] + (k - i) <= n - 1) {
                ++piv[i];
                for (size_t j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    do {
        // free positions: to the right of each pivot, excluding later pivot columns
        std::vector<std::pair<size_t, size_t>> free_pos;
        std::vector<bool> is_piv(n, false);
        for (size_t p : piv) is_piv[p] = true;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = piv[i] + 1; j < n; ++j)
                if (!is_piv[j]) free_pos.emplace_back(i, j);
        size_t total = 1;
        for (size_t i = 0; i < free_pos.size(); ++i) total *= scalars.size();
        for (size_t asg = 0; asg < total; ++asg) {
            fingeo::Matrix m(tw, lv, k, n);
            for (size_t i = 0; i < k; ++i) m.set(i, piv[i], 1);
            size_t rest = asg;
            for (auto [i, j] : free_pos) {
                m.set(i, j, scalars[rest % scalars.size()].code());
                rest /= scalars.size();
            }
            out.push_back(fingeo::SubspaceBasis::span_of(m));
        }
    } while (next_combination());
    return out;
}

// Gaussian binomial coefficient [n choose k]_q.
inline std::uint64_t gaussian_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t q) {
    if (k > n) return 0;
    // every prefix of the product formula is itself a Gaussian binomial,
    // so multiply-then-divide stays exact
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        std::uint64_t qn = 1, qd = 1;
        for (std::uint64_t j = 0; j < n - i; ++j) qn *= q;
        for (std::uint64_t j = 0; j < i + 1; ++j) qd *= q;
        acc = acc * (qn - 1) / (qd - 1);
    }
    return static_cast<std::uint64_t>(acc);
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < k; ++i) acc = acc * (n - i) / (i + 1);
    return static_cast<std::uint64_t>(acc);
}

} // namespace oracle
