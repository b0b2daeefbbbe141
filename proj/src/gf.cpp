#include "fingeo/gf.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace fingeo {

namespace {

// Little-endian polynomials over GF(p), desk-scale degrees only.
using Poly = std::vector<int>;

int pmod(long long a, int p) {
    long long r = a % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

int poly_deg(const Poly& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[static_cast<size_t>(i)] != 0) return i;
    return -1;
}

Poly poly_trim(Poly a) {
    a.resize(static_cast<size_t>(poly_deg(a) + 1));
    return a;
}

// Remainder of a modulo monic b.
Poly poly_rem(Poly a, const Poly& b, int p) {
    int db = poly_deg(b);
    for (int i = poly_deg(a); i >= db; --i) {
        int c = a[static_cast<size_t>(i)];
        if (c == 0) continue;
        for (int j = 0; j <= db; ++j)
            a[static_cast<size_t>(i - db + j)] =
                pmod(a[static_cast<size_t>(i - db + j)] - static_cast<long long>(c) * b[static_cast<size_t>(j)], p);
    }
    return poly_trim(std::move(a));
}

Poly poly_mul(const Poly& a, const Poly& b, int p) {
    if (poly_deg(a) < 0 || poly_deg(b) < 0) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = pmod(c[i + j] + static_cast<long long>(a[i]) * b[j], p);
    }
    return c;
}

Poly decode_poly(code_t code, int p) {
    Poly c;
    while (code) {
        c.push_back(static_cast<int>(code % static_cast<code_t>(p)));
        code /= static_cast<code_t>(p);
    }
    return c;
}

code_t encode_poly(const Poly& c, int p) {
    code_t code = 0;
    for (size_t i = c.size(); i-- > 0;)
        code = code * static_cast<code_t>(p) + static_cast<code_t>(c[i]);
    return code;
}

// Trial factorization: no monic divisor of degree 1..deg/2.
bool is_irreducible(const Poly& f, int p) {
    int d = poly_deg(f);
    if (d < 1) return false;
    if (d == 1) return true;
    if (f[0] == 0) return false; // divisible by x
    for (int m = 1; 2 * m <= d; ++m) {
        std::uint64_t count = 1;
        for (int i = 0; i < m; ++i) count *= static_cast<std::uint64_t>(p);
        for (std::uint64_t low = 0; low < count; ++low) {
            Poly g = decode_poly(static_cast<code_t>(low), p);
            g.resize(static_cast<size_t>(m) + 1, 0);
            g[static_cast<size_t>(m)] = 1;
            if (poly_deg(poly_rem(f, g, p)) < 0) return false;
        }
    }
    return true;
}

// Lexicographically least monic irreducible of the given degree, comparing
// high-degree coefficients first (equivalently: smallest value of the
// coefficient vector read as a base-p integer).
Poly least_irreducible(int degree, int p) {
    std::uint64_t count = 1;
    for (int i = 0; i < degree; ++i) count *= static_cast<std::uint64_t>(p);
    for (std::uint64_t low = 0; low < count; ++low) {
        Poly f = decode_poly(static_cast<code_t>(low), p);
        f.resize(static_cast<size_t>(degree) + 1, 0);
        f[static_cast<size_t>(degree)] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw InternalError("no irreducible polynomial found (degree " + std::to_string(degree) + ")");
}

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; static_cast<long long>(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> fs;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

// Gauss-Jordan inverse of a square matrix over GF(p). Row-major ints.
std::vector<std::uint8_t> invert_mod_p(std::vector<int> m, int n, int p) {
    std::vector<int> inv(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i) * n + i] = 1;
    auto M = [&](std::vector<int>& a, int i, int j) -> int& { return a[static_cast<size_t>(i) * n + j]; };
    for (int col = 0, row = 0; col < n && row < n; ++col) {
        int piv = -1;
        for (int i = row; i < n; ++i)
            if (M(m, i, col) != 0) { piv = i; break; }
        if (piv < 0) throw InternalError("singular basis matrix in field tower construction");
        for (int j = 0; j < n; ++j) {
            std::swap(M(m, piv, j), M(m, row, j));
            std::swap(M(inv, piv, j), M(inv, row, j));
        }
        // normalize: multiply row by inverse of pivot mod p
        int pv = M(m, row, col), pv_inv = 1;
        for (int k = 1; k < p; ++k)
            if (k * pv % p == 1) { pv_inv = k; break; }
        for (int j = 0; j < n; ++j) {
            M(m, row, j) = pmod(static_cast<long long>(M(m, row, j)) * pv_inv, p);
            M(inv, row, j) = pmod(static_cast<long long>(M(inv, row, j)) * pv_inv, p);
        }
        for (int i = 0; i < n; ++i) {
            if (i == row) continue;
            int c = M(m, i, col);
            if (c == 0) continue;
            for (int j = 0; j < n; ++j) {
                M(m, i, j) = pmod(M(m, i, j) - static_cast<long long>(c) * M(m, row, j), p);
                M(inv, i, j) = pmod(M(inv, i, j) - static_cast<long long>(c) * M(inv, row, j), p);
            }
        }
        ++row;
    }
    std::vector<std::uint8_t> out(inv.size());
    for (size_t i = 0; i < inv.size(); ++i) out[i] = static_cast<std::uint8_t>(inv[i]);
    return out;
}

std::string poly_to_string(const Poly& f) {
    std::ostringstream os;
    bool first = true;
    for (int i = poly_deg(f); i >= 0; --i) {
        int c = f[static_cast<size_t>(i)];
        if (c == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0 || c != 1) os << c;
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

} // namespace

// -- construction -----------------------------------------------------------

TowerPtr FieldTower::make(int p, int e, int t, const Options& opts) {
    if (!is_prime(p)) throw ConfigError("field characteristic must be prime, got " + std::to_string(p));
    if (e < 1 || t < 1) throw ConfigError("tower exponents must be positive");
    int deg = e * t;
    if (deg > 30) throw ConfigError("tower degree e*t too large (max 30)");
    std::uint64_t size = 1;
    for (int i = 0; i < deg; ++i) {
        size *= static_cast<std::uint64_t>(p);
        if (size > (1ull << 31)) throw ConfigError("field size exceeds 2^31; out of desk scale");
    }

    auto tw = std::shared_ptr<FieldTower>(new FieldTower());
    tw->p_ = p;
    tw->e_ = e;
    tw->t_ = t;
    tw->deg_ = deg;
    tw->size_ = size;
    tw->q_ = 1;
    for (int i = 0; i < e; ++i) tw->q_ *= static_cast<std::uint64_t>(p);
    tw->p_pows_.resize(static_cast<size_t>(deg) + 1);
    tw->p_pows_[0] = 1;
    for (int i = 1; i <= deg; ++i) tw->p_pows_[static_cast<size_t>(i)] = tw->p_pows_[static_cast<size_t>(i - 1)] * static_cast<std::uint64_t>(p);

    auto check_modulus = [&](const Poly& f, int want_deg, const char* which) {
        if (poly_deg(f) != want_deg)
            throw ConfigError(std::string(which) + " modulus must have degree " + std::to_string(want_deg));
        if (f.back() != 1) throw ConfigError(std::string(which) + " modulus must be monic");
        for (int c : f)
            if (c < 0 || c >= p) throw ConfigError(std::string(which) + " modulus has coefficients outside GF(p)");
        if (!is_irreducible(f, p))
            throw ConfigError(std::string(which) + " modulus " + poly_to_string(f) + " is reducible over GF(" +
                              std::to_string(p) + ")");
    };

    if (opts.top_modulus) {
        tw->top_mod_ = *opts.top_modulus;
        check_modulus(tw->top_mod_, deg, "top");
    } else {
        tw->top_mod_ = least_irreducible(deg, p);
    }
    if (opts.sub_modulus) {
        tw->sub_mod_ = *opts.sub_modulus;
        check_modulus(tw->sub_mod_, e, "sub");
    } else {
        tw->sub_mod_ = e == 1 ? Poly{0, 1} : least_irreducible(e, p);
    }

    tw->build_tables();
    return tw;
}

void FieldTower::build_tables() {
    // log/antilog tables for desk-scale fields; the generic polynomial path
    // stays available above the cap and for cross-checks.
    if (size_ <= kMulTableCap) {
        const std::uint64_t n = size_ - 1;
        auto factors = prime_factors(n);
        code_t g = 0;
        for (code_t cand = 1; cand < size_; ++cand) {
            bool primitive = n == 1;
            if (n > 1) {
                primitive = true;
                for (auto f : factors) {
                    // order test via square-and-multiply on the slow path
                    std::uint64_t k = n / f;
                    code_t acc = 1, base = cand;
                    while (k) {
                        if (k & 1) acc = mul_slow(acc, base);
                        base = mul_slow(base, base);
                        k >>= 1;
                    }
                    if (acc == 1) { primitive = false; break; }
                }
            }
            if (primitive && cand != 0) { g = cand; break; }
        }
        if (g == 0) throw InternalError("no primitive element found");
        exp_.assign(static_cast<size_t>(n), 0);
        log_.assign(static_cast<size_t>(size_), 0);
        code_t acc = 1;
        for (std::uint64_t i = 0; i < n; ++i) {
            exp_[static_cast<size_t>(i)] = acc;
            log_[acc] = static_cast<std::uint32_t>(i);
            acc = mul_slow(acc, g);
        }
        if (acc != 1) throw InternalError("primitive element has wrong order");
        tabled_ = true;
        frob1_.assign(static_cast<size_t>(size_), 0);
        for (code_t x = 0; x < size_; ++x) frob1_[x] = pow(x, static_cast<std::int64_t>(q_));
    }

    power_basis_.resize(static_cast<size_t>(t_));
    xi_ = deg_ == 1 ? encode_poly(poly_rem({0, 1}, top_mod_, p_), p_) : static_cast<code_t>(p_);
    power_basis_[0] = 1;
    for (int l = 1; l < t_; ++l) power_basis_[static_cast<size_t>(l)] = mul(power_basis_[static_cast<size_t>(l - 1)], xi_);

    // designated subfield generator: least root of the sub modulus
    if (e_ == 1 && sub_mod_ == Poly{0, 1}) {
        sub_gen_ = 0;
    } else {
        bool found = false;
        for (code_t x = 0; x < size_; ++x) {
            code_t acc = 0, xp = 1;
            for (size_t i = 0; i < sub_mod_.size(); ++i) {
                for (int rep = 0; rep < sub_mod_[i]; ++rep) acc = add(acc, xp);
                xp = mul(xp, x);
            }
            if (acc == 0) { sub_gen_ = x; found = true; break; }
        }
        if (!found) throw InternalError("sub modulus has no root in the top field");
    }
    sub_basis_.resize(static_cast<size_t>(e_));
    sub_basis_[0] = 1;
    for (int k = 1; k < e_; ++k) sub_basis_[static_cast<size_t>(k)] = mul(sub_basis_[static_cast<size_t>(k - 1)], sub_gen_);

    // inverse of the GF(p)-basis matrix (xi^l rho^k), column index l*e + k
    std::vector<int> basis_mat(static_cast<size_t>(deg_) * deg_, 0);
    for (int l = 0; l < t_; ++l)
        for (int k = 0; k < e_; ++k) {
            code_t b = mul(power_basis_[static_cast<size_t>(l)], sub_basis_[static_cast<size_t>(k)]);
            Poly digits = decode_poly(b, p_);
            digits.resize(static_cast<size_t>(deg_), 0);
            for (int row = 0; row < deg_; ++row)
                basis_mat[static_cast<size_t>(row) * deg_ + (l * e_ + k)] = digits[static_cast<size_t>(row)];
        }
    expand_inv_ = invert_mod_p(std::move(basis_mat), deg_, p_);

    // trace-dual basis of (xi^l): solve C . Gram = I over GF(q)
    {
        int n = t_;
        std::vector<code_t> gram(static_cast<size_t>(n) * n), aug(static_cast<size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                gram[static_cast<size_t>(i) * n + j] =
                    trace(mul(power_basis_[static_cast<size_t>(i)], power_basis_[static_cast<size_t>(j)]));
            aug[static_cast<size_t>(i) * n + i] = 1;
        }
        for (int col = 0, row = 0; col < n; ++col, ++row) {
            int piv = -1;
            for (int i = row; i < n; ++i)
                if (gram[static_cast<size_t>(i) * n + col] != 0) { piv = i; break; }
            if (piv < 0) throw InternalError("degenerate trace form");
            for (int j = 0; j < n; ++j) {
                std::swap(gram[static_cast<size_t>(piv) * n + j], gram[static_cast<size_t>(row) * n + j]);
                std::swap(aug[static_cast<size_t>(piv) * n + j], aug[static_cast<size_t>(row) * n + j]);
            }
            code_t s = inv(gram[static_cast<size_t>(row) * n + col]);
            for (int j = 0; j < n; ++j) {
                gram[static_cast<size_t>(row) * n + j] = mul(gram[static_cast<size_t>(row) * n + j], s);
                aug[static_cast<size_t>(row) * n + j] = mul(aug[static_cast<size_t>(row) * n + j], s);
            }
            for (int i = 0; i < n; ++i) {
                if (i == row) continue;
                code_t c = gram[static_cast<size_t>(i) * n + col];
                if (c == 0) continue;
                for (int j = 0; j < n; ++j) {
                    gram[static_cast<size_t>(i) * n + j] =
                        sub(gram[static_cast<size_t>(i) * n + j], mul(c, gram[static_cast<size_t>(row) * n + j]));
                    aug[static_cast<size_t>(i) * n + j] =
                        sub(aug[static_cast<size_t>(i) * n + j], mul(c, aug[static_cast<size_t>(row) * n + j]));
                }
            }
        }
        trace_dual_.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            code_t d = 0;
            for (int k = 0; k < n; ++k)
                d = add(d, mul(aug[static_cast<size_t>(i) * n + k], power_basis_[static_cast<size_t>(k)]));
            trace_dual_[static_cast<size_t>(i)] = d;
        }
    }
}

bool FieldTower::same_as(const FieldTower& other) const {
    if (this == &other) return true;
    return p_ == other.p_ && e_ == other.e_ && t_ == other.t_ && top_mod_ == other.top_mod_ &&
           sub_mod_ == other.sub_mod_;
}

// -- arithmetic ---------------------------------------------------------------

code_t FieldTower::add(code_t a, code_t b) const {
    if (p_ == 2) return a ^ b;
    code_t out = 0;
    for (int i = 0; i < deg_; ++i) {
        auto pi = static_cast<code_t>(p_pows_[static_cast<size_t>(i)]);
        int da = static_cast<int>(a / pi) % p_;
        int db = static_cast<int>(b / pi) % p_;
        out += static_cast<code_t>((da + db) % p_) * pi;
    }
    return out;
}

code_t FieldTower::neg(code_t a) const {
    if (p_ == 2) return a;
    code_t out = 0;
    for (int i = 0; i < deg_; ++i) {
        auto pi = static_cast<code_t>(p_pows_[static_cast<size_t>(i)]);
        int da = static_cast<int>(a / pi) % p_;
        out += static_cast<code_t>((p_ - da) % p_) * pi;
    }
    return out;
}

code_t FieldTower::sub(code_t a, code_t b) const { return p_ == 2 ? a ^ b : add(a, neg(b)); }

code_t FieldTower::mul_slow(code_t a, code_t b) const {
    Poly prod = poly_mul(decode_poly(a, p_), decode_poly(b, p_), p_);
    return encode_poly(poly_rem(std::move(prod), top_mod_, p_), p_);
}

code_t FieldTower::mul(code_t a, code_t b) const {
    if (a == 0 || b == 0) return 0;
    if (tabled_) {
        std::uint64_t s = static_cast<std::uint64_t>(log_[a]) + log_[b];
        const std::uint64_t n = size_ - 1;
        if (s >= n) s -= n;
        return exp_[static_cast<size_t>(s)];
    }
    return mul_slow(a, b);
}

code_t FieldTower::inv(code_t a) const {
    if (a == 0) throw DomainError("inversion of zero");
    if (tabled_) {
        const std::uint64_t n = size_ - 1;
        return exp_[static_cast<size_t>((n - log_[a]) % n)];
    }
    return pow(a, static_cast<std::int64_t>(size_) - 2);
}

code_t FieldTower::pow(code_t a, std::int64_t k) const {
    if (k < 0) {
        a = inv(a); // throws on zero
        k = -k;
    }
    if (a == 0) return k == 0 ? 1 : 0;
    std::uint64_t kk = static_cast<std::uint64_t>(k) % (size_ - 1);
    if (tabled_) {
        if (kk == 0) return 1;
        return exp_[static_cast<size_t>(static_cast<std::uint64_t>(log_[a]) * kk % (size_ - 1))];
    }
    code_t acc = 1, base = a;
    while (kk) {
        if (kk & 1) acc = mul_slow(acc, base);
        base = mul_slow(base, base);
        kk >>= 1;
    }
    return acc;
}

code_t FieldTower::frob(code_t a, int i) const {
    if (i < 0) throw DomainError("negative Frobenius power");
    i %= t_;
    if (tabled_) {
        for (int k = 0; k < i; ++k) a = frob1_[a];
        return a;
    }
    code_t out = a;
    for (int k = 0; k < i; ++k) out = pow(out, static_cast<std::int64_t>(q_));
    return out;
}

code_t FieldTower::trace(code_t a) const {
    code_t s = 0, x = a;
    for (int i = 0; i < t_; ++i) {
        s = add(s, x);
        x = frob(x, 1);
    }
    return s;
}

code_t FieldTower::norm(code_t a) const {
    code_t s = 1, x = a;
    for (int i = 0; i < t_; ++i) {
        s = mul(s, x);
        x = frob(x, 1);
    }
    return s;
}

code_t FieldTower::trace_from(code_t a, int s) const {
    code_t acc = 0, x = a;
    for (int i = 0; i < s; ++i) {
        acc = add(acc, x);
        x = frob(x, 1);
    }
    return acc;
}

bool FieldTower::in_level(code_t a, Level lv) const { return lv == Level::Top || frob(a, 1) == a; }

Level FieldTower::min_level(code_t a) const { return in_level(a, Level::Sub) ? Level::Sub : Level::Top; }

// -- structure ----------------------------------------------------------------

std::vector<code_t> FieldTower::expand_over_sub(code_t a) const {
    Poly digits = decode_poly(a, p_);
    digits.resize(static_cast<size_t>(deg_), 0);
    std::vector<code_t> coords(static_cast<size_t>(t_), 0);
    for (int idx = 0; idx < deg_; ++idx) {
        long long y = 0;
        for (int row = 0; row < deg_; ++row)
            y += static_cast<long long>(expand_inv_[static_cast<size_t>(idx) * deg_ + row]) * digits[static_cast<size_t>(row)];
        int yi = pmod(y, p_);
        if (yi == 0) continue;
        int l = idx / e_, k = idx % e_;
        code_t contrib = sub_basis_[static_cast<size_t>(k)];
        code_t scaled = 0;
        for (int rep = 0; rep < yi; ++rep) scaled = add(scaled, contrib);
        coords[static_cast<size_t>(l)] = add(coords[static_cast<size_t>(l)], scaled);
    }
    return coords;
}

code_t FieldTower::assemble_from_sub(const std::vector<code_t>& coords) const {
    if (coords.size() != static_cast<size_t>(t_)) throw DomainError("expected t subfield coordinates");
    code_t out = 0;
    for (int l = 0; l < t_; ++l) out = add(out, mul(coords[static_cast<size_t>(l)], power_basis_[static_cast<size_t>(l)]));
    return out;
}

std::vector<code_t> FieldTower::intermediate_field_basis(int s, bool trace_zero) const {
    if (s < 1 || t_ % s != 0)
        throw ConfigError("variable degree " + std::to_string(s) + " does not divide t=" + std::to_string(t_));
    // GF(q)-linear conditions on power-basis coordinates: rows of
    // (Frob^s - id), plus the expansion of the s-fold trace when requested.
    std::vector<std::vector<code_t>> rows;
    for (int l = 0; l < t_; ++l) {
        code_t img = sub(frob(power_basis_[static_cast<size_t>(l)], s), power_basis_[static_cast<size_t>(l)]);
        rows.push_back(expand_over_sub(img)); // column l of the map, stored rowwise below
    }
    // transpose: condition matrix is t x t with entry (row i, col l) = coord i of image of xi^l
    std::vector<std::vector<code_t>> cond(static_cast<size_t>(t_), std::vector<code_t>(static_cast<size_t>(t_), 0));
    for (int l = 0; l < t_; ++l)
        for (int i = 0; i < t_; ++i) cond[static_cast<size_t>(i)][static_cast<size_t>(l)] = rows[static_cast<size_t>(l)][static_cast<size_t>(i)];
    if (trace_zero) {
        for (int i = 0; i < t_; ++i) {
            std::vector<code_t> row(static_cast<size_t>(t_), 0);
            for (int l = 0; l < t_; ++l)
                row[static_cast<size_t>(l)] = expand_over_sub(trace_from(power_basis_[static_cast<size_t>(l)], s))[static_cast<size_t>(i)];
            cond.push_back(std::move(row));
        }
    }
    // kernel over GF(q) by Gaussian elimination on the condition matrix
    int nrows = static_cast<int>(cond.size()), ncols = t_;
    std::vector<int> pivot_of_col(static_cast<size_t>(ncols), -1);
    int rank = 0;
    for (int col = 0; col < ncols && rank < nrows; ++col) {
        int piv = -1;
        for (int i = rank; i < nrows; ++i)
            if (cond[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(cond[static_cast<size_t>(piv)], cond[static_cast<size_t>(rank)]);
        code_t sc = inv(cond[static_cast<size_t>(rank)][static_cast<size_t>(col)]);
        for (int j = 0; j < ncols; ++j) cond[static_cast<size_t>(rank)][static_cast<size_t>(j)] = mul(cond[static_cast<size_t>(rank)][static_cast<size_t>(j)], sc);
        for (int i = 0; i < nrows; ++i) {
            if (i == rank) continue;
            code_t c = cond[static_cast<size_t>(i)][static_cast<size_t>(col)];
            if (c == 0) continue;
            for (int j = 0; j < ncols; ++j)
                cond[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    sub(cond[static_cast<size_t>(i)][static_cast<size_t>(j)], mul(c, cond[static_cast<size_t>(rank)][static_cast<size_t>(j)]));
        }
        pivot_of_col[static_cast<size_t>(col)] = rank;
        ++rank;
    }
    std::vector<code_t> basis;
    for (int freec = 0; freec < ncols; ++freec) {
        if (pivot_of_col[static_cast<size_t>(freec)] >= 0) continue;
        std::vector<code_t> coords(static_cast<size_t>(ncols), 0);
        coords[static_cast<size_t>(freec)] = 1;
        for (int col = 0; col < ncols; ++col) {
            int pr = pivot_of_col[static_cast<size_t>(col)];
            if (pr >= 0) coords[static_cast<size_t>(col)] = neg(cond[static_cast<size_t>(pr)][static_cast<size_t>(freec)]);
        }
        basis.push_back(assemble_from_sub(coords));
    }
    return basis;
}

// -- factories and enumeration --------------------------------------------------

FieldElement FieldTower::zero() const { return {shared_from_this(), 0, Level::Sub}; }
FieldElement FieldTower::one() const { return {shared_from_this(), 1, Level::Sub}; }
FieldElement FieldTower::generator() const { return element(xi_); }
FieldElement FieldTower::subfield_generator() const { return element(sub_gen_); }

FieldElement FieldTower::element(code_t code) const {
    if (code >= size_) throw DomainError("element code out of range");
    return {shared_from_this(), code, min_level(code)};
}

FieldElement FieldTower::element(code_t code, Level lv) const {
    if (code >= size_) throw DomainError("element code out of range");
    if (!in_level(code, lv)) throw DomainError("inconsistent level tag: element is not fixed by the Frobenius");
    return {shared_from_this(), code, lv};
}

FieldElement FieldTower::from_coeffs(const std::vector<int>& coeffs) const {
    if (coeffs.size() > static_cast<size_t>(deg_)) throw DomainError("coefficient list longer than e*t");
    Poly c(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = pmod(coeffs[i], p_);
    return element(encode_poly(c, p_));
}

std::vector<int> FieldTower::coeffs_of(code_t code) const {
    Poly c = decode_poly(code, p_);
    c.resize(static_cast<size_t>(deg_), 0);
    return c;
}

code_t FieldTower::encode(const std::vector<int>& coeffs, int p) {
    Poly c(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = pmod(coeffs[i], p);
    return encode_poly(c, p);
}

std::vector<FieldElement> FieldTower::elements(Level lv, std::uint64_t cap) const {
    std::uint64_t n = level_size(lv);
    if (n > cap)
        throw CapError("enumeration of " + std::to_string(n) + " field elements exceeds cap " + std::to_string(cap));
    std::vector<code_t> codes;
    codes.reserve(static_cast<size_t>(n));
    if (lv == Level::Top) {
        for (code_t c = 0; c < size_; ++c) codes.push_back(c);
    } else {
        for (code_t abstract = 0; abstract < q_; ++abstract) {
            Poly digits = decode_poly(abstract, p_);
            code_t x = 0;
            for (size_t k = 0; k < digits.size(); ++k)
                for (int rep = 0; rep < digits[k]; ++rep) x = add(x, sub_basis_[k]);
            codes.push_back(x);
        }
    }
    // lexicographic on coefficient vectors, c_0 most significant
    auto lex_key = [&](code_t c) {
        std::uint64_t key = 0;
        for (int i = 0; i < deg_; ++i) {
            key = key * static_cast<std::uint64_t>(p_) + (c % static_cast<code_t>(p_));
            c /= static_cast<code_t>(p_);
        }
        return key;
    };
    std::sort(codes.begin(), codes.end(), [&](code_t a, code_t b) { return lex_key(a) < lex_key(b); });
    std::vector<FieldElement> out;
    out.reserve(codes.size());
    for (code_t c : codes) out.push_back({shared_from_this(), c, lv == Level::Sub ? Level::Sub : min_level(c)});
    return out;
}

std::string FieldTower::describe() const {
    std::ostringstream os;
    os << "GF(" << p_ << "^" << deg_ << ") = GF(" << p_ << ")[x]/(" << poly_to_string(top_mod_) << "), q=" << q_
       << ", t=" << t_;
    return os.str();
}

// -- FieldElement ---------------------------------------------------------------

const FieldTower& FieldElement::checked_tower(const FieldElement& other) const {
    if (!tower_ || !other.tower_) throw FieldMismatchError("operation on detached field element");
    if (tower_.get() != other.tower_.get() && !tower_->same_as(*other.tower_))
        throw FieldMismatchError("operands belong to different field towers");
    return *tower_;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    const auto& tw = checked_tower(o);
    code_t c = tw.add(code_, o.code_);
    return {tower_, c, tw.min_level(c)};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    const auto& tw = checked_tower(o);
    code_t c = tw.sub(code_, o.code_);
    return {tower_, c, tw.min_level(c)};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    const auto& tw = checked_tower(o);
    code_t c = tw.mul(code_, o.code_);
    return {tower_, c, tw.min_level(c)};
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    const auto& tw = checked_tower(o);
    code_t c = tw.mul(code_, tw.inv(o.code_));
    return {tower_, c, tw.min_level(c)};
}

FieldElement FieldElement::operator-() const {
    code_t c = tower_->neg(code_);
    return {tower_, c, tower_->min_level(c)};
}

bool FieldElement::operator==(const FieldElement& o) const {
    checked_tower(o);
    return code_ == o.code_;
}

FieldElement FieldElement::inverse() const {
    code_t c = tower_->inv(code_);
    return {tower_, c, tower_->min_level(c)};
}

FieldElement FieldElement::pow(std::int64_t k) const {
    code_t c = tower_->pow(code_, k);
    return {tower_, c, tower_->min_level(c)};
}

FieldElement FieldElement::frobenius(int i) const {
    code_t c = tower_->frob(code_, i);
    return {tower_, c, level_ == Level::Sub ? Level::Sub : tower_->min_level(c)};
}

FieldElement FieldElement::trace() const { return {tower_, tower_->trace(code_), Level::Sub}; }

FieldElement FieldElement::norm() const { return {tower_, tower_->norm(code_), Level::Sub}; }

std::string FieldElement::to_string() const {
    std::ostringstream os;
    os << "[";
    auto cs = coeffs();
    for (size_t i = 0; i < cs.size(); ++i) {
        if (i) os << ",";
        os << cs[i];
    }
    os << "]";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.to_string(); }

} // namespace fingeo
