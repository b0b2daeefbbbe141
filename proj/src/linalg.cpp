#include "fingeo/linalg.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace fingeo {

namespace {

thread_local EliminationBackend g_backend = EliminationBackend::Auto;

void check_same_frame(const TowerPtr& a, Level la, const TowerPtr& b, Level lb, const char* what) {
    if (a.get() != b.get() && !a->same_as(*b)) throw FieldMismatchError(std::string(what) + ": different field towers");
    if (la != lb) throw DomainError(std::string(what) + ": different tower levels");
}

code_t random_code(const TowerPtr& tw, Level lv, std::mt19937_64& rng) {
    if (lv == Level::Top) {
        std::uniform_int_distribution<std::uint64_t> d(0, tw->size() - 1);
        return static_cast<code_t>(d(rng));
    }
    std::uniform_int_distribution<std::uint64_t> d(0, tw->q() - 1);
    auto abstract = d(rng);
    code_t x = 0;
    const auto& basis = tw->subfield_basis();
    for (size_t k = 0; k < basis.size() && abstract; ++k) {
        auto digit = static_cast<int>(abstract % static_cast<std::uint64_t>(tw->p()));
        abstract /= static_cast<std::uint64_t>(tw->p());
        for (int rep = 0; rep < digit; ++rep) x = tw->add(x, basis[k]);
    }
    return x;
}

} // namespace

void set_elimination_backend(EliminationBackend b) { g_backend = b; }
EliminationBackend elimination_backend() { return g_backend; }

// -- Vector ---------------------------------------------------------------------

Vector::Vector(TowerPtr tower, Level level, std::vector<code_t> codes, bool validate)
    : tower_(std::move(tower)), level_(level), codes_(std::move(codes)) {
    if (validate && level_ == Level::Sub)
        for (code_t c : codes_)
            if (!tower_->in_level(c, Level::Sub)) throw DomainError("vector entry outside the declared tower level");
}

Vector Vector::zero(TowerPtr tower, Level level, std::size_t n) {
    return {std::move(tower), level, std::vector<code_t>(n, 0), false};
}

Vector Vector::unit(TowerPtr tower, Level level, std::size_t n, std::size_t i) {
    std::vector<code_t> c(n, 0);
    c[i] = 1;
    return {std::move(tower), level, std::move(c), false};
}

FieldElement Vector::at(std::size_t i) const {
    return {tower_, codes_[i], level_ == Level::Sub ? Level::Sub : tower_->min_level(codes_[i])};
}

bool Vector::is_zero() const {
    return std::all_of(codes_.begin(), codes_.end(), [](code_t c) { return c == 0; });
}

Vector Vector::operator+(const Vector& o) const {
    check_same_frame(tower_, level_, o.tower_, o.level_, "vector sum");
    if (size() != o.size()) throw DomainError("vector sum: length mismatch");
    std::vector<code_t> out(size());
    for (size_t i = 0; i < size(); ++i) out[i] = tower_->add(codes_[i], o.codes_[i]);
    return {tower_, level_, std::move(out), false};
}

Vector Vector::operator-(const Vector& o) const {
    check_same_frame(tower_, level_, o.tower_, o.level_, "vector difference");
    if (size() != o.size()) throw DomainError("vector difference: length mismatch");
    std::vector<code_t> out(size());
    for (size_t i = 0; i < size(); ++i) out[i] = tower_->sub(codes_[i], o.codes_[i]);
    return {tower_, level_, std::move(out), false};
}

Vector Vector::scaled(code_t c) const {
    std::vector<code_t> out(size());
    for (size_t i = 0; i < size(); ++i) out[i] = tower_->mul(codes_[i], c);
    // scaling by a Top scalar can leave the Sub level
    Level lv = level_;
    if (lv == Level::Sub && !tower_->in_level(c, Level::Sub)) lv = Level::Top;
    return {tower_, lv, std::move(out), false};
}

code_t Vector::dot(const Vector& o) const {
    check_same_frame(tower_, level_, o.tower_, o.level_, "dot product");
    if (size() != o.size()) throw DomainError("dot product: length mismatch");
    code_t acc = 0;
    for (size_t i = 0; i < size(); ++i) acc = tower_->add(acc, tower_->mul(codes_[i], o.codes_[i]));
    return acc;
}

bool Vector::operator==(const Vector& o) const {
    return tower_->same_as(*o.tower_) && level_ == o.level_ && codes_ == o.codes_;
}

Vector Vector::canonicalized() const {
    for (size_t i = 0; i < size(); ++i)
        if (codes_[i] != 0) {
            if (codes_[i] == 1) return *this;
            return scaled(tower_->inv(codes_[i]));
        }
    return *this;
}

// -- Matrix --------------------------------------------------------------------

Matrix::Matrix(TowerPtr tower, Level level, std::size_t rows, std::size_t cols)
    : tower_(std::move(tower)), level_(level), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(TowerPtr tower, Level level, std::size_t n) {
    Matrix m(std::move(tower), level, n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) throw DomainError("from_rows: cannot infer shape from an empty row list");
    Matrix m(rows[0].tower(), rows[0].level(), rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
}

Vector Matrix::row(std::size_t i) const {
    return {tower_, level_, std::vector<code_t>(data_.begin() + static_cast<long>(i * cols_), data_.begin() + static_cast<long>((i + 1) * cols_)), false};
}

void Matrix::set_row(std::size_t i, const Vector& v) {
    check_same_frame(tower_, level_, v.tower(), v.level(), "set_row");
    if (v.size() != cols_) throw DomainError("set_row: length mismatch");
    std::copy(v.codes().begin(), v.codes().end(), data_.begin() + static_cast<long>(i * cols_));
}

Matrix Matrix::transposed() const {
    Matrix m(tower_, level_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) m.set(j, i, at(i, j));
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    check_same_frame(tower_, level_, o.tower_, o.level_, "matrix product");
    if (cols_ != o.rows_) throw DomainError("matrix product: inner dimension mismatch");
    Matrix m(tower_, level_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            code_t a = at(i, k);
            if (a == 0) continue;
            for (size_t j = 0; j < o.cols_; ++j)
                m.set(i, j, tower_->add(m.at(i, j), tower_->mul(a, o.at(k, j))));
        }
    return m;
}

bool Matrix::operator==(const Matrix& o) const {
    return tower_->same_as(*o.tower_) && level_ == o.level_ && rows_ == o.rows_ && cols_ == o.cols_ &&
           data_ == o.data_;
}

// -- IncrementalRref ---------------------------------------------------------------

struct IncrementalRref::Impl {
    TowerPtr tower;
    Level level;
    std::size_t cols = 0;
    bool packed = false;

    // generic backend
    std::vector<std::vector<code_t>> rows;
    // packed backend: per row, deg planes of `words` 64-bit words
    int deg = 0;
    std::size_t words = 0;
    std::vector<std::vector<std::uint64_t>> prows;
    std::vector<std::uint32_t> mix;      // (1<<deg) * deg masks
    std::vector<std::uint8_t> mix_built; // per scalar

    std::vector<std::size_t> pivots; // ascending, parallel to rows/prows

    const std::uint32_t* mix_for(code_t c) {
        auto base = static_cast<size_t>(c) * static_cast<size_t>(deg);
        if (!mix_built[c]) {
            for (int b = 0; b < deg; ++b) {
                code_t m = tower->mul(c, static_cast<code_t>(1u) << b);
                for (int j = 0; j < deg; ++j)
                    if ((m >> j) & 1u) mix[base + static_cast<size_t>(j)] |= 1u << b;
            }
            mix_built[c] = 1;
        }
        return mix.data() + base;
    }

    // dst += c * src, packed, starting at the word containing src's pivot
    void paxpy(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src, code_t c, std::size_t from_word) {
        const std::uint32_t* masks = mix_for(c);
        std::array<std::uint64_t, 16> loc{};
        for (size_t w = from_word; w < words; ++w) {
            for (int b = 0; b < deg; ++b) loc[static_cast<size_t>(b)] = src[static_cast<size_t>(b) * words + w];
            for (int j = 0; j < deg; ++j) {
                std::uint32_t m = masks[j];
                std::uint64_t acc = 0;
                while (m) {
                    int b = std::countr_zero(m);
                    m &= m - 1;
                    acc ^= loc[static_cast<size_t>(b)];
                }
                dst[static_cast<size_t>(j) * words + w] ^= acc;
            }
        }
    }

    void pscale(std::vector<std::uint64_t>& row, code_t s, std::size_t from_word) {
        if (s == 1) return;
        const std::uint32_t* masks = mix_for(s);
        std::array<std::uint64_t, 16> loc{};
        for (size_t w = from_word; w < words; ++w) {
            for (int b = 0; b < deg; ++b) loc[static_cast<size_t>(b)] = row[static_cast<size_t>(b) * words + w];
            for (int j = 0; j < deg; ++j) {
                std::uint32_t m = masks[j];
                std::uint64_t acc = 0;
                while (m) {
                    int b = std::countr_zero(m);
                    m &= m - 1;
                    acc ^= loc[static_cast<size_t>(b)];
                }
                row[static_cast<size_t>(j) * words + w] = acc;
            }
        }
    }

    code_t pget(const std::vector<std::uint64_t>& row, std::size_t col) const {
        size_t w = col >> 6;
        int b = static_cast<int>(col & 63);
        code_t c = 0;
        for (int j = 0; j < deg; ++j) c |= static_cast<code_t>((row[static_cast<size_t>(j) * words + w] >> b) & 1u) << j;
        return c;
    }

    long pfirst_nonzero(const std::vector<std::uint64_t>& row) const {
        for (size_t w = 0; w < words; ++w) {
            std::uint64_t u = 0;
            for (int j = 0; j < deg; ++j) u |= row[static_cast<size_t>(j) * words + w];
            if (u) return static_cast<long>((w << 6) + static_cast<size_t>(std::countr_zero(u)));
        }
        return -1;
    }

    std::vector<std::uint64_t> pack(std::span<const code_t> codes) const {
        std::vector<std::uint64_t> row(static_cast<size_t>(deg) * words, 0);
        for (size_t col = 0; col < codes.size(); ++col) {
            code_t c = codes[col];
            if (!c) continue;
            size_t w = col >> 6;
            std::uint64_t bit = 1ull << (col & 63);
            for (int j = 0; j < deg; ++j)
                if ((c >> j) & 1u) row[static_cast<size_t>(j) * words + w] |= bit;
        }
        return row;
    }

    std::vector<code_t> unpack(const std::vector<std::uint64_t>& row) const {
        std::vector<code_t> codes(cols, 0);
        for (size_t col = 0; col < cols; ++col) codes[col] = pget(row, col);
        return codes;
    }

    bool add_codes(std::span<const code_t> codes) {
        if (codes.size() != cols) throw DomainError("incremental rref: column count mismatch");
        if (packed) {
            auto cur = pack(codes);
            for (size_t k = 0; k < prows.size(); ++k) {
                code_t c = pget(cur, pivots[k]);
                if (c) paxpy(cur, prows[k], c, pivots[k] >> 6);
            }
            long piv = pfirst_nonzero(cur);
            if (piv < 0) return false;
            pscale(cur, tower->inv(pget(cur, static_cast<size_t>(piv))), static_cast<size_t>(piv) >> 6);
            auto pos = static_cast<size_t>(std::lower_bound(pivots.begin(), pivots.end(), static_cast<size_t>(piv)) -
                                           pivots.begin());
            pivots.insert(pivots.begin() + static_cast<long>(pos), static_cast<size_t>(piv));
            prows.insert(prows.begin() + static_cast<long>(pos), std::move(cur));
            return true;
        }
        std::vector<code_t> cur(codes.begin(), codes.end());
        for (size_t k = 0; k < rows.size(); ++k) {
            size_t p = pivots[k];
            code_t c = cur[p];
            if (!c) continue;
            const auto& rk = rows[k];
            for (size_t j = p; j < cols; ++j) cur[j] = tower->sub(cur[j], tower->mul(c, rk[j]));
        }
        size_t piv = cols;
        for (size_t j = 0; j < cols; ++j)
            if (cur[j]) { piv = j; break; }
        if (piv == cols) return false;
        code_t s = tower->inv(cur[piv]);
        if (s != 1)
            for (size_t j = piv; j < cols; ++j) cur[j] = tower->mul(cur[j], s);
        auto pos = static_cast<size_t>(std::lower_bound(pivots.begin(), pivots.end(), piv) - pivots.begin());
        pivots.insert(pivots.begin() + static_cast<long>(pos), piv);
        rows.insert(rows.begin() + static_cast<long>(pos), std::move(cur));
        return true;
    }

    SubspaceBasis to_basis() {
        size_t k = pivots.size();
        Matrix m(tower, level, k, cols);
        if (packed) {
            auto work = prows;
            for (size_t i = k; i-- > 0;) {
                for (size_t up = 0; up < i; ++up) {
                    code_t c = pget(work[up], pivots[i]);
                    if (c) paxpy(work[up], work[i], c, pivots[i] >> 6);
                }
            }
            for (size_t i = 0; i < k; ++i) {
                auto codes = unpack(work[i]);
                for (size_t j = 0; j < cols; ++j) m.set(i, j, codes[j]);
            }
        } else {
            auto work = rows;
            for (size_t i = k; i-- > 0;) {
                for (size_t up = 0; up < i; ++up) {
                    code_t c = work[up][pivots[i]];
                    if (!c) continue;
                    for (size_t j = pivots[i]; j < cols; ++j)
                        work[up][j] = tower->sub(work[up][j], tower->mul(c, work[i][j]));
                }
            }
            for (size_t i = 0; i < k; ++i)
                for (size_t j = 0; j < cols; ++j) m.set(i, j, work[i][j]);
        }
        return SubspaceBasis(std::move(m), pivots);
    }
};

IncrementalRref::IncrementalRref(TowerPtr tower, Level level, std::size_t cols) : impl_(new Impl) {
    impl_->tower = std::move(tower);
    impl_->level = level;
    impl_->cols = cols;
    bool eligible = impl_->tower->p() == 2 && impl_->tower->degree() <= 16;
    EliminationBackend b = g_backend;
    if (b == EliminationBackend::Packed && !eligible)
        throw ConfigError("packed elimination requires characteristic 2 and degree <= 16");
    impl_->packed = eligible && b != EliminationBackend::Generic;
    if (impl_->packed) {
        impl_->deg = impl_->tower->degree();
        impl_->words = (cols + 63) / 64;
        if (impl_->words == 0) impl_->words = 1;
        impl_->mix.assign((static_cast<size_t>(1) << impl_->deg) * static_cast<size_t>(impl_->deg), 0);
        impl_->mix_built.assign(static_cast<size_t>(1) << impl_->deg, 0);
    }
}

IncrementalRref::~IncrementalRref() = default;
IncrementalRref::IncrementalRref(IncrementalRref&&) noexcept = default;
IncrementalRref& IncrementalRref::operator=(IncrementalRref&&) noexcept = default;

bool IncrementalRref::add(const Vector& v) {
    check_same_frame(impl_->tower, impl_->level, v.tower(), v.level(), "incremental rref");
    return impl_->add_codes(v.codes());
}

bool IncrementalRref::add_codes(std::span<const code_t> codes) { return impl_->add_codes(codes); }

std::size_t IncrementalRref::rank() const { return impl_->pivots.size(); }

SubspaceBasis IncrementalRref::to_basis() const { return impl_->to_basis(); }

// -- SubspaceBasis -----------------------------------------------------------------

SubspaceBasis SubspaceBasis::span_of(const Matrix& rows) {
    IncrementalRref inc(rows.tower(), rows.level(), rows.cols());
    for (size_t i = 0; i < rows.rows(); ++i) inc.add_codes(rows.row_codes(i));
    return inc.to_basis();
}

SubspaceBasis SubspaceBasis::span_of(const std::vector<Vector>& rows) {
    if (rows.empty()) throw DomainError("span_of: cannot infer ambient space from an empty row list");
    IncrementalRref inc(rows[0].tower(), rows[0].level(), rows[0].size());
    for (const auto& v : rows) inc.add(v);
    return inc.to_basis();
}

SubspaceBasis SubspaceBasis::zero(TowerPtr tower, Level level, std::size_t ambient) {
    return SubspaceBasis(Matrix(std::move(tower), level, 0, ambient), {});
}

SubspaceBasis SubspaceBasis::full(TowerPtr tower, Level level, std::size_t ambient) {
    std::vector<std::size_t> piv(ambient);
    for (size_t i = 0; i < ambient; ++i) piv[i] = i;
    return SubspaceBasis(Matrix::identity(std::move(tower), level, ambient), std::move(piv));
}

bool SubspaceBasis::contains(const Vector& v) const { return coordinates(v).has_value(); }

std::optional<std::vector<code_t>> SubspaceBasis::coordinates(const Vector& v) const {
    if (v.size() != ambient()) throw DomainError("coordinates: ambient dimension mismatch");
    const auto& tw = *tower();
    std::vector<code_t> cur = v.codes();
    std::vector<code_t> coeffs(dim(), 0);
    for (size_t i = 0; i < dim(); ++i) {
        code_t c = cur[pivots_[i]];
        coeffs[i] = c;
        if (!c) continue;
        for (size_t j = pivots_[i]; j < ambient(); ++j) cur[j] = tw.sub(cur[j], tw.mul(c, mat_.at(i, j)));
    }
    for (code_t c : cur)
        if (c) return std::nullopt;
    return coeffs;
}

// -- lattice operations ----------------------------------------------------------------

namespace {

std::pair<SubspaceBasis, SubspaceBasis> sum_and_intersection(const SubspaceBasis& a, const SubspaceBasis& b) {
    check_same_frame(a.tower(), a.level(), b.tower(), b.level(), "meet/join");
    if (a.ambient() != b.ambient()) throw DomainError("meet/join: ambient dimension mismatch");
    const size_t n = a.ambient(), da = a.dim(), db = b.dim();
    Matrix stacked(a.tower(), a.level(), da + db, n);
    for (size_t i = 0; i < da; ++i) stacked.set_row(i, a.basis_row(i));
    for (size_t i = 0; i < db; ++i) stacked.set_row(da + i, b.basis_row(i));
    SubspaceBasis sum = SubspaceBasis::span_of(stacked);

    SubspaceBasis relations = left_kernel(stacked); // rows (u, v) with uA + vB = 0
    const auto& tw = *a.tower();
    IncrementalRref inter(a.tower(), a.level(), n);
    for (size_t r = 0; r < relations.dim(); ++r) {
        std::vector<code_t> w(n, 0);
        for (size_t i = 0; i < da; ++i) {
            code_t c = relations.matrix().at(r, i);
            if (!c) continue;
            for (size_t j = 0; j < n; ++j) w[j] = tw.add(w[j], tw.mul(c, a.matrix().at(i, j)));
        }
        inter.add_codes(w);
    }
    SubspaceBasis meet = inter.to_basis();
    if (sum.dim() + meet.dim() != da + db)
        throw InternalError("modular dimension law violated in meet/join");
    return {sum, meet};
}

} // namespace

SubspaceBasis meet(const SubspaceBasis& a, const SubspaceBasis& b) { return sum_and_intersection(a, b).second; }

SubspaceBasis join(const SubspaceBasis& a, const SubspaceBasis& b) { return sum_and_intersection(a, b).first; }

SubspaceBasis complement(const SubspaceBasis& w) {
    std::vector<Vector> rows;
    size_t next_pivot = 0;
    const auto& piv = w.pivots();
    for (size_t j = 0; j < w.ambient(); ++j) {
        if (next_pivot < piv.size() && piv[next_pivot] == j) {
            ++next_pivot;
            continue;
        }
        rows.push_back(Vector::unit(w.tower(), w.level(), w.ambient(), j));
    }
    if (rows.empty()) return SubspaceBasis::zero(w.tower(), w.level(), w.ambient());
    return SubspaceBasis::span_of(rows);
}

SubspaceBasis kernel(const Matrix& m) {
    SubspaceBasis r = SubspaceBasis::span_of(m);
    const auto& tw = *m.tower();
    const auto& piv = r.pivots();
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t p : piv) is_pivot[p] = true;
    IncrementalRref inc(m.tower(), m.level(), m.cols());
    for (size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<code_t> x(m.cols(), 0);
        x[f] = 1;
        for (size_t i = 0; i < r.dim(); ++i) x[piv[i]] = tw.neg(r.matrix().at(i, f));
        inc.add_codes(x);
    }
    return inc.to_basis();
}

SubspaceBasis left_kernel(const Matrix& m) { return kernel(m.transposed()); }

std::optional<Vector> solve_left(const Matrix& rows, const Vector& v) {
    check_same_frame(rows.tower(), rows.level(), v.tower(), v.level(), "solve_left");
    if (v.size() != rows.cols()) throw DomainError("solve_left: length mismatch");
    const size_t n = rows.cols(), k = rows.rows();
    // augmented transpose system: columns are the unknown coefficients
    Matrix aug(rows.tower(), rows.level(), n, k + 1);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) aug.set(i, j, rows.at(j, i));
        aug.set(i, k, v.code(i));
    }
    SubspaceBasis r = SubspaceBasis::span_of(aug);
    std::vector<code_t> sol(k, 0);
    for (size_t i = 0; i < r.dim(); ++i) {
        size_t p = r.pivots()[i];
        if (p == k) return std::nullopt; // inconsistent
        sol[p] = r.matrix().at(i, k);
    }
    return Vector(rows.tower(), rows.level(), std::move(sol), false);
}

std::size_t rank_of(const Matrix& m) {
    IncrementalRref inc(m.tower(), m.level(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i) inc.add_codes(m.row_codes(i));
    return inc.rank();
}

namespace {

Matrix direct_sum_frame(const SubspaceBasis& onto, const SubspaceBasis& along) {
    check_same_frame(onto.tower(), onto.level(), along.tower(), along.level(), "project");
    if (onto.ambient() != along.ambient()) throw DomainError("project: ambient dimension mismatch");
    const size_t n = onto.ambient();
    if (onto.dim() + along.dim() != n)
        throw DomainError("project: onto and along do not decompose the ambient space");
    Matrix frame(onto.tower(), onto.level(), n, n);
    for (size_t i = 0; i < onto.dim(); ++i) frame.set_row(i, onto.basis_row(i));
    for (size_t i = 0; i < along.dim(); ++i) frame.set_row(onto.dim() + i, along.basis_row(i));
    if (rank_of(frame) != n) throw DomainError("project: onto and along are not a direct sum");
    return frame;
}

Vector project_with_frame(const Vector& v, const Matrix& frame, const SubspaceBasis& onto) {
    auto sol = solve_left(frame, v);
    if (!sol) throw InternalError("project: full frame failed to solve");
    const auto& tw = *v.tower();
    std::vector<code_t> out(v.size(), 0);
    for (size_t i = 0; i < onto.dim(); ++i) {
        code_t c = sol->code(i);
        if (!c) continue;
        for (size_t j = 0; j < v.size(); ++j) out[j] = tw.add(out[j], tw.mul(c, onto.matrix().at(i, j)));
    }
    return {v.tower(), v.level(), std::move(out), false};
}

} // namespace

Vector project(const Vector& v, const SubspaceBasis& onto, const SubspaceBasis& along) {
    Matrix frame = direct_sum_frame(onto, along);
    if (v.size() != onto.ambient()) throw DomainError("project: vector length mismatch");
    return project_with_frame(v, frame, onto);
}

SubspaceBasis project(const SubspaceBasis& s, const SubspaceBasis& onto, const SubspaceBasis& along) {
    Matrix frame = direct_sum_frame(onto, along);
    IncrementalRref inc(s.tower(), s.level(), s.ambient());
    for (size_t i = 0; i < s.dim(); ++i) inc.add(project_with_frame(s.basis_row(i), frame, onto));
    return inc.to_basis();
}

// -- scalar restriction ------------------------------------------------------------------

Vector expand_to_sub(const Vector& v) {
    const auto& tw = *v.tower();
    const auto t = static_cast<size_t>(tw.t());
    std::vector<code_t> out(v.size() * t, 0);
    for (size_t j = 0; j < v.size(); ++j) {
        auto coords = tw.expand_over_sub(v.code(j));
        for (size_t l = 0; l < t; ++l) out[j * t + l] = coords[l];
    }
    return {v.tower(), Level::Sub, std::move(out), false};
}

Vector assemble_from_sub(const Vector& v, int t) {
    const auto& tw = *v.tower();
    auto tt = static_cast<size_t>(t);
    if (v.size() % tt != 0) throw DomainError("assemble_from_sub: length not a multiple of t");
    std::vector<code_t> out(v.size() / tt, 0);
    for (size_t j = 0; j < out.size(); ++j) {
        std::vector<code_t> coords(tt);
        for (size_t l = 0; l < tt; ++l) coords[l] = v.code(j * tt + l);
        out[j] = tw.assemble_from_sub(coords);
    }
    return {v.tower(), Level::Top, std::move(out), false};
}

SubspaceBasis restrict_scalars(const SubspaceBasis& s) {
    if (s.level() != Level::Top) throw DomainError("restrict_scalars expects a GF(q^t) subspace");
    const auto& tw = *s.tower();
    const auto t = static_cast<size_t>(tw.t());
    IncrementalRref inc(s.tower(), Level::Sub, s.ambient() * t);
    for (size_t i = 0; i < s.dim(); ++i) {
        Vector b = s.basis_row(i);
        for (size_t l = 0; l < t; ++l) inc.add(expand_to_sub(b.scaled(tw.power_basis()[l])));
    }
    return inc.to_basis();
}

// -- randomized helpers -----------------------------------------------------------------

SubspaceBasis random_complement(const SubspaceBasis& w, std::mt19937_64& rng) {
    IncrementalRref inc(w.tower(), w.level(), w.ambient());
    for (size_t i = 0; i < w.dim(); ++i) inc.add(w.basis_row(i));
    std::vector<Vector> added;
    while (inc.rank() < w.ambient()) {
        std::vector<code_t> codes(w.ambient());
        for (auto& c : codes) c = random_code(w.tower(), w.level(), rng);
        Vector v(w.tower(), w.level(), std::move(codes), false);
        if (inc.add(v)) added.push_back(std::move(v));
    }
    if (added.empty()) return SubspaceBasis::zero(w.tower(), w.level(), w.ambient());
    return SubspaceBasis::span_of(added);
}

Matrix random_invertible(const TowerPtr& tower, Level level, std::size_t n, std::mt19937_64& rng) {
    IncrementalRref inc(tower, level, n);
    std::vector<Vector> picked;
    while (picked.size() < n) {
        std::vector<code_t> codes(n);
        for (auto& c : codes) c = random_code(tower, level, rng);
        Vector v(tower, level, std::move(codes), false);
        if (inc.add(v)) picked.push_back(std::move(v));
    }
    return Matrix::from_rows(picked);
}

std::uint64_t gaussian_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t fsize) {
    if (k > n) return 0;
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        std::uint64_t qn = 1, qd = 1;
        for (std::uint64_t j = 0; j < n - i; ++j) qn *= fsize;
        for (std::uint64_t j = 0; j < i + 1; ++j) qd *= fsize;
        acc = acc * (qn - 1) / (qd - 1);
    }
    return static_cast<std::uint64_t>(acc);
}

std::vector<SubspaceBasis> enumerate_subspaces(const TowerPtr& tower, Level level, std::size_t n, std::size_t k,
                                               std::uint64_t cap) {
    std::uint64_t count = gaussian_binomial(n, k, tower->level_size(level));
    if (count > cap)
        throw CapError("enumerating " + std::to_string(count) + " subspaces exceeds cap " + std::to_string(cap));
    std::vector<SubspaceBasis> out;
    out.reserve(static_cast<size_t>(count));
    if (k == 0) {
        out.push_back(SubspaceBasis::zero(tower, level, n));
        return out;
    }
    std::vector<code_t> scalars;
    for (const auto& e : tower->elements(level)) scalars.push_back(e.code());
    std::vector<size_t> piv(k);
    for (size_t i = 0; i < k; ++i) piv[i] = i;
    bool more = k <= n;
    while (more) {
        std::vector<bool> is_piv(n, false);
        for (size_t p : piv) is_piv[p] = true;
        std::vector<std::pair<size_t, size_t>> free_pos;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = piv[i] + 1; j < n; ++j)
                if (!is_piv[j]) free_pos.emplace_back(i, j);
        std::uint64_t combos = 1;
        for (size_t i = 0; i < free_pos.size(); ++i) combos *= scalars.size();
        for (std::uint64_t asg = 0; asg < combos; ++asg) {
            Matrix m(tower, level, k, n);
            for (size_t i = 0; i < k; ++i) m.set(i, piv[i], 1);
            std::uint64_t rest = asg;
            for (auto [i, j] : free_pos) {
                m.set(i, j, scalars[static_cast<size_t>(rest % scalars.size())]);
                rest /= scalars.size();
            }
            out.push_back(SubspaceBasis::span_of(m));
        }
        // next pivot combination
        more = false;
        for (size_t i = k; i-- > 0;) {
            if (piv[i] + (k - i) <= n - 1) {
                ++piv[i];
                for (size_t j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
                more = true;
                break;
            }
        }
    }
    if (out.size() != count) throw InternalError("subspace enumeration does not match the Gaussian binomial");
    return out;
}

} // namespace fingeo
