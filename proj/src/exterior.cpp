#include "fingeo/exterior.hpp"

#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace fingeo {

// -- IndexTable -------------------------------------------------------------------

std::uint64_t IndexTable::binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < k; ++i) acc = acc * (n - i) / (i + 1);
    return static_cast<std::uint64_t>(acc);
}

IndexTable::IndexTable(int n, int k) : n_(n), k_(k) {
    auto count = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
    subsets_.reserve(count);
    masks_.reserve(count);
    std::vector<std::uint8_t> cur(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<size_t>(i)] = static_cast<std::uint8_t>(i);
    while (true) {
        std::uint32_t m = 0;
        for (auto e : cur) m |= 1u << e;
        lookup_.emplace(m, subsets_.size());
        masks_.push_back(m);
        subsets_.push_back(cur);
        // next k-subset in lexicographic order
        int i = k - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j) cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
    }
}

std::size_t IndexTable::index_of_mask(std::uint32_t mask) const {
    auto it = lookup_.find(mask);
    if (it == lookup_.end()) throw DomainError("subset mask not present in index table");
    return it->second;
}

int IndexTable::complement_sign(std::size_t i) const {
    const auto& s = subsets_[i];
    unsigned inv = 0;
    for (size_t j = 0; j < s.size(); ++j) inv += static_cast<unsigned>(s[j]) - static_cast<unsigned>(j);
    return (inv & 1u) ? -1 : 1;
}

std::uint32_t IndexTable::complement_mask(std::size_t i) const {
    std::uint32_t all = n_ == 32 ? 0xffffffffu : ((1u << n_) - 1u);
    return all & ~masks_[i];
}

namespace {

constexpr std::uint64_t kMaxIndexTableSize = 1u << 22;

std::filesystem::path cache_file(int n, int k) {
    const char* dir = std::getenv("FINGEO_CACHE_DIR");
    if (!dir || !*dir) return {};
    return std::filesystem::path(dir) / ("itable_n" + std::to_string(n) + "_k" + std::to_string(k) + ".txt");
}

struct TableAccess : IndexTable {
    TableAccess(int n, int k) : IndexTable(n, k) {}
};

// Disk layer is a pure performance artifact: anything off about a cached
// table falls back to recomputation.
std::shared_ptr<const IndexTable> load_cached(int n, int k) {
    auto path = cache_file(n, k);
    if (path.empty() || !std::filesystem::exists(path)) return nullptr;
    std::ifstream in(path);
    std::string magic;
    int version = 0, fn = 0, fk = 0;
    std::uint64_t count = 0;
    if (!(in >> magic >> version >> fn >> fk >> count)) return nullptr;
    if (magic != "fingeo-itable" || version != 1 || fn != n || fk != k) return nullptr;
    if (count != IndexTable::binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k))) return nullptr;
    auto table = std::make_shared<TableAccess>(n, k);
    // bit-validate the stored subsets against the freshly built table
    for (std::uint64_t i = 0; i < count; ++i) {
        for (int j = 0; j < k; ++j) {
            int v = -1;
            if (!(in >> v) || v != table->subset(i)[static_cast<size_t>(j)]) return nullptr;
        }
    }
    return table;
}

void store_cached(const IndexTable& table) {
    auto path = cache_file(table.n(), table.k());
    if (path.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << "fingeo-itable 1 " << table.n() << " " << table.k() << " " << table.size() << "\n";
        for (size_t i = 0; i < table.size(); ++i) {
            for (size_t j = 0; j < table.subset(i).size(); ++j)
                out << (j ? " " : "") << static_cast<int>(table.subset(i)[j]);
            out << "\n";
        }
    }
    std::filesystem::rename(tmp, path, ec);
}

} // namespace

std::shared_ptr<const IndexTable> IndexTable::get(int n, int k) {
    if (n < 0 || k < 0 || k > n || n > 31) throw DomainError("index table requires 0 <= k <= n <= 31");
    if (binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)) > kMaxIndexTableSize)
        throw CapError("index table binom(" + std::to_string(n) + "," + std::to_string(k) + ") too large");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const IndexTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::shared_ptr<const IndexTable> table = load_cached(n, k);
    if (!table) {
        auto built = std::make_shared<TableAccess>(n, k);
        store_cached(*built);
        table = built;
    }
    cache.emplace(key, table);
    return table;
}

// -- PluckerVector ------------------------------------------------------------------

PluckerVector::PluckerVector(IndexTablePtr table, Vector coords)
    : table_(std::move(table)), coords_(std::move(coords)) {
    if (coords_.size() != table_->size()) throw DomainError("Pluecker coordinate length does not match the index table");
}

bool PluckerVector::operator==(const PluckerVector& o) const {
    return table_->n() == o.table_->n() && table_->k() == o.table_->k() && coords_ == o.coords_;
}

// -- minors and wedges ------------------------------------------------------------------

namespace {

// Determinant of the square submatrix of m on the given columns.
code_t minor_det(const Matrix& m, const std::vector<std::uint8_t>& cols) {
    const auto& tw = *m.tower();
    size_t k = cols.size();
    if (k == 0) return 1;
    std::vector<code_t> a(k * k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) a[i * k + j] = m.at(i, cols[j]);
    code_t det = 1;
    for (size_t col = 0; col < k; ++col) {
        size_t piv = col;
        while (piv < k && a[piv * k + col] == 0) ++piv;
        if (piv == k) return 0;
        if (piv != col) {
            for (size_t j = col; j < k; ++j) std::swap(a[piv * k + j], a[col * k + j]);
            det = tw.neg(det);
        }
        code_t d = a[col * k + col];
        det = tw.mul(det, d);
        code_t dinv = tw.inv(d);
        for (size_t i = col + 1; i < k; ++i) {
            code_t f = tw.mul(a[i * k + col], dinv);
            if (!f) continue;
            for (size_t j = col; j < k; ++j) a[i * k + j] = tw.sub(a[i * k + j], tw.mul(f, a[col * k + j]));
        }
    }
    return det;
}

} // namespace

PluckerVector plucker(const SubspaceBasis& w) {
    return plucker(w, IndexTable::get(static_cast<int>(w.ambient()), static_cast<int>(w.dim())));
}

PluckerVector plucker(const SubspaceBasis& w, const IndexTablePtr& table) {
    if (table->n() != static_cast<int>(w.ambient()) || table->k() != static_cast<int>(w.dim()))
        throw DomainError("plucker: subspace dimensions do not match the index table");
    std::vector<code_t> coords(table->size());
    for (size_t i = 0; i < table->size(); ++i) coords[i] = minor_det(w.matrix(), table->subset(i));
    Vector v(w.tower(), w.level(), std::move(coords), false);
    return PluckerVector(table, v.canonicalized());
}

Vector wedge_extend(const IndexTablePtr& from, const Vector& w, const Vector& v, const IndexTablePtr& to) {
    if (from->n() != to->n() || from->k() + 1 != to->k()) throw DomainError("wedge_extend: incompatible tables");
    if (w.size() != from->size() || v.size() != static_cast<size_t>(from->n()))
        throw DomainError("wedge_extend: operand lengths do not match the tables");
    const auto& tw = *w.tower();
    const int l = from->k();
    std::vector<code_t> out(to->size(), 0);
    for (size_t ti = 0; ti < to->size(); ++ti) {
        const auto& T = to->subset(ti);
        std::uint32_t tmask = to->mask(ti);
        code_t acc = 0;
        for (int idx = 0; idx <= l; ++idx) {
            code_t vp = v.code(T[static_cast<size_t>(idx)]);
            if (!vp) continue;
            size_t si = from->index_of_mask(tmask & ~(1u << T[static_cast<size_t>(idx)]));
            code_t term = tw.mul(w.code(si), vp);
            if (!term) continue;
            // sign (-1)^(l - idx): v moves past the tail of the subset
            if (((l - idx) & 1) != 0) term = tw.neg(term);
            acc = tw.add(acc, term);
        }
        out[ti] = acc;
    }
    Level lv = (w.level() == Level::Sub && v.level() == Level::Sub) ? Level::Sub : Level::Top;
    return {w.tower(), lv, std::move(out), false};
}

PluckerVector wedge(const std::vector<Vector>& vectors) {
    if (vectors.empty()) throw DomainError("wedge of an empty list");
    const int n = static_cast<int>(vectors[0].size());
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != n) throw DomainError("wedge: mixed ambient dimensions");
    auto cur_table = IndexTable::get(n, 1);
    Vector cur = vectors[0];
    for (size_t i = 1; i < vectors.size(); ++i) {
        auto next_table = IndexTable::get(n, static_cast<int>(i) + 1);
        cur = wedge_extend(cur_table, cur, vectors[i], next_table);
        cur_table = next_table;
    }
    return {cur_table, std::move(cur)};
}

Vector hodge_form(const SubspaceBasis& c, const IndexTablePtr& table) {
    const int n = table->n(), k = table->k();
    if (static_cast<int>(c.ambient()) != n || static_cast<int>(c.dim()) != n - k)
        throw DomainError("hodge_form: complementary subspace must have dimension n-k");
    const auto& tw = *c.tower();
    std::vector<code_t> form(table->size(), 0);
    for (size_t i = 0; i < table->size(); ++i) {
        std::uint32_t cm = table->complement_mask(i);
        std::vector<std::uint8_t> comp;
        comp.reserve(static_cast<size_t>(n - k));
        for (int b = 0; b < n; ++b)
            if (cm & (1u << b)) comp.push_back(static_cast<std::uint8_t>(b));
        code_t m = minor_det(c.matrix(), comp);
        if (m && table->complement_sign(i) < 0) m = tw.neg(m);
        form[i] = m;
    }
    return {c.tower(), c.level(), std::move(form), false};
}

SubspaceBasis form_kernel(const Vector& form, const IndexTablePtr& table, const TowerPtr& tower, Level level) {
    const int n = table->n(), k = table->k();
    if (form.size() != table->size()) throw DomainError("form_kernel: coordinate length mismatch");
    if (k == 0) throw DomainError("form_kernel: k must be positive");
    const auto& tw = *tower;
    auto sub_table = IndexTable::get(n, k - 1);
    Matrix m(tower, level, static_cast<size_t>(n), sub_table->size());
    for (int i = 0; i < n; ++i) {
        for (size_t si = 0; si < sub_table->size(); ++si) {
            std::uint32_t sm = sub_table->mask(si);
            if (sm & (1u << i)) continue;
            size_t fi = table->index_of_mask(sm | (1u << i));
            code_t val = form.code(fi);
            if (!val) continue;
            // e_i ^ e_S: sign counts the elements of S below i
            int below = std::popcount(sm & ((1u << i) - 1u));
            if (below & 1) val = tw.neg(val);
            m.set(static_cast<size_t>(i), si, val);
        }
    }
    return left_kernel(m);
}

DecomposabilityResult is_decomposable(const PluckerVector& v) {
    if (v.is_zero()) throw DomainError("decomposability test requires a nonzero vector");
    const int n = v.table()->n(), k = v.table()->k();
    const auto& tower = v.coords().tower();
    const Level level = v.coords().level();
    DecomposabilityResult res;
    if (k == n || k == 0) {
        res.decomposable = true;
        res.witness = k == n ? SubspaceBasis::full(tower, level, static_cast<size_t>(n))
                             : SubspaceBasis::zero(tower, level, static_cast<size_t>(n));
        return res;
    }
    const auto& tw = *tower;
    auto up_table = IndexTable::get(n, k + 1);
    Matrix m(tower, level, static_cast<size_t>(n), up_table->size());
    for (size_t ti = 0; ti < up_table->size(); ++ti) {
        const auto& T = up_table->subset(ti);
        std::uint32_t tmask = up_table->mask(ti);
        for (size_t idx = 0; idx < T.size(); ++idx) {
            int i = T[idx];
            code_t val = v.coord(v.table()->index_of_mask(tmask & ~(1u << i)));
            if (!val) continue;
            if (idx & 1) val = tw.neg(val); // e_i moves past idx smaller elements
            m.set(static_cast<size_t>(i), ti, val);
        }
    }
    SubspaceBasis ker = left_kernel(m);
    res.decomposable = static_cast<int>(ker.dim()) == k;
    if (res.decomposable) {
        auto img = plucker(ker, v.table());
        if (img.coords() != v.canonicalized().coords())
            throw InternalError("decomposability witness does not reproduce the input vector");
        res.witness = std::move(ker);
    }
    return res;
}

} // namespace fingeo
