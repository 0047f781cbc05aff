#include "steenrod/exactla.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

namespace steenrod::la {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Modulus::Modulus(std::uint32_t p, int power) : p_(p), power_(power), m_(0)
{
    if (!is_prime(p))
        throw std::invalid_argument("modulus: " + std::to_string(p) + " is not prime");
    if (power != 1 && power != 2)
        throw std::invalid_argument("modulus: power must be 1 or 2");
    if (p > 46340)
        throw std::invalid_argument("modulus: prime too large");
    m_ = power == 1 ? p : p * p;
}

Residue Modulus::inverse(Residue a) const
{
    a %= m_;
    if (!is_unit(a))
        throw std::domain_error("modulus: " + std::to_string(a) + " is not invertible");
    // Extended Euclid.
    std::int64_t t = 0, new_t = 1, r = m_, new_r = a;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::tie(t, new_t) = std::make_tuple(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_tuple(new_r, r - q * new_r);
    }
    return reduce(t);
}

namespace detail {

void axpy(const Modulus& mod, Residue c, const SparseVector& x, SparseVector& y)
{
    if (c == 0 || x.empty())
        return;
    SparseVector out;
    out.reserve(x.size() + y.size());
    auto xi = x.begin();
    auto yi = y.begin();
    while (xi != x.end() || yi != y.end()) {
        if (yi == y.end() || (xi != x.end() && xi->first < yi->first)) {
            Residue v = mod.mul(c, xi->second);
            if (v != 0)
                out.emplace_back(xi->first, v);
            ++xi;
        } else if (xi == x.end() || yi->first < xi->first) {
            out.push_back(*yi);
            ++yi;
        } else {
            Residue v = mod.add(yi->second, mod.mul(c, xi->second));
            if (v != 0)
                out.emplace_back(yi->first, v);
            ++xi;
            ++yi;
        }
    }
    y.swap(out);
}

SparseVector to_sparse(std::span<const Residue> dense)
{
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != 0)
            v.emplace_back(i, dense[i]);
    return v;
}

std::vector<Residue> to_dense(const SparseVector& v, std::size_t n)
{
    std::vector<Residue> out(n, 0);
    for (auto [i, c] : v)
        out.at(i) = c;
    return out;
}

}  // namespace detail

using detail::axpy;

// ---------------------------------------------------------------------------
// FpMatrix

FpMatrix::FpMatrix(Modulus mod, std::size_t rows, std::size_t cols) : mod_(mod), rows_(rows), cols_(cols) {}

FpMatrix::FpMatrix(Modulus mod, std::size_t rows, std::size_t cols, std::vector<Entry> sorted)
    : mod_(mod), rows_(rows), cols_(cols), entries_(std::move(sorted))
{
}

FpMatrix FpMatrix::from_triplets(Modulus mod, std::size_t rows, std::size_t cols, std::vector<Entry> t)
{
    for (const auto& e : t)
        if (e.row >= rows || e.col >= cols)
            throw std::out_of_range("FpMatrix: triplet outside matrix bounds");
    std::sort(t.begin(), t.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    std::vector<Entry> out;
    out.reserve(t.size());
    for (const auto& e : t) {
        Residue v = e.value % mod.value();
        if (!out.empty() && out.back().row == e.row && out.back().col == e.col) {
            out.back().value = mod.add(out.back().value, v);
        } else {
            out.push_back({e.row, e.col, v});
        }
    }
    std::erase_if(out, [](const Entry& e) { return e.value == 0; });
    return FpMatrix(mod, rows, cols, std::move(out));
}

FpMatrix FpMatrix::from_signed_triplets(Modulus mod, std::size_t rows, std::size_t cols,
                                        const std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>>& t)
{
    std::vector<Entry> e;
    e.reserve(t.size());
    for (auto [r, c, v] : t)
        e.push_back({r, c, mod.reduce(v)});
    return from_triplets(mod, rows, cols, std::move(e));
}

FpMatrix FpMatrix::from_dense(Modulus mod, const std::vector<std::vector<std::int64_t>>& rows)
{
    std::size_t ncols = rows.empty() ? 0 : rows.front().size();
    std::vector<Entry> e;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != ncols)
            throw std::invalid_argument("FpMatrix::from_dense: ragged rows");
        for (std::size_t c = 0; c < ncols; ++c) {
            Residue v = mod.reduce(rows[r][c]);
            if (v != 0)
                e.push_back({r, c, v});
        }
    }
    return FpMatrix(mod, rows.size(), ncols, std::move(e));
}

FpMatrix FpMatrix::from_columns(Modulus mod, std::size_t rows, const std::vector<SparseVector>& columns)
{
    std::vector<Entry> e;
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (auto [r, v] : columns[c])
            e.push_back({r, c, v});
    return from_triplets(mod, rows, columns.size(), std::move(e));
}

FpMatrix FpMatrix::identity(Modulus mod, std::size_t n)
{
    std::vector<Entry> e;
    e.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        e.push_back({i, i, 1});
    return FpMatrix(mod, n, n, std::move(e));
}

Residue FpMatrix::at(std::size_t r, std::size_t c) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(r, c),
                               [](const Entry& e, const std::pair<std::size_t, std::size_t>& k) {
                                   return std::tie(e.row, e.col) < std::tie(k.first, k.second);
                               });
    if (it != entries_.end() && it->row == r && it->col == c)
        return it->value;
    return 0;
}

std::vector<Residue> FpMatrix::apply(std::span<const Residue> x) const
{
    if (x.size() != cols_)
        throw std::invalid_argument("FpMatrix::apply: dimension mismatch");
    std::vector<std::uint64_t> acc(rows_, 0);
    for (const auto& e : entries_)
        acc[e.row] = (acc[e.row] + std::uint64_t(e.value) * x[e.col]) % mod_.value();
    return {acc.begin(), acc.end()};
}

SparseVector FpMatrix::apply(const SparseVector& x) const
{
    std::vector<Residue> dense(cols_, 0);
    for (auto [i, v] : x)
        dense.at(i) = v;
    return detail::to_sparse(apply(dense));
}

FpMatrix FpMatrix::operator*(const FpMatrix& rhs) const
{
    if (!(mod_ == rhs.mod_) || cols_ != rhs.rows_)
        throw std::invalid_argument("FpMatrix::operator*: incompatible operands");
    auto rhs_rows = rhs.sparse_rows();
    std::vector<Entry> out;
    std::map<std::size_t, Residue> acc;
    std::size_t i = 0;
    while (i < entries_.size()) {
        std::size_t row = entries_[i].row;
        acc.clear();
        for (; i < entries_.size() && entries_[i].row == row; ++i) {
            const auto& e = entries_[i];
            for (auto [c, v] : rhs_rows[e.col]) {
                Residue& slot = acc[c];
                slot = mod_.add(slot, mod_.mul(e.value, v));
            }
        }
        for (auto [c, v] : acc)
            if (v != 0)
                out.push_back({row, c, v});
    }
    return FpMatrix(mod_, rows_, rhs.cols_, std::move(out));
}

FpMatrix FpMatrix::operator+(const FpMatrix& rhs) const
{
    if (!(mod_ == rhs.mod_) || rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("FpMatrix::operator+: incompatible operands");
    std::vector<Entry> all(entries_.begin(), entries_.end());
    all.insert(all.end(), rhs.entries_.begin(), rhs.entries_.end());
    return from_triplets(mod_, rows_, cols_, std::move(all));
}

FpMatrix FpMatrix::operator-(const FpMatrix& rhs) const { return *this + rhs.scaled(mod_.neg(1)); }

FpMatrix FpMatrix::scaled(Residue c) const
{
    std::vector<Entry> out;
    for (const auto& e : entries_) {
        Residue v = mod_.mul(e.value, c);
        if (v != 0)
            out.push_back({e.row, e.col, v});
    }
    return FpMatrix(mod_, rows_, cols_, std::move(out));
}

FpMatrix FpMatrix::transposed() const
{
    std::vector<Entry> t;
    t.reserve(entries_.size());
    for (const auto& e : entries_)
        t.push_back({e.col, e.row, e.value});
    return from_triplets(mod_, cols_, rows_, std::move(t));
}

FpMatrix FpMatrix::reduced_to(Modulus target) const
{
    if (mod_.value() % target.value() != 0)
        throw std::invalid_argument("FpMatrix::reduced_to: target modulus does not divide source");
    std::vector<Entry> out;
    for (const auto& e : entries_)
        if (e.value % target.value() != 0)
            out.push_back({e.row, e.col, e.value % target.value()});
    return FpMatrix(target, rows_, cols_, std::move(out));
}

std::vector<std::vector<Residue>> FpMatrix::to_dense() const
{
    std::vector<std::vector<Residue>> d(rows_, std::vector<Residue>(cols_, 0));
    for (const auto& e : entries_)
        d[e.row][e.col] = e.value;
    return d;
}

std::vector<SparseVector> FpMatrix::sparse_rows() const
{
    std::vector<SparseVector> out(rows_);
    for (const auto& e : entries_)
        out[e.row].emplace_back(e.col, e.value);
    return out;
}

std::vector<SparseVector> FpMatrix::sparse_columns() const
{
    std::vector<SparseVector> out(cols_);
    for (const auto& e : entries_)
        out[e.col].emplace_back(e.row, e.value);
    return out;
}

bool operator==(const FpMatrix& a, const FpMatrix& b)
{
    if (!(a.mod_ == b.mod_) || a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.entries_.size() != b.entries_.size())
        return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        const auto& x = a.entries_[i];
        const auto& y = b.entries_[i];
        if (x.row != y.row || x.col != y.col || x.value != y.value)
            return false;
    }
    return true;
}

std::string to_string(const FpMatrix& m)
{
    std::ostringstream os;
    auto d = m.to_dense();
    os << "[";
    for (std::size_t r = 0; r < d.size(); ++r) {
        os << (r ? ", [" : "[");
        for (std::size_t c = 0; c < d[r].size(); ++c)
            os << (c ? "," : "") << d[r][c];
        os << "]";
    }
    os << "] mod " << m.modulus().value();
    return os.str();
}

// ---------------------------------------------------------------------------
// Row reduction

namespace {

struct Echelon {
    Modulus mod;
    std::vector<SparseVector> rows;       // leading entry 1, fully reduced against the other pivots
    std::map<std::size_t, std::size_t> by_pivot;  // pivot col -> index into rows

    explicit Echelon(Modulus m) : mod(m) {}

    void insert(SparseVector r)
    {
        // Eliminate existing pivot columns; basis rows vanish on each other's pivots.
        std::vector<std::pair<std::size_t, Residue>> hits;
        for (auto [c, v] : r)
            if (by_pivot.count(c))
                hits.emplace_back(c, v);
        for (auto [c, v] : hits)
            axpy(mod, mod.neg(v), rows[by_pivot[c]], r);
        if (r.empty())
            return;
        auto [lead, lv] = r.front();
        Residue inv = mod.inverse(lv);
        for (auto& e : r)
            e.second = mod.mul(e.second, inv);
        for (auto& row : rows) {
            auto it = std::lower_bound(row.begin(), row.end(), lead,
                                       [](const auto& e, std::size_t c) { return e.first < c; });
            if (it != row.end() && it->first == lead)
                axpy(mod, mod.neg(it->second), r, row);
        }
        by_pivot[lead] = rows.size();
        rows.push_back(std::move(r));
    }
};

Echelon echelon_of(const FpMatrix& m)
{
    Echelon ech(m.modulus());
    for (auto& r : m.sparse_rows())
        ech.insert(std::move(r));
    return ech;
}

void require_field(const FpMatrix& m, const char* what)
{
    if (!m.modulus().is_field())
        throw std::invalid_argument(std::string(what) + ": requires a prime field (got Z/p^2)");
}

FpMatrix hstack(const FpMatrix& a, const FpMatrix& b)
{
    std::vector<Entry> e(a.entries().begin(), a.entries().end());
    for (const auto& x : b.entries())
        e.push_back({x.row, x.col + a.cols(), x.value});
    return FpMatrix::from_triplets(a.modulus(), a.rows(), a.cols() + b.cols(), std::move(e));
}

std::vector<std::optional<std::vector<Residue>>> solve_many_field(const FpMatrix& m, const FpMatrix& b)
{
    const std::size_t n = m.cols();
    Echelon ech = echelon_of(hstack(m, b));
    std::vector<std::optional<std::vector<Residue>>> out(b.cols());
    std::vector<bool> bad(b.cols(), false);
    for (const auto& [pc, idx] : ech.by_pivot) {
        if (pc < n)
            continue;
        for (auto [c, v] : ech.rows[idx])
            if (c >= n && v != 0)
                bad[c - n] = true;
    }
    for (std::size_t k = 0; k < b.cols(); ++k)
        if (!bad[k])
            out[k] = std::vector<Residue>(n, 0);
    for (const auto& [pc, idx] : ech.by_pivot) {
        if (pc >= n)
            continue;
        for (auto [c, v] : ech.rows[idx])
            if (c >= n && out[c - n])
                (*out[c - n])[pc] = v;
    }
    return out;
}

FpMatrix column_matrix(const Modulus& mod, std::span<const Residue> b)
{
    std::vector<Entry> e;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] % mod.value() != 0)
            e.push_back({i, 0, b[i]});
    return FpMatrix::from_triplets(mod, b.size(), 1, std::move(e));
}

// Solve over Z/p^2 by lifting: x = x0 + K y + p x1 where x0 solves mod p, K spans the mod-p kernel,
// and (y, x1) solves the mod-p system for the residual divided by p.
std::optional<std::vector<Residue>> solve_lifted(const FpMatrix& m, std::span<const Residue> b)
{
    const Modulus& big = m.modulus();
    const Modulus small = big.base_field();
    const std::uint32_t p = small.value();
    FpMatrix m_mod_p = m.reduced_to(small);
    std::vector<Residue> b_mod_p(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        b_mod_p[i] = b[i] % p;
    auto x0 = solve_many_field(m_mod_p, column_matrix(small, b_mod_p)).front();
    if (!x0)
        return std::nullopt;
    std::vector<Residue> x0_big(x0->begin(), x0->end());
    auto mx0 = m.apply(x0_big);
    std::vector<Residue> r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        Residue d = big.sub(b[i] % big.value(), mx0[i]);
        r[i] = (d / p) % p;
    }
    FpMatrix kernel = kernel_basis(m_mod_p);
    // M K is divisible by p over Z/p^2.
    FpMatrix kernel_big = FpMatrix::from_columns(big, kernel.rows(), kernel.sparse_columns());
    FpMatrix mk = m * kernel_big;
    std::vector<Entry> ne;
    for (const auto& e : mk.entries())
        ne.push_back({e.row, e.col, (e.value / p) % p});
    FpMatrix n_mat = FpMatrix::from_triplets(small, mk.rows(), mk.cols(), std::move(ne));
    auto sol = solve_many_field(hstack(n_mat, m_mod_p), column_matrix(small, r)).front();
    if (!sol)
        return std::nullopt;
    std::vector<Residue> y(sol->begin(), sol->begin() + kernel.cols());
    std::vector<Residue> x1(sol->begin() + kernel.cols(), sol->end());
    auto ky = kernel_big.apply(std::vector<Residue>(y.begin(), y.end()));
    std::vector<Residue> x(m.cols());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = big.add(big.add(x0_big[i], ky[i]), big.mul(p, x1[i]));
    return x;
}

}  // namespace

RrefResult rref(const FpMatrix& m)
{
    require_field(m, "rref");
    Echelon ech = echelon_of(m);
    std::vector<Entry> e;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (const auto& [pc, idx] : ech.by_pivot) {
        pivots.push_back(pc);
        for (auto [c, v] : ech.rows[idx])
            e.push_back({r, c, v});
        ++r;
    }
    return {FpMatrix::from_triplets(m.modulus(), m.rows(), m.cols(), std::move(e)), std::move(pivots)};
}

std::size_t rank(const FpMatrix& m)
{
    require_field(m, "rank");
    return echelon_of(m).rows.size();
}

std::optional<std::vector<Residue>> solve(const FpMatrix& m, std::span<const Residue> b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("solve: right-hand side has wrong length");
    if (m.modulus().is_field())
        return solve_many_field(m, column_matrix(m.modulus(), b)).front();
    return solve_lifted(m, b);
}

std::vector<std::optional<std::vector<Residue>>> solve_many(const FpMatrix& m, const FpMatrix& b)
{
    if (b.rows() != m.rows() || !(b.modulus() == m.modulus()))
        throw std::invalid_argument("solve_many: incompatible right-hand sides");
    if (m.modulus().is_field())
        return solve_many_field(m, b);
    std::vector<std::optional<std::vector<Residue>>> out;
    auto dense = b.transposed().to_dense();
    for (const auto& col : dense)
        out.push_back(solve_lifted(m, col));
    return out;
}

FpMatrix kernel_basis(const FpMatrix& m)
{
    require_field(m, "kernel_basis");
    const Modulus& mod = m.modulus();
    Echelon ech = echelon_of(m);
    std::vector<SparseVector> cols;
    std::vector<bool> is_pivot(m.cols(), false);
    for (const auto& [pc, idx] : ech.by_pivot)
        is_pivot[pc] = true;
    // For each free column f, x_f = 1 and x_pivot(row) = -row[f].
    std::vector<std::vector<std::pair<std::size_t, Residue>>> by_free(m.cols());
    for (const auto& [pc, idx] : ech.by_pivot)
        for (auto [c, v] : ech.rows[idx])
            if (c != pc)
                by_free[c].emplace_back(pc, mod.neg(v));
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        SparseVector v = by_free[f];
        v.emplace_back(f, 1);
        std::sort(v.begin(), v.end());
        cols.push_back(std::move(v));
    }
    return FpMatrix::from_columns(mod, m.cols(), cols);
}

// ---------------------------------------------------------------------------
// Cohomology via column reduction with clearing

namespace {

struct ColumnReduction {
    std::vector<SparseVector> reduced;    // R columns (low entry normalized to 1 when nonzero)
    std::vector<SparseVector> combos;     // V columns (only when tracked)
    std::vector<std::int64_t> column_of_low;  // row -> column with that low, -1 if none
    std::vector<bool> zero;               // R column is zero and the column was not cleared
};

ColumnReduction reduce_columns(const FpMatrix& m, const std::vector<bool>& cleared, bool track)
{
    const Modulus& mod = m.modulus();
    ColumnReduction out;
    auto cols = m.sparse_columns();
    out.reduced.resize(m.cols());
    if (track)
        out.combos.resize(m.cols());
    out.column_of_low.assign(m.rows(), -1);
    out.zero.assign(m.cols(), false);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (!cleared.empty() && cleared[j])
            continue;
        SparseVector r = std::move(cols[j]);
        SparseVector v;
        if (track)
            v.emplace_back(j, 1);
        while (!r.empty()) {
            auto [low, val] = r.back();
            std::int64_t k = out.column_of_low[low];
            if (k < 0)
                break;
            Residue c = mod.neg(val);  // pivot columns have low coefficient 1
            axpy(mod, c, out.reduced[k], r);
            if (track)
                axpy(mod, c, out.combos[k], v);
        }
        if (r.empty()) {
            out.zero[j] = true;
        } else {
            Residue inv = mod.inverse(r.back().second);
            if (inv != 1) {
                for (auto& e : r)
                    e.second = mod.mul(e.second, inv);
                for (auto& e : v)
                    e.second = mod.mul(e.second, inv);
            }
            out.column_of_low[r.back().first] = static_cast<std::int64_t>(j);
            out.reduced[j] = std::move(r);
        }
        if (track)
            out.combos[j] = std::move(v);
    }
    return out;
}

}  // namespace

SubquotientBasis make_subquotient(const Modulus& mod, std::size_t ambient, std::vector<SparseVector> image,
                                  std::vector<SparseVector> reps, std::vector<SparseVector> complement)
{
    SubquotientBasis b;
    auto ech = std::make_shared<SubquotientBasis::Echelon>();
    ech->mod = mod;
    ech->ambient = ambient;
    ech->owner.assign(ambient, -1);
    for (auto& v : image) {
        ech->owner.at(v.back().first) = static_cast<std::int64_t>(ech->vectors.size());
        ech->vectors.push_back(std::move(v));
        ech->rep_index.push_back(-1);
    }
    for (std::size_t k = 0; k < reps.size(); ++k) {
        ech->owner.at(reps[k].back().first) = static_cast<std::int64_t>(ech->vectors.size());
        ech->vectors.push_back(reps[k]);
        ech->rep_index.push_back(static_cast<std::int64_t>(k));
    }
    for (auto& v : complement) {
        ech->owner.at(v.back().first) = static_cast<std::int64_t>(ech->vectors.size());
        ech->vectors.push_back(std::move(v));
        ech->rep_index.push_back(-2);
    }
    b.reps_ = std::move(reps);
    b.echelon_ = std::move(ech);
    return b;
}

std::vector<Residue> SubquotientBasis::representative_dense(std::size_t k) const
{
    return detail::to_dense(reps_.at(k), ambient_dimension());
}

std::vector<Residue> SubquotientBasis::reduce(const SparseVector& input) const
{
    const auto& ech = *echelon_;
    std::vector<Residue> coords(reps_.size(), 0);
    SparseVector v = input;
    while (!v.empty()) {
        auto [low, val] = v.back();
        if (low >= ech.ambient || ech.owner[low] < 0)
            throw std::invalid_argument("SubquotientBasis::reduce: vector is not a cocycle");
        std::size_t idx = static_cast<std::size_t>(ech.owner[low]);
        const auto& b = ech.vectors[idx];
        Residue c = ech.mod.mul(val, ech.mod.inverse(b.back().second));
        axpy(ech.mod, ech.mod.neg(c), b, v);
        if (ech.rep_index[idx] == -2)
            throw std::invalid_argument("SubquotientBasis::reduce: vector is not a cocycle");
        if (ech.rep_index[idx] >= 0)
            coords[ech.rep_index[idx]] = ech.mod.add(coords[ech.rep_index[idx]], c);
    }
    return coords;
}

std::vector<Residue> SubquotientBasis::reduce(std::span<const Residue> dense) const
{
    if (dense.size() != ambient_dimension())
        throw std::invalid_argument("SubquotientBasis::reduce: dimension mismatch");
    return reduce(detail::to_sparse(dense));
}

bool SubquotientBasis::is_boundary(const SparseVector& v) const
{
    auto c = reduce(v);
    return std::all_of(c.begin(), c.end(), [](Residue x) { return x == 0; });
}

std::vector<SubquotientBasis> cohomology_sequence(std::span<const FpMatrix> ds)
{
    std::vector<SubquotientBasis> out;
    if (ds.size() < 2)
        return out;
    for (const auto& d : ds)
        require_field(d, "cohomology");
    for (std::size_t j = 0; j + 1 < ds.size(); ++j)
        if (ds[j].rows() != ds[j + 1].cols())
            throw std::invalid_argument("cohomology: consecutive differentials do not compose");

    const Modulus mod = ds.front().modulus();
    ColumnReduction prev = reduce_columns(ds[0], {}, false);
    for (std::size_t j = 1; j < ds.size(); ++j) {
        const FpMatrix& d = ds[j];
        std::vector<bool> cleared(d.cols(), false);
        std::vector<SparseVector> image;
        for (std::size_t c = 0; c < prev.reduced.size(); ++c) {
            if (prev.reduced[c].empty())
                continue;
            cleared[prev.reduced[c].back().first] = true;
            image.push_back(prev.reduced[c]);
        }
        ColumnReduction cur = reduce_columns(d, cleared, true);
        std::vector<SparseVector> reps, complement;
        for (std::size_t c = 0; c < d.cols(); ++c) {
            if (cur.zero[c])
                reps.push_back(std::move(cur.combos[c]));
            else if (!cleared[c])
                complement.push_back(std::move(cur.combos[c]));
        }
        // Cleared columns reduce to zero because the image vector with that low is a cocycle;
        // a nonzero image here means d_j * d_{j-1} != 0.
        for (const auto& v : image)
            if (!d.apply(v).empty())
                throw std::invalid_argument("cohomology: differentials do not compose to zero");
        out.push_back(make_subquotient(mod, d.cols(), std::move(image), std::move(reps), std::move(complement)));
        cur.combos.clear();
        prev = std::move(cur);
    }
    return out;
}

SubquotientBasis cohomology_basis(const FpMatrix& d_in, const FpMatrix& d_out)
{
    require_field(d_in, "cohomology_basis");
    if (d_in.rows() != d_out.cols() || !(d_in.modulus() == d_out.modulus()))
        throw std::invalid_argument("cohomology_basis: incompatible differentials");
    if (!(d_out * d_in).is_zero())
        throw std::invalid_argument("cohomology_basis: d_out * d_in != 0");
    std::vector<FpMatrix> ds{d_in, d_out};
    return cohomology_sequence(ds).front();
}

}  // namespace steenrod::la
