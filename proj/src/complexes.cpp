#include "steenrod/complexes.hpp"

#include <algorithm>

namespace steenrod::cx {

namespace {

Residue sign(const Modulus& mod, int exponent) { return (exponent % 2 == 0) ? 1 : mod.neg(1); }

bool empty(const Window& w) { return w.hi < w.lo; }

}  // namespace

// ---------------------------------------------------------------------------

GradedModule::GradedModule(Modulus mod, Window w, std::vector<std::vector<Label>> labels)
    : mod_(mod), w_(w), labels_(std::move(labels))
{
    std::size_t expected = empty(w_) ? 0 : static_cast<std::size_t>(w_.hi - w_.lo + 1);
    if (labels_.size() != expected)
        throw std::invalid_argument("GradedModule: label table does not match window");
    index_.resize(labels_.size());
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        for (std::size_t i = 0; i < labels_[k].size(); ++i)
            if (!index_[k].emplace(labels_[k][i], i).second)
                throw std::invalid_argument("GradedModule: duplicate label " + labels_[k][i]);
    }
}

const std::vector<Label>& GradedModule::labels(int n) const
{
    static const std::vector<Label> none;
    return w_.contains(n) ? labels_[n - w_.lo] : none;
}

std::size_t GradedModule::index_of(int n, const Label& label) const
{
    if (!w_.contains(n))
        throw std::out_of_range("GradedModule: degree outside window");
    return index_[n - w_.lo].at(label);
}

// ---------------------------------------------------------------------------

CochainComplex::CochainComplex(GradedModule module, std::vector<FpMatrix> differentials)
    : module_(std::move(module)), d_(std::move(differentials))
{
    const Window& w = window();
    std::size_t expected = (empty(w) || w.hi == w.lo) ? 0 : static_cast<std::size_t>(w.hi - w.lo);
    if (d_.size() != expected)
        throw std::invalid_argument("CochainComplex: wrong number of differentials");
    for (std::size_t k = 0; k < d_.size(); ++k) {
        int n = w.lo + static_cast<int>(k);
        if (d_[k].cols() != dim(n) || d_[k].rows() != dim(n + 1) || !(d_[k].modulus() == modulus()))
            throw std::invalid_argument("CochainComplex: differential d^" + std::to_string(n) + " has wrong shape");
        if (k > 0 && !(d_[k] * d_[k - 1]).is_zero())
            throw std::invalid_argument("CochainComplex: d^2 != 0 at degree " + std::to_string(n - 1));
    }
}

CochainComplex CochainComplex::single(Modulus mod, int degree, std::vector<Label> labels)
{
    return CochainComplex(GradedModule(mod, Window{degree, degree, false, false}, {std::move(labels)}), {});
}

bool CochainComplex::has_d(int n) const
{
    const Window& w = window();
    if (w.contains(n) && w.contains(n + 1))
        return true;
    bool zero_n = !w.contains(n) && w.known(n);
    bool zero_n1 = !w.contains(n + 1) && w.known(n + 1);
    return zero_n || zero_n1;
}

FpMatrix CochainComplex::d(int n) const
{
    const Window& w = window();
    if (w.contains(n) && w.contains(n + 1))
        return d_[n - w.lo];
    if (!has_d(n))
        throw WindowError("differential d^" + std::to_string(n) + " lies outside the known window");
    return FpMatrix(modulus(), dim(n + 1), dim(n));
}

la::SubquotientBasis CochainComplex::cohomology(int n) const { return cohomology(n, n).front(); }

std::vector<la::SubquotientBasis> CochainComplex::cohomology(int from, int to) const
{
    std::vector<FpMatrix> ds;
    for (int n = from - 1; n <= to; ++n)
        ds.push_back(d(n));
    return la::cohomology_sequence(ds);
}

// ---------------------------------------------------------------------------

FpMatrix ChainMap::at(int i) const
{
    auto it = components.find(i);
    if (it != components.end())
        return it->second;
    return FpMatrix(source->modulus(), target->dim(i + shift), source->dim(i));
}

ChainMap zero_map(ComplexPtr source, ComplexPtr target, int shift)
{
    ChainMap f{source, target, shift, {}};
    for (int i = source->lo(); i <= source->hi(); ++i)
        f.components.emplace(i, FpMatrix(source->modulus(), target->dim(i + shift), source->dim(i)));
    return f;
}

ChainMap identity_map(ComplexPtr c)
{
    ChainMap f{c, c, 0, {}};
    for (int i = c->lo(); i <= c->hi(); ++i)
        f.components.emplace(i, FpMatrix::identity(c->modulus(), c->dim(i)));
    return f;
}

ChainMap compose(const ChainMap& g, const ChainMap& f)
{
    ChainMap h{f.source, g.target, f.shift + g.shift, {}};
    for (int i = f.source->lo(); i <= f.source->hi(); ++i)
        h.components.emplace(i, g.at(i + f.shift) * f.at(i));
    return h;
}

ChainMap add(const ChainMap& f, const ChainMap& g)
{
    if (f.shift != g.shift)
        throw std::invalid_argument("ChainMap add: shifts differ");
    ChainMap h{f.source, f.target, f.shift, {}};
    for (int i = f.source->lo(); i <= f.source->hi(); ++i)
        h.components.emplace(i, f.at(i) + g.at(i));
    return h;
}

ChainMap scale(const ChainMap& f, Residue c)
{
    ChainMap h = f;
    for (auto& [i, m] : h.components)
        m = m.scaled(c);
    return h;
}

bool is_chain_map(const ChainMap& f)
{
    const auto& a = *f.source;
    const auto& b = *f.target;
    const int n = f.shift;
    auto known_f = [&](int i) {
        bool src_zero = !a.window().contains(i) && a.window().known(i);
        bool dst_zero = !b.window().contains(i + n) && b.window().known(i + n);
        return src_zero || dst_zero || (a.window().contains(i) && b.window().contains(i + n));
    };
    const Residue s = sign(a.modulus(), n + 1);
    for (int i = a.lo() - 1; i <= a.hi(); ++i) {
        if (!a.has_d(i) || !b.has_d(i + n) || !known_f(i) || !known_f(i + 1))
            continue;
        FpMatrix lhs = b.d(i + n) * f.at(i);
        FpMatrix rhs = f.at(i + 1) * a.d(i);
        if (!(lhs + rhs.scaled(s)).is_zero())
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

Window exact_pair_window(const Window& a, const Window& b)
{
    Window out;
    out.open_below = a.open_below || b.open_below;
    out.open_above = a.open_above || b.open_above;
    if (empty(a) || empty(b))
        return out;
    auto exact = [&](int n) {
        // i < a.lo with a unknown there: need every j = n - i > n - a.lo known zero.
        if (a.open_below && !(!b.open_above && n - a.lo + 1 > b.hi))
            return false;
        if (a.open_above && !(!b.open_below && n - a.hi - 1 < b.lo))
            return false;
        if (b.open_below && !(n - a.hi >= b.lo))
            return false;
        if (b.open_above && !(n - a.lo <= b.hi))
            return false;
        return true;
    };
    bool found = false;
    for (int n = a.lo + b.lo; n <= a.hi + b.hi; ++n) {
        if (!exact(n))
            continue;
        if (!found) {
            out.lo = n;
            found = true;
        }
        out.hi = n;
    }
    if (!found) {
        out.lo = 0;
        out.hi = -1;
    }
    return out;
}

namespace {

struct PairBlocks {
    int first_i;
    int last_i;
    std::vector<std::size_t> offsets;  // offsets[i - first_i]
};

PairBlocks pair_blocks(const CochainComplex& a, const CochainComplex& b, int n)
{
    PairBlocks p{std::max(a.lo(), n - b.hi()), std::min(a.hi(), n - b.lo()), {}};
    std::size_t off = 0;
    for (int i = p.first_i; i <= p.last_i; ++i) {
        p.offsets.push_back(off);
        off += a.dim(i) * b.dim(n - i);
    }
    p.offsets.push_back(off);
    return p;
}

}  // namespace

std::size_t tensor_index(const CochainComplex& a, const CochainComplex& b, int i, std::size_t ia, int j,
                         std::size_t ib)
{
    PairBlocks p = pair_blocks(a, b, i + j);
    if (i < p.first_i || i > p.last_i)
        throw std::out_of_range("tensor_index: pair outside window");
    return p.offsets[i - p.first_i] + ia * b.dim(j) + ib;
}

CochainComplex tensor(const CochainComplex& a, const CochainComplex& b)
{
    if (!(a.modulus() == b.modulus()))
        throw std::invalid_argument("tensor: coefficient moduli differ");
    const Modulus& mod = a.modulus();
    Window w = exact_pair_window(a.window(), b.window());
    std::vector<std::vector<Label>> labels;
    for (int n = w.lo; n <= w.hi; ++n) {
        std::vector<Label> ln;
        PairBlocks p = pair_blocks(a, b, n);
        for (int i = p.first_i; i <= p.last_i; ++i)
            for (const auto& la_ : a.labels(i))
                for (const auto& lb : b.labels(n - i))
                    ln.push_back("(" + la_ + "," + lb + ")");
        labels.push_back(std::move(ln));
    }
    GradedModule module(mod, w, std::move(labels));
    std::vector<FpMatrix> ds;
    for (int n = w.lo; n < w.hi; ++n) {
        PairBlocks src = pair_blocks(a, b, n);
        std::vector<la::Entry> e;
        for (int i = src.first_i; i <= src.last_i; ++i) {
            const int j = n - i;
            const bool da = a.window().contains(i + 1);
            const bool db = b.window().contains(j + 1);
            auto dac = da ? a.d(i).sparse_columns() : std::vector<la::SparseVector>{};
            auto dbc = db ? b.d(j).sparse_columns() : std::vector<la::SparseVector>{};
            const Residue s = sign(mod, i);
            for (std::size_t x = 0; x < a.dim(i); ++x)
                for (std::size_t y = 0; y < b.dim(j); ++y) {
                    std::size_t col = src.offsets[i - src.first_i] + x * b.dim(j) + y;
                    if (da)
                        for (auto [x2, v] : dac[x])
                            e.push_back({tensor_index(a, b, i + 1, x2, j, y), col, v});
                    if (db)
                        for (auto [y2, v] : dbc[y])
                            e.push_back({tensor_index(a, b, i, x, j + 1, y2), col, mod.mul(s, v)});
                }
        }
        ds.push_back(FpMatrix::from_triplets(mod, module.dim(n + 1), module.dim(n), std::move(e)));
    }
    return CochainComplex(std::move(module), std::move(ds));
}

// ---------------------------------------------------------------------------

namespace {

void require_closed(const CochainComplex& c, const char* what)
{
    if (c.window().open_below || c.window().open_above)
        throw WindowError(std::string(what) + ": requires a bounded complex (unbounded window requested)");
}

// Blocks of Hom^n(A,B): source degrees i with both A^i and B^{n+i} inside their windows.
PairBlocks hom_blocks(const CochainComplex& a, const CochainComplex& b, int n)
{
    PairBlocks p{std::max(a.lo(), b.lo() - n), std::min(a.hi(), b.hi() - n), {}};
    std::size_t off = 0;
    for (int i = p.first_i; i <= p.last_i; ++i) {
        p.offsets.push_back(off);
        off += a.dim(i) * b.dim(n + i);
    }
    p.offsets.push_back(off);
    return p;
}

std::size_t hom_index(const PairBlocks& p, const CochainComplex& b, int n, int i, std::size_t ia, std::size_t ib)
{
    return p.offsets[i - p.first_i] + ia * b.dim(n + i) + ib;
}

}  // namespace

CochainComplex hom_complex(const CochainComplex& a, const CochainComplex& b)
{
    require_closed(a, "hom_complex");
    require_closed(b, "hom_complex");
    if (!(a.modulus() == b.modulus()))
        throw std::invalid_argument("hom_complex: coefficient moduli differ");
    const Modulus& mod = a.modulus();
    Window w{b.lo() - a.hi(), b.hi() - a.lo(), false, false};
    if (empty(a.window()) || empty(b.window()))
        w = Window{0, -1, false, false};
    std::vector<std::vector<Label>> labels;
    for (int n = w.lo; n <= w.hi; ++n) {
        std::vector<Label> ln;
        PairBlocks p = hom_blocks(a, b, n);
        for (int i = p.first_i; i <= p.last_i; ++i)
            for (const auto& x : a.labels(i))
                for (const auto& y : b.labels(n + i))
                    ln.push_back("hom(" + std::to_string(i) + ":" + x + "," + y + ")");
        labels.push_back(std::move(ln));
    }
    GradedModule module(mod, w, std::move(labels));
    std::vector<FpMatrix> ds;
    for (int n = w.lo; n < w.hi; ++n) {
        PairBlocks src = hom_blocks(a, b, n);
        PairBlocks dst = hom_blocks(a, b, n + 1);
        const Residue s = sign(mod, n + 1);
        std::vector<la::Entry> e;
        for (int i = src.first_i; i <= src.last_i; ++i) {
            // d_B E(b,a): stays in source degree i.
            auto dbc = b.d(n + i).sparse_columns();
            // E(b,a) d_A^{i-1}: lands in block i-1, sending a' in A^{i-1} to d_A[a,a'] b.
            auto dar = a.d(i - 1).sparse_rows();
            for (std::size_t x = 0; x < a.dim(i); ++x)
                for (std::size_t y = 0; y < b.dim(n + i); ++y) {
                    std::size_t col = hom_index(src, b, n, i, x, y);
                    if (i >= dst.first_i && i <= dst.last_i)
                        for (auto [y2, v] : dbc[y])
                            e.push_back({hom_index(dst, b, n + 1, i, x, y2), col, v});
                    if (i - 1 >= dst.first_i && i - 1 <= dst.last_i)
                        for (auto [x2, v] : dar[x])
                            e.push_back({hom_index(dst, b, n + 1, i - 1, x2, y), col, mod.mul(s, v)});
                }
        }
        ds.push_back(FpMatrix::from_triplets(mod, module.dim(n + 1), module.dim(n), std::move(e)));
    }
    return CochainComplex(std::move(module), std::move(ds));
}

std::vector<Residue> hom_vector(const ChainMap& f, const CochainComplex& hom)
{
    const auto& a = *f.source;
    const auto& b = *f.target;
    const int n = f.shift;
    std::vector<Residue> v(hom.dim(n), 0);
    if (!hom.window().contains(n))
        return v;
    PairBlocks p = hom_blocks(a, b, n);
    for (int i = p.first_i; i <= p.last_i; ++i)
    {
        FpMatrix fi = f.at(i);
        for (const auto& e : fi.entries())
            v[hom_index(p, b, n, i, e.col, e.row)] = e.value;
    }
    return v;
}

ChainMap map_from_hom_vector(ComplexPtr source, ComplexPtr target, int shift, std::span<const Residue> v)
{
    ChainMap f = zero_map(source, target, shift);
    PairBlocks p = hom_blocks(*source, *target, shift);
    for (int i = p.first_i; i <= p.last_i; ++i) {
        std::vector<la::Entry> e;
        for (std::size_t x = 0; x < source->dim(i); ++x)
            for (std::size_t y = 0; y < target->dim(shift + i); ++y) {
                Residue c = v[hom_index(p, *target, shift, i, x, y)];
                if (c)
                    e.push_back({y, x, c});
            }
        f.components.insert_or_assign(
            i, FpMatrix::from_triplets(source->modulus(), target->dim(shift + i), source->dim(i), std::move(e)));
    }
    return f;
}

HomotopyResult null_homotopy(const ChainMap& f)
{
    const auto& a = *f.source;
    const auto& b = *f.target;
    for (const auto* c : {&a, &b})
        if (c->window().open_below || c->window().open_above)
            return {HomotopyStatus::WindowTooSmall, std::nullopt};
    CochainComplex hom = hom_complex(a, b);
    const int n = f.shift;
    auto target = hom_vector(f, hom);
    if (std::all_of(target.begin(), target.end(), [](Residue r) { return r == 0; }))
        return {HomotopyStatus::Found, zero_map(f.source, f.target, n - 1)};
    if (!hom.window().contains(n - 1))
        return {HomotopyStatus::None, std::nullopt};
    auto x = la::solve(hom.d(n - 1), target);
    if (!x)
        return {HomotopyStatus::None, std::nullopt};
    return {HomotopyStatus::Found, map_from_hom_vector(f.source, f.target, n - 1, *x)};
}

// ---------------------------------------------------------------------------

DoubleComplex::DoubleComplex(Modulus mod, Window iw, Window jw, std::vector<std::vector<std::vector<Label>>> labels,
                             std::map<std::pair<int, int>, FpMatrix> vertical,
                             std::map<std::pair<int, int>, FpMatrix> horizontal)
    : mod_(mod), iw_(iw), jw_(jw), labels_(std::move(labels)), dv_(std::move(vertical)), dh_(std::move(horizontal))
{
    std::size_t ni = empty(iw_) ? 0 : iw_.hi - iw_.lo + 1;
    std::size_t nj = empty(jw_) ? 0 : jw_.hi - jw_.lo + 1;
    if (labels_.size() != ni)
        throw std::invalid_argument("DoubleComplex: label table does not match window");
    for (const auto& col : labels_)
        if (col.size() != nj)
            throw std::invalid_argument("DoubleComplex: label table does not match window");
    auto check_shape = [&](const auto& table, int di, int dj, const char* what) {
        for (const auto& [key, m] : table) {
            auto [i, j] = key;
            if (!iw_.contains(i) || !jw_.contains(j) || !iw_.contains(i + di) || !jw_.contains(j + dj) ||
                m.cols() != dim(i, j) || m.rows() != dim(i + di, j + dj))
                throw std::invalid_argument(std::string("DoubleComplex: bad ") + what + " differential shape");
        }
    };
    check_shape(dv_, 0, 1, "vertical");
    check_shape(dh_, 1, 0, "horizontal");
    for (int i = iw_.lo; i <= iw_.hi; ++i)
        for (int j = jw_.lo; j <= jw_.hi; ++j) {
            if (!(dv(i, j + 1) * dv(i, j)).is_zero() || !(dh(i + 1, j) * dh(i, j)).is_zero())
                throw std::invalid_argument("DoubleComplex: a differential does not square to zero");
            if (!(dh(i, j + 1) * dv(i, j) == dv(i + 1, j) * dh(i, j)))
                throw std::invalid_argument("DoubleComplex: squares do not commute");
        }
}

std::size_t DoubleComplex::dim(int i, int j) const
{
    if (!iw_.contains(i) || !jw_.contains(j))
        return 0;
    return labels_[i - iw_.lo][j - jw_.lo].size();
}

const std::vector<Label>& DoubleComplex::labels(int i, int j) const
{
    static const std::vector<Label> none;
    if (!iw_.contains(i) || !jw_.contains(j))
        return none;
    return labels_[i - iw_.lo][j - jw_.lo];
}

FpMatrix DoubleComplex::dv(int i, int j) const
{
    auto it = dv_.find({i, j});
    return it != dv_.end() ? it->second : FpMatrix(mod_, dim(i, j + 1), dim(i, j));
}

FpMatrix DoubleComplex::dh(int i, int j) const
{
    auto it = dh_.find({i, j});
    return it != dh_.end() ? it->second : FpMatrix(mod_, dim(i + 1, j), dim(i, j));
}

CochainComplex totalize(const DoubleComplex& dc)
{
    const Window& iw = dc.i_window();
    const Window& jw = dc.j_window();
    if ((iw.open_below && jw.open_above) || (iw.open_above && jw.open_below))
        throw WindowError("totalize: infinite anti-diagonal");
    const Modulus& mod = dc.modulus();
    Window w = exact_pair_window(iw, jw);
    auto first_i = [&](int n) { return std::max(iw.lo, n - jw.hi); };
    auto last_i = [&](int n) { return std::min(iw.hi, n - jw.lo); };
    auto offset = [&](int n, int i) {
        std::size_t off = 0;
        for (int k = first_i(n); k < i; ++k)
            off += dc.dim(k, n - k);
        return off;
    };
    std::vector<std::vector<Label>> labels;
    for (int n = w.lo; n <= w.hi; ++n) {
        std::vector<Label> ln;
        for (int i = first_i(n); i <= last_i(n); ++i)
            for (const auto& l : dc.labels(i, n - i))
                ln.push_back("[" + std::to_string(i) + "]" + l);
        labels.push_back(std::move(ln));
    }
    GradedModule module(mod, w, std::move(labels));
    std::vector<FpMatrix> ds;
    for (int n = w.lo; n < w.hi; ++n) {
        std::vector<la::Entry> e;
        for (int i = first_i(n); i <= last_i(n); ++i) {
            const int j = n - i;
            const std::size_t src = offset(n, i);
            FpMatrix dv = dc.dv(i, j), dh = dc.dh(i, j);
            for (const auto& x : dv.entries())
                e.push_back({offset(n + 1, i) + x.row, src + x.col, x.value});
            const Residue s = sign(mod, n - i);
            if (iw.contains(i + 1))
                for (const auto& x : dh.entries())
                    e.push_back({offset(n + 1, i + 1) + x.row, src + x.col, mod.mul(s, x.value)});
        }
        ds.push_back(FpMatrix::from_triplets(mod, module.dim(n + 1), module.dim(n), std::move(e)));
    }
    return CochainComplex(std::move(module), std::move(ds));
}

CochainComplex shift(const CochainComplex& c, int k)
{
    Window w = c.window();
    w.lo -= k;
    w.hi -= k;
    std::vector<std::vector<Label>> labels;
    std::vector<FpMatrix> ds;
    for (int n = w.lo; n <= w.hi; ++n)
        labels.push_back(c.labels(n + k));
    for (int n = w.lo; n < w.hi; ++n)
        ds.push_back(c.d(n + k).scaled(sign(c.modulus(), k)));
    return CochainComplex(GradedModule(c.modulus(), w, std::move(labels)), std::move(ds));
}

}  // namespace steenrod::cx
