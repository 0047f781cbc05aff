#include "steenrod/simplicial.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace steenrod::simp {

namespace {

Residue sign(const Modulus& mod, int exponent) { return (exponent % 2 == 0) ? 1 : mod.neg(1); }

// Compact key for a simplex (gen_dim, gen, eta) used by unnormalized indexing.
struct RefKey {
    std::int64_t gen;
    std::uint64_t jumps;  // bit v set iff eta(v) != eta(v-1), v >= 1
    int gen_dim;
    friend bool operator==(const RefKey&, const RefKey&) = default;
};

struct RefKeyHash {
    std::size_t operator()(const RefKey& k) const
    {
        return std::hash<std::int64_t>()(k.gen) ^ (std::hash<std::uint64_t>()(k.jumps) * 31) ^ (k.gen_dim * 1000003);
    }
};

RefKey key_of(const SimplexRef& x)
{
    std::uint64_t jumps = 0;
    for (int v = 1; v <= x.dim; ++v)
        if (x.eta[v] != x.eta[v - 1])
            jumps |= std::uint64_t(1) << v;
    return {x.gen, jumps, x.gen_dim};
}

// eta : [n] -> [popcount(jumps)] with jumps at the given positions.
SimplexRef from_jumps(int n, int gen_dim, std::int64_t gen, std::uint64_t jumps)
{
    SimplexRef r;
    r.dim = n;
    r.gen_dim = gen_dim;
    r.gen = gen;
    int v = 0;
    r.eta[0] = 0;
    for (int k = 1; k <= n; ++k) {
        if (jumps & (std::uint64_t(1) << k))
            ++v;
        r.eta[k] = static_cast<std::uint8_t>(v);
    }
    return r;
}

// All subsets of {1..n} of size m, as bitmasks over bit positions 1..n.
std::vector<std::uint64_t> jump_sets(int n, int m)
{
    std::vector<std::uint64_t> out;
    if (m > n || m < 0)
        return out;
    std::vector<int> pos(m);
    for (int i = 0; i < m; ++i)
        pos[i] = i + 1;
    while (true) {
        std::uint64_t mask = 0;
        for (int p : pos)
            mask |= std::uint64_t(1) << p;
        out.push_back(mask);
        int i = m - 1;
        while (i >= 0 && pos[i] == n - (m - 1 - i))
            --i;
        if (i < 0)
            break;
        ++pos[i];
        for (int j = i + 1; j < m; ++j)
            pos[j] = pos[j - 1] + 1;
    }
    return out;
}

std::uint64_t jumps_of(const SimplexRef& x) { return key_of(x).jumps; }

// Complete sets have no generators above their bound, so every dimension is available.
bool within_skeleton(const SimplicialSet& x, int n) { return n <= x.bound() || (x.complete() && n <= kMaxDim); }

int top_generator_dim(const SimplicialSet& s)
{
    int t = 0;
    for (int n = 0; n <= s.bound(); ++n)
        if (s.count(n) > 0)
            t = n;
    return t;
}

}  // namespace

// ---------------------------------------------------------------------------

SimplexRef SimplexRef::nondegenerate(int dim, std::int64_t gen)
{
    if (dim < 0 || dim > kMaxDim)
        throw std::out_of_range("simplex dimension outside supported range");
    SimplexRef r;
    r.dim = dim;
    r.gen_dim = dim;
    r.gen = gen;
    for (int v = 0; v <= dim; ++v)
        r.eta[v] = static_cast<std::uint8_t>(v);
    return r;
}

std::vector<int> SimplexRef::degeneracy_word() const
{
    std::vector<int> w;
    for (int v = dim - 1; v >= 0; --v)
        if (eta[v] == eta[v + 1])
            w.push_back(v);
    return w;
}

bool operator==(const SimplexRef& a, const SimplexRef& b)
{
    if (a.dim != b.dim || a.gen_dim != b.gen_dim || a.gen != b.gen)
        return false;
    for (int v = 0; v <= a.dim; ++v)
        if (a.eta[v] != b.eta[v])
            return false;
    return true;
}

// ---------------------------------------------------------------------------

SimplicialSet::SimplicialSet(std::string name, int bound, std::vector<std::vector<std::string>> labels,
                             std::vector<std::vector<std::vector<SimplexRef>>> faces, bool complete)
    : name_(std::move(name)), bound_(bound), complete_(complete), labels_(std::move(labels)), faces_(std::move(faces))
{
    if (bound_ < 0 || bound_ > kMaxDim)
        throw std::invalid_argument("simplicial set: skeleton bound outside [0, 30]");
    if (static_cast<int>(labels_.size()) != bound_ + 1 || static_cast<int>(faces_.size()) != bound_ + 1)
        throw std::invalid_argument("simplicial set: tables do not match the skeleton bound");
    for (int n = 1; n <= bound_; ++n) {
        if (faces_[n].size() != labels_[n].size())
            throw std::invalid_argument("simplicial set: face table size mismatch in dimension " + std::to_string(n));
        for (const auto& fs : faces_[n]) {
            if (static_cast<int>(fs.size()) != n + 1)
                throw std::invalid_argument("simplicial set: wrong number of faces in dimension " + std::to_string(n));
            for (const auto& f : fs) {
                if (f.dim != n - 1 || f.gen_dim > f.dim || f.gen < 0 || f.gen >= count(f.gen_dim))
                    throw std::invalid_argument("simplicial set: face outside the stored skeleton");
                if (f.eta[0] != 0 || f.eta[f.dim] != f.gen_dim)
                    throw std::invalid_argument("simplicial set: malformed degeneracy data");
                for (int v = 1; v <= f.dim; ++v)
                    if (f.eta[v] != f.eta[v - 1] && f.eta[v] != f.eta[v - 1] + 1)
                        throw std::invalid_argument("simplicial set: malformed degeneracy data");
            }
        }
    }
    verify_identities();
}

std::string SimplicialSet::label(const SimplexRef& x) const
{
    std::string s;
    for (int j : x.degeneracy_word())
        s += "s" + std::to_string(j);
    return s + labels_[x.gen_dim][x.gen];
}

std::int64_t SimplicialSet::total_generators() const
{
    std::int64_t t = 0;
    for (int n = 0; n <= bound_; ++n)
        t += count(n);
    return t;
}

SimplexRef SimplicialSet::face(const SimplexRef& x, int i) const
{
    const int n = x.dim;
    if (n == 0 || i < 0 || i > n)
        throw std::out_of_range("face index out of range");
    const int v = x.eta[i];
    const bool shared = (i > 0 && x.eta[i - 1] == v) || (i < n && x.eta[i + 1] == v);
    SimplexRef r;
    r.dim = n - 1;
    if (shared) {
        r.gen_dim = x.gen_dim;
        r.gen = x.gen;
        for (int k = 0, t = 0; k <= n; ++k)
            if (k != i)
                r.eta[t++] = x.eta[k];
        return r;
    }
    const SimplexRef& base = faces_[x.gen_dim][x.gen][v];
    r.gen_dim = base.gen_dim;
    r.gen = base.gen;
    for (int k = 0, t = 0; k <= n; ++k) {
        if (k == i)
            continue;
        int e = x.eta[k] > v ? x.eta[k] - 1 : x.eta[k];
        r.eta[t++] = base.eta[e];
    }
    return r;
}

SimplexRef SimplicialSet::degeneracy(const SimplexRef& x, int j) const
{
    if (j < 0 || j > x.dim || x.dim + 1 > kMaxDim)
        throw std::out_of_range("degeneracy index out of range");
    SimplexRef r = x;
    r.dim = x.dim + 1;
    for (int k = 0, t = 0; k <= x.dim; ++k) {
        r.eta[t++] = x.eta[k];
        if (k == j)
            r.eta[t++] = x.eta[k];
    }
    return r;
}

SimplexRef SimplicialSet::vertex_face(const SimplexRef& x, std::uint32_t mask) const
{
    if (mask == 0 || (x.dim < 31 && (mask >> (x.dim + 1)) != 0))
        throw std::out_of_range("vertex_face: bad vertex mask");
    SimplexRef cur = x;
    for (int v = x.dim; v >= 0; --v)
        if (!(mask & (1u << v)))
            cur = face(cur, v);
    return cur;
}

std::int64_t SimplicialSet::nondegenerate_vertex_face(int n, std::int64_t g, std::uint32_t mask) const
{
    if (fast_vertex_face_)
        return fast_vertex_face_(n, g, mask);
    SimplexRef f = vertex_face(SimplexRef::nondegenerate(n, g), mask);
    return f.degenerate() ? -1 : f.gen;
}

std::vector<SimplexRef> SimplicialSet::all_simplices(int n) const
{
    std::vector<SimplexRef> out;
    for (int m = n; m >= 0; --m) {
        if (m > bound_)
            continue;
        auto sets = jump_sets(n, m);
        for (std::int64_t g = 0; g < count(m); ++g)
            for (auto j : sets)
                out.push_back(from_jumps(n, m, g, j));
    }
    return out;
}

void SimplicialSet::verify_identities() const
{
    for (int n = 2; n <= bound_; ++n)
        for (std::int64_t g = 0; g < count(n); ++g) {
            SimplexRef x = SimplexRef::nondegenerate(n, g);
            for (int j = 1; j <= n; ++j) {
                SimplexRef dj = face(x, j);
                for (int i = 0; i < j; ++i)
                    if (!(face(dj, i) == face(face(x, i), j - 1)))
                        throw std::invalid_argument("simplicial set " + name_ + ": d_i d_j != d_{j-1} d_i on " +
                                                    labels_[n][g]);
            }
        }
}

// ---------------------------------------------------------------------------

SimplicialSet standard_simplex(int n)
{
    if (n < 0 || n > 20)
        throw std::invalid_argument("standard_simplex: dimension outside [0, 20]");
    std::vector<std::vector<std::uint32_t>> subsets(n + 1);
    for (std::uint32_t mask = 1; mask < (1u << (n + 1)); ++mask)
        subsets[std::popcount(mask) - 1].push_back(mask);
    // Lexicographic order on vertex lists equals order on bit-reversed masks.
    for (auto& s : subsets)
        std::sort(s.begin(), s.end(), [n](std::uint32_t a, std::uint32_t b) {
            for (int v = 0; v <= n; ++v) {
                bool ia = a & (1u << v), ib = b & (1u << v);
                if (ia != ib)
                    return ia;
            }
            return false;
        });
    auto index = std::make_shared<std::vector<std::int64_t>>(std::size_t(1) << (n + 1), -1);
    std::vector<std::vector<std::string>> labels(n + 1);
    for (int k = 0; k <= n; ++k)
        for (std::size_t i = 0; i < subsets[k].size(); ++i) {
            std::uint32_t mask = subsets[k][i];
            (*index)[mask] = static_cast<std::int64_t>(i);
            std::string l = "[";
            for (int v = 0; v <= n; ++v)
                if (mask & (1u << v))
                    l += (l.size() > 1 ? "," : "") + std::to_string(v);
            labels[k].push_back(l + "]");
        }
    std::vector<std::vector<std::vector<SimplexRef>>> faces(n + 1);
    for (int k = 1; k <= n; ++k)
        for (std::uint32_t mask : subsets[k]) {
            std::vector<SimplexRef> fs;
            for (int v = 0, pos = 0; v <= n; ++v) {
                if (!(mask & (1u << v)))
                    continue;
                fs.push_back(SimplexRef::nondegenerate(k - 1, (*index)[mask & ~(1u << v)]));
                ++pos;
            }
            faces[k].push_back(fs);
        }
    SimplicialSet s("Delta^" + std::to_string(n), n, labels, faces, true);
    auto subs = std::make_shared<std::vector<std::vector<std::uint32_t>>>(subsets);
    s.fast_vertex_face_ = [index, subs, n](int k, std::int64_t g, std::uint32_t mask) -> std::int64_t {
        std::uint32_t gm = (*subs)[k][g];
        std::uint32_t out = 0;
        for (int v = 0, pos = 0; v <= n; ++v) {
            if (!(gm & (1u << v)))
                continue;
            if (mask & (1u << pos))
                out |= 1u << v;
            ++pos;
        }
        return (*index)[out];
    };
    return s;
}

// ---------------------------------------------------------------------------

namespace {

// A tuple of group elements (identities allowed) as a simplex of the bar construction.
SimplexRef bar_ref(const std::vector<int>& tuple, int k)
{
    const int n = static_cast<int>(tuple.size());
    SimplexRef r;
    r.dim = n;
    std::int64_t gen = 0;
    int m = 0;
    r.eta[0] = 0;
    for (int v = 1; v <= n; ++v) {
        int g = tuple[v - 1];
        if (g != 0) {
            gen = gen * k + (g - 1);
            ++m;
        }
        r.eta[v] = static_cast<std::uint8_t>(m);
    }
    r.gen_dim = m;
    r.gen = gen;
    return r;
}

std::vector<int> decode_tuple(std::int64_t gen, int n, int k)
{
    std::vector<int> t(n);
    for (int i = n - 1; i >= 0; --i) {
        t[i] = static_cast<int>(gen % k) + 1;
        gen /= k;
    }
    return t;
}

}  // namespace

SimplicialSet bar_construction(grp::GroupPtr g, int bound)
{
    if (bound < 0 || bound > kMaxDim)
        throw std::invalid_argument("bar_construction: skeleton bound outside [0, 30]");
    const int k = g->order() - 1;
    std::vector<std::vector<std::string>> labels(bound + 1);
    std::vector<std::vector<std::vector<SimplexRef>>> faces(bound + 1);
    labels[0].push_back("[]");
    std::int64_t count = 1;
    for (int n = 1; n <= bound; ++n) {
        count *= k;
        if (count > (std::int64_t(1) << 28))
            throw std::length_error("bar_construction: skeleton too large");
        labels[n].reserve(count);
        faces[n].reserve(count);
        for (std::int64_t gen = 0; gen < count; ++gen) {
            auto t = decode_tuple(gen, n, k);
            std::string l = "[";
            for (int i = 0; i < n; ++i)
                l += (i ? "|" : "") + g->element_name(t[i]);
            labels[n].push_back(l + "]");
            std::vector<SimplexRef> fs;
            for (int i = 0; i <= n; ++i) {
                std::vector<int> f;
                for (int j = 0; j < n; ++j) {
                    if ((i == 0 && j == 0) || (i == n && j == n - 1))
                        continue;
                    if (j == i - 1 && i < n) {
                        f.push_back(g->mul(t[j], t[j + 1]));
                        ++j;
                        continue;
                    }
                    f.push_back(t[j]);
                }
                fs.push_back(bar_ref(f, k));
            }
            faces[n].push_back(std::move(fs));
        }
    }
    SimplicialSet s("B" + g->name(), bound, std::move(labels), std::move(faces), k == 0);
    s.group_ = g;
    s.fast_vertex_face_ = [g, k](int n, std::int64_t gen, std::uint32_t mask) -> std::int64_t {
        std::array<int, kMaxDim + 1> prefix{};
        prefix[0] = 0;
        std::int64_t rest = gen;
        std::array<int, kMaxDim> t{};
        for (int i = n - 1; i >= 0; --i) {
            t[i] = static_cast<int>(rest % k) + 1;
            rest /= k;
        }
        for (int i = 1; i <= n; ++i)
            prefix[i] = g->mul(prefix[i - 1], t[i - 1]);
        std::int64_t out = 0;
        int prev = -1;
        for (int v = 0; v <= n; ++v) {
            if (!(mask & (1u << v)))
                continue;
            if (prev >= 0) {
                int h = g->mul(g->inverse(prefix[prev]), prefix[v]);
                if (h == 0)
                    return -1;
                out = out * k + (h - 1);
            }
            prev = v;
        }
        return out;
    };
    return s;
}

std::vector<int> bar_tuple(const SimplicialSet& bar, int n, std::int64_t gen)
{
    if (!bar.group())
        throw std::invalid_argument("bar_tuple: not a bar construction");
    return decode_tuple(gen, n, bar.group()->order() - 1);
}

std::int64_t bar_index(const SimplicialSet& bar, const std::vector<int>& tuple)
{
    if (!bar.group())
        throw std::invalid_argument("bar_index: not a bar construction");
    SimplexRef r = bar_ref(tuple, bar.group()->order() - 1);
    return r.degenerate() ? -1 : r.gen;
}

// ---------------------------------------------------------------------------

SimplicialSet product(const SimplicialSet& x, const SimplicialSet& y)
{
    int bound = std::min(x.complete() ? kMaxDim : x.bound(), y.complete() ? kMaxDim : y.bound());
    const bool complete = x.complete() && y.complete();
    if (complete)
        bound = std::min(kMaxDim, top_generator_dim(x) + top_generator_dim(y));
    using Key = std::array<std::int64_t, 6>;  // m1, g1, jumps1, m2, g2, jumps2
    std::vector<std::map<Key, std::int64_t>> index(bound + 1);
    std::vector<std::vector<Key>> gens(bound + 1);
    std::vector<std::vector<std::string>> labels(bound + 1);
    std::vector<std::vector<std::vector<SimplexRef>>> faces(bound + 1);

    auto eta_string = [](const SimplexRef& r) {
        std::string s;
        for (int v = 0; v <= r.dim; ++v)
            s += std::to_string(r.eta[v]) + (v < r.dim ? "." : "");
        return s;
    };
    auto lookup = [&](const SimplexRef& a, const SimplexRef& b) {
        // Jointly reduce: collapse positions where both sides are degenerate.
        const int n = a.dim;
        std::uint64_t ja = jumps_of(a), jb = jumps_of(b), j = ja | jb;
        int k = std::popcount(j);
        // Position of each joint jump among the joint jumps.
        std::uint64_t ra = 0, rb = 0;
        for (int v = 1, pos = 0; v <= n; ++v) {
            if (!(j & (std::uint64_t(1) << v)))
                continue;
            ++pos;
            if (ja & (std::uint64_t(1) << v))
                ra |= std::uint64_t(1) << pos;
            if (jb & (std::uint64_t(1) << v))
                rb |= std::uint64_t(1) << pos;
        }
        Key key{a.gen_dim, a.gen, std::int64_t(ra), b.gen_dim, b.gen, std::int64_t(rb)};
        auto it = index[k].find(key);
        if (it == index[k].end())
            throw std::logic_error("product: face outside enumerated skeleton");
        return from_jumps(n, k, it->second, j);
    };

    for (int n = 0; n <= bound; ++n) {
        for (int m1 = 0; m1 <= n; ++m1)
            for (int m2 = n - m1; m2 <= n; ++m2) {
                auto s1 = jump_sets(n, m1);
                auto s2 = jump_sets(n, m2);
                for (std::int64_t g1 = 0; g1 < x.count(m1); ++g1)
                    for (std::int64_t g2 = 0; g2 < y.count(m2); ++g2)
                        for (auto j1 : s1)
                            for (auto j2 : s2) {
                                if (std::popcount(j1 | j2) != n)
                                    continue;
                                Key key{m1, g1, std::int64_t(j1), m2, g2, std::int64_t(j2)};
                                index[n].emplace(key, static_cast<std::int64_t>(gens[n].size()));
                                gens[n].push_back(key);
                                SimplexRef a = from_jumps(n, m1, g1, j1), b = from_jumps(n, m2, g2, j2);
                                labels[n].push_back("(" + x.label(m1, g1) + "@" + eta_string(a) + "," +
                                                    y.label(m2, g2) + "@" + eta_string(b) + ")");
                            }
            }
        if (n == 0)
            continue;
        for (const auto& key : gens[n]) {
            SimplexRef a = from_jumps(n, int(key[0]), key[1], std::uint64_t(key[2]));
            SimplexRef b = from_jumps(n, int(key[3]), key[4], std::uint64_t(key[5]));
            std::vector<SimplexRef> fs;
            for (int i = 0; i <= n; ++i)
                fs.push_back(lookup(x.face(a, i), y.face(b, i)));
            faces[n].push_back(std::move(fs));
        }
    }
    return SimplicialSet(x.name() + "x" + y.name(), bound, std::move(labels), std::move(faces), complete);
}

// ---------------------------------------------------------------------------

SimplexRef SimplicialMap::operator()(const SimplexRef& x) const
{
    SimplexRef y = on_generator(x.gen_dim, x.gen);
    SimplexRef r;
    r.dim = x.dim;
    r.gen_dim = y.gen_dim;
    r.gen = y.gen;
    for (int v = 0; v <= x.dim; ++v)
        r.eta[v] = y.eta[x.eta[v]];
    return r;
}

SimplicialMap induced_map(const grp::GroupHomomorphism& f, const SimplicialSet& bar_g, const SimplicialSet& bar_h)
{
    if (!bar_g.group() || !bar_h.group())
        throw std::invalid_argument("induced_map: arguments must be bar constructions");
    auto checked = grp::make_homomorphism(bar_g.group(), bar_h.group(), f.images);
    const int kg = bar_g.group()->order() - 1;
    const int kh = bar_h.group()->order() - 1;
    SimplicialMap m;
    m.source = &bar_g;
    m.target = &bar_h;
    m.on_generator = [checked, kg, kh](int n, std::int64_t gen) {
        auto t = decode_tuple(gen, n, kg);
        for (auto& e : t)
            e = checked(e);
        return bar_ref(t, kh);
    };
    return m;
}

// ---------------------------------------------------------------------------

namespace {

struct UnnormalizedIndex {
    std::vector<std::vector<SimplexRef>> simplices;
    std::vector<std::unordered_map<RefKey, std::size_t, RefKeyHash>> index;

    UnnormalizedIndex(const SimplicialSet& x, int top)
    {
        for (int n = 0; n <= top; ++n) {
            simplices.push_back(x.all_simplices(n));
            index.emplace_back();
            for (std::size_t i = 0; i < simplices.back().size(); ++i)
                index.back().emplace(key_of(simplices.back()[i]), i);
        }
    }
    std::size_t at(const SimplexRef& r) const { return index[r.dim].at(key_of(r)); }
};

// Boundary matrix C_n -> C_{n-1} on nondegenerate or all simplices.
FpMatrix boundary(const SimplicialSet& x, const Modulus& m, bool normalized, int n, const UnnormalizedIndex* un)
{
    std::vector<la::Entry> e;
    if (normalized) {
        for (std::int64_t g = 0; g < x.count(n); ++g) {
            SimplexRef s = SimplexRef::nondegenerate(n, g);
            for (int i = 0; i <= n; ++i) {
                SimplexRef f = x.face(s, i);
                if (!f.degenerate())
                    e.push_back({std::size_t(f.gen), std::size_t(g), sign(m, i)});
            }
        }
        return FpMatrix::from_triplets(m, x.count(n - 1), x.count(n), std::move(e));
    }
    const auto& src = un->simplices[n];
    for (std::size_t c = 0; c < src.size(); ++c)
        for (int i = 0; i <= n; ++i)
            e.push_back({un->at(x.face(src[c], i)), c, sign(m, i)});
    return FpMatrix::from_triplets(m, un->simplices[n - 1].size(), src.size(), std::move(e));
}

bool normalized_closed_above(const SimplicialSet& x, int top)
{
    if (!x.complete())
        return false;
    for (int n = top + 1; n <= x.bound(); ++n)
        if (x.count(n) > 0)
            return false;
    return true;
}

}  // namespace

cx::CochainComplex chains(const SimplicialSet& x, Modulus m, bool normalized, int top_dim)
{
    if (top_dim < 0 || !within_skeleton(x, top_dim))
        throw cx::WindowError("chains: window exceeds the skeleton of " + x.name());
    std::unique_ptr<UnnormalizedIndex> un;
    if (!normalized)
        un = std::make_unique<UnnormalizedIndex>(x, top_dim);
    std::vector<std::vector<cx::Label>> labels;
    for (int n = top_dim; n >= 0; --n) {
        std::vector<cx::Label> l;
        if (normalized) {
            for (std::int64_t g = 0; g < x.count(n); ++g)
                l.push_back(x.label(n, g));
        } else {
            for (const auto& s : un->simplices[n])
                l.push_back(x.label(s));
        }
        labels.push_back(std::move(l));
    }
    std::vector<FpMatrix> ds;
    for (int n = top_dim; n >= 1; --n)
        ds.push_back(boundary(x, m, normalized, n, un.get()));
    bool closed = normalized && normalized_closed_above(x, top_dim);
    cx::Window w{-top_dim, 0, !closed, false};
    return cx::CochainComplex(cx::GradedModule(m, w, std::move(labels)), std::move(ds));
}

cx::CochainComplex cochains(const SimplicialSet& x, Modulus m, bool normalized, int top_degree)
{
    if (top_degree < 0 || !within_skeleton(x, top_degree))
        throw cx::WindowError("cochains: window exceeds the skeleton of " + x.name());
    std::unique_ptr<UnnormalizedIndex> un;
    if (!normalized)
        un = std::make_unique<UnnormalizedIndex>(x, top_degree);
    std::vector<std::vector<cx::Label>> labels;
    for (int n = 0; n <= top_degree; ++n) {
        std::vector<cx::Label> l;
        if (normalized) {
            for (std::int64_t g = 0; g < x.count(n); ++g)
                l.push_back(x.label(n, g));
        } else {
            for (const auto& s : un->simplices[n])
                l.push_back(x.label(s));
        }
        labels.push_back(std::move(l));
    }
    std::vector<FpMatrix> ds;
    for (int n = 0; n < top_degree; ++n)
        ds.push_back(boundary(x, m, normalized, n + 1, un.get()).transposed());
    bool closed = normalized && normalized_closed_above(x, top_degree);
    cx::Window w{0, top_degree, false, !closed};
    return cx::CochainComplex(cx::GradedModule(m, w, std::move(labels)), std::move(ds));
}

cx::ChainMap cochain_map(const SimplicialMap& f, cx::ComplexPtr source_cochains, cx::ComplexPtr target_cochains)
{
    // source_cochains are cochains on f.target, target_cochains on f.source: f^* goes backwards.
    cx::ChainMap out{source_cochains, target_cochains, 0, {}};
    const Modulus& m = source_cochains->modulus();
    for (int n = source_cochains->lo(); n <= source_cochains->hi(); ++n) {
        std::vector<la::Entry> e;
        for (std::int64_t g = 0; g < f.source->count(n); ++g) {
            SimplexRef y = f(SimplexRef::nondegenerate(n, g));
            if (!y.degenerate())
                e.push_back({std::size_t(g), std::size_t(y.gen), 1});
        }
        out.components.emplace(n, FpMatrix::from_triplets(m, target_cochains->dim(n), source_cochains->dim(n), e));
    }
    return out;
}

// ---------------------------------------------------------------------------

DoldKanSplit dold_kan_split(const SimplicialSet& x, Modulus m, int top_dim)
{
    auto normalized = std::make_shared<const cx::CochainComplex>(chains(x, m, true, top_dim));
    auto unnormalized = std::make_shared<const cx::CochainComplex>(chains(x, m, false, top_dim));
    UnnormalizedIndex un(x, top_dim);

    cx::ChainMap projection{unnormalized, normalized, 0, {}};
    cx::ChainMap inclusion{normalized, unnormalized, 0, {}};
    for (int n = 0; n <= top_dim; ++n) {
        const auto& all = un.simplices[n];
        std::vector<la::Entry> pe;
        for (std::size_t c = 0; c < all.size(); ++c)
            if (!all[c].degenerate())
                pe.push_back({std::size_t(all[c].gen), c, 1});
        projection.components.emplace(-n, FpMatrix::from_triplets(m, x.count(n), all.size(), pe));

        // Moore projector P = (1 - s_0 d_1)(1 - s_1 d_2) ... (1 - s_{n-1} d_n), applied to each
        // nondegenerate generator; its image lies in the intersection of ker d_i for i >= 1.
        std::vector<la::Entry> ie;
        for (std::int64_t g = 0; g < x.count(n); ++g) {
            std::map<std::size_t, Residue> v{{un.at(SimplexRef::nondegenerate(n, g)), 1}};
            for (int j = n - 1; j >= 0; --j) {
                std::map<std::size_t, Residue> next = v;
                for (auto [idx, c] : v) {
                    SimplexRef t = x.degeneracy(x.face(all[idx], j + 1), j);
                    std::size_t k = un.at(t);
                    next[k] = m.sub(next[k], c);
                }
                v.clear();
                for (auto [idx, c] : next)
                    if (c)
                        v.emplace(idx, c);
            }
            for (auto [idx, c] : v)
                ie.push_back({idx, std::size_t(g), c});
        }
        inclusion.components.emplace(-n, FpMatrix::from_triplets(m, all.size(), x.count(n), ie));
    }

    // Homotopy s with id - i p = d s + s d in degrees [-top_dim + 1, 0]: one linear system in the
    // Hom complex of the closed truncation, ignoring the equation in the bottom degree.
    cx::Window closed = unnormalized->window();
    closed.open_below = false;
    std::vector<std::vector<cx::Label>> labels;
    std::vector<FpMatrix> ds;
    for (int n = -top_dim; n <= 0; ++n)
        labels.push_back(unnormalized->labels(n));
    for (int n = -top_dim; n < 0; ++n)
        ds.push_back(unnormalized->d(n));
    auto trunc = std::make_shared<const cx::CochainComplex>(cx::GradedModule(m, closed, labels), ds);
    cx::CochainComplex hom = cx::hom_complex(*trunc, *trunc);
    cx::ChainMap phi = cx::add(cx::identity_map(trunc), cx::scale(cx::compose(inclusion, projection), m.neg(1)));
    phi.source = trunc;
    phi.target = trunc;
    auto rhs = cx::hom_vector(phi, hom);
    const std::size_t skip = trunc->dim(-top_dim) * trunc->dim(-top_dim);
    FpMatrix d = hom.d(-1);
    std::vector<la::Entry> kept;
    for (const auto& e : d.entries())
        if (e.row >= skip)
            kept.push_back({e.row - skip, e.col, e.value});
    FpMatrix reduced = FpMatrix::from_triplets(m, d.rows() - skip, d.cols(), kept);
    std::vector<Residue> b(rhs.begin() + skip, rhs.end());
    auto s = la::solve(reduced, b);
    if (!s)
        throw std::logic_error("dold_kan_split: degenerate part is not contractible in the window");
    cx::ChainMap homotopy = cx::map_from_hom_vector(trunc, trunc, -1, *s);
    homotopy.source = unnormalized;
    homotopy.target = unnormalized;
    return {normalized, unnormalized, inclusion, projection, homotopy, -top_dim + 1};
}

// ---------------------------------------------------------------------------

cx::ChainMap aw_diagonal(const SimplicialSet& x, Modulus m, int top_dim)
{
    auto c = std::make_shared<const cx::CochainComplex>(chains(x, m, true, top_dim));
    auto t = std::make_shared<const cx::CochainComplex>(cx::tensor(*c, *c));
    cx::ChainMap f{c, t, 0, {}};
    for (int n = 0; n <= top_dim; ++n) {
        if (!t->window().contains(-n))
            continue;
        std::vector<la::Entry> e;
        for (std::int64_t g = 0; g < x.count(n); ++g)
            for (int i = 0; i <= n; ++i) {
                std::uint32_t front = (1u << (i + 1)) - 1;
                std::uint32_t back = ((1u << (n + 1)) - 1) & ~((1u << i) - 1);
                std::int64_t a = x.nondegenerate_vertex_face(n, g, front);
                std::int64_t b = x.nondegenerate_vertex_face(n, g, back);
                if (a < 0 || b < 0)
                    continue;
                e.push_back({cx::tensor_index(*c, *c, -i, std::size_t(a), -(n - i), std::size_t(b)), std::size_t(g), 1});
            }
        f.components.emplace(-n, FpMatrix::from_triplets(m, t->dim(-n), c->dim(-n), e));
    }
    return f;
}

std::vector<Residue> cup(const SimplicialSet& x, const Modulus& m, int p, std::span<const Residue> a, int q,
                         std::span<const Residue> b)
{
    const int n = p + q;
    if (!within_skeleton(x, n))
        throw cx::WindowError("cup: degree exceeds skeleton");
    std::vector<Residue> out(x.count(n), 0);
    const std::uint32_t front = (1u << (p + 1)) - 1;
    const std::uint32_t back = ((1u << (n + 1)) - 1) & ~((1u << p) - 1);
    for (std::int64_t g = 0; g < x.count(n); ++g) {
        std::int64_t fa = x.nondegenerate_vertex_face(n, g, front);
        if (fa < 0 || a[fa] == 0)
            continue;
        std::int64_t fb = x.nondegenerate_vertex_face(n, g, back);
        if (fb < 0)
            continue;
        out[g] = m.mul(a[fa], b[fb]);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

FpMatrix kron_identity(const Modulus& m, const FpMatrix& sel, std::size_t k)
{
    // sel (x) id_k, where sel is a 0/1 selection matrix.
    std::vector<la::Entry> e;
    for (const auto& x : sel.entries())
        for (std::size_t i = 0; i < k; ++i)
            e.push_back({x.row * k + i, x.col * k + i, x.value});
    return FpMatrix::from_triplets(m, sel.rows() * k, sel.cols() * k, e);
}

}  // namespace

CosimplicialComplex constant_cosimplicial(const SimplicialSet& x, const cx::CochainComplex& k, int top_level)
{
    if (top_level < 0 || !within_skeleton(x, top_level + 1))
        throw cx::WindowError("constant_cosimplicial: levels exceed the skeleton");
    const Modulus& m = k.modulus();
    UnnormalizedIndex un(x, top_level + 1);
    CosimplicialComplex out;
    for (int r = 0; r <= top_level; ++r) {
        const auto& simplices = un.simplices[r];
        std::vector<std::vector<cx::Label>> labels;
        std::vector<FpMatrix> ds;
        for (int j = k.lo(); j <= k.hi(); ++j) {
            std::vector<cx::Label> l;
            for (const auto& s : simplices)
                for (const auto& kl : k.labels(j))
                    l.push_back(x.label(s) + ":" + kl);
            labels.push_back(std::move(l));
        }
        for (int j = k.lo(); j < k.hi(); ++j) {
            // Block-diagonal copy of d_K, one block per simplex.
            std::vector<la::Entry> e;
            FpMatrix dk = k.d(j);
            for (std::size_t s = 0; s < simplices.size(); ++s)
                for (const auto& x2 : dk.entries())
                    e.push_back({s * k.dim(j + 1) + x2.row, s * k.dim(j) + x2.col, x2.value});
            ds.push_back(FpMatrix::from_triplets(m, simplices.size() * k.dim(j + 1), simplices.size() * k.dim(j), e));
        }
        out.levels.push_back(
            std::make_shared<const cx::CochainComplex>(cx::GradedModule(m, k.window(), labels), ds));
    }
    for (int r = 0; r < top_level; ++r) {
        out.cofaces.emplace_back();
        out.codegeneracies.emplace_back();
        for (int i = 0; i <= r + 1; ++i) {
            // (delta^i f)(tau) = f(d_i tau) for tau in X_{r+1}.
            std::vector<la::Entry> sel;
            for (std::size_t t = 0; t < un.simplices[r + 1].size(); ++t)
                sel.push_back({t, un.at(x.face(un.simplices[r + 1][t], i)), 1});
            FpMatrix s = FpMatrix::from_triplets(m, un.simplices[r + 1].size(), un.simplices[r].size(), sel);
            cx::ChainMap f{out.levels[r], out.levels[r + 1], 0, {}};
            for (int j = k.lo(); j <= k.hi(); ++j)
                f.components.emplace(j, kron_identity(m, s, k.dim(j)));
            out.cofaces[r].push_back(std::move(f));
        }
        for (int i = 0; i <= r; ++i) {
            // (sigma^i f)(tau) = f(s_i tau) for tau in X_r.
            std::vector<la::Entry> sel;
            for (std::size_t t = 0; t < un.simplices[r].size(); ++t)
                sel.push_back({t, un.at(x.degeneracy(un.simplices[r][t], i)), 1});
            FpMatrix s = FpMatrix::from_triplets(m, un.simplices[r].size(), un.simplices[r + 1].size(), sel);
            cx::ChainMap f{out.levels[r + 1], out.levels[r], 0, {}};
            for (int j = k.lo(); j <= k.hi(); ++j)
                f.components.emplace(j, kron_identity(m, s, k.dim(j)));
            out.codegeneracies[r].push_back(std::move(f));
        }
    }
    return out;
}

bool CosimplicialComplex::identities_hold() const
{
    auto eq = [](const cx::ChainMap& a, const cx::ChainMap& b) {
        for (int j = a.source->lo(); j <= a.source->hi(); ++j)
            if (!(a.at(j) == b.at(j)))
                return false;
        return true;
    };
    for (const auto& level : cofaces)
        for (const auto& f : level)
            if (!cx::is_chain_map(f))
                return false;
    for (const auto& level : codegeneracies)
        for (const auto& f : level)
            if (!cx::is_chain_map(f))
                return false;
    const int top = static_cast<int>(cofaces.size());
    // delta^j delta^i = delta^i delta^{j-1} for i < j.
    for (int r = 0; r + 1 < top; ++r)
        for (int j = 1; j <= r + 2; ++j)
            for (int i = 0; i < j; ++i)
                if (!eq(cx::compose(cofaces[r + 1][j], cofaces[r][i]), cx::compose(cofaces[r + 1][i], cofaces[r][j - 1])))
                    return false;
    // sigma^j sigma^i = sigma^i sigma^{j+1} for i <= j, maps C^{r+2} -> C^r.
    for (int r = 0; r + 1 < top; ++r)
        for (int j = 0; j <= r; ++j)
            for (int i = 0; i <= j; ++i)
                if (!eq(cx::compose(codegeneracies[r][j], codegeneracies[r + 1][i]),
                        cx::compose(codegeneracies[r][i], codegeneracies[r + 1][j + 1])))
                    return false;
    // Mixed identities, maps C^r -> C^r through C^{r+1}... evaluated as sigma^j delta^i on C^{r+1}.
    for (int r = 0; r + 1 < top; ++r) {
        // delta^i : C^{r+1} -> C^{r+2}; sigma^j : C^{r+2} -> C^{r+1}.
        for (int j = 0; j <= r + 1; ++j)
            for (int i = 0; i <= r + 2; ++i) {
                cx::ChainMap lhs = cx::compose(codegeneracies[r + 1][j], cofaces[r + 1][i]);
                if (i == j || i == j + 1) {
                    if (!eq(lhs, cx::identity_map(cofaces[r + 1][i].source)))
                        return false;
                } else if (i < j) {
                    if (!eq(lhs, cx::compose(cofaces[r][i], codegeneracies[r][j - 1])))
                        return false;
                } else {
                    if (!eq(lhs, cx::compose(cofaces[r][i - 1], codegeneracies[r][j])))
                        return false;
                }
            }
    }
    return true;
}

cx::DoubleComplex CosimplicialComplex::double_complex() const
{
    const auto& first = *levels.front();
    const Modulus& m = first.modulus();
    const int top = static_cast<int>(levels.size()) - 1;
    std::vector<std::vector<std::vector<cx::Label>>> labels;
    std::map<std::pair<int, int>, FpMatrix> dv, dh;
    for (int r = 0; r <= top; ++r) {
        labels.emplace_back();
        for (int j = first.lo(); j <= first.hi(); ++j) {
            labels.back().push_back(levels[r]->labels(j));
            if (j < first.hi())
                dv.emplace(std::make_pair(r, j), levels[r]->d(j));
            if (r < top) {
                FpMatrix h(m, levels[r + 1]->dim(j), levels[r]->dim(j));
                for (std::size_t i = 0; i < cofaces[r].size(); ++i)
                    h = h + cofaces[r][i].at(j).scaled(sign(m, static_cast<int>(i)));
                dh.emplace(std::make_pair(r, j), h);
            }
        }
    }
    cx::Window iw{0, top, false, true};
    return cx::DoubleComplex(m, iw, first.window(), labels, dv, dh);
}

}  // namespace steenrod::simp
