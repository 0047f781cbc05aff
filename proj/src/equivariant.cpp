#include "steenrod/equivariant.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace steenrod::eq {

namespace {

Residue sign(const Modulus& m, int e) { return (e % 2 == 0) ? 1 : m.neg(1); }

void check_arity(int p)
{
    if (p < 2 || p > kMaxArity || !la::is_prime(static_cast<std::uint64_t>(p)))
        throw std::invalid_argument("cyclic group order must be a prime in [2, " + std::to_string(kMaxArity) + "]");
}

struct FaceTupleHash {
    std::size_t operator()(const FaceTuple& f) const
    {
        std::uint64_t h = 1469598103934665603ull;
        for (auto v : f)
            h = (h ^ v) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

class Accumulator {
public:
    explicit Accumulator(const Modulus& m) : m_(m) {}
    void add(const FaceTuple& f, Residue c)
    {
        if (c == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(f, c);
        if (!inserted)
            it->second = m_.add(it->second, c);
    }
    TensorChain finish()
    {
        TensorChain out;
        out.reserve(terms_.size());
        for (const auto& [f, c] : terms_)
            if (c)
                out.push_back({f, c});
        std::sort(out.begin(), out.end(), [](const TensorTerm& a, const TensorTerm& b) { return a.faces < b.faces; });
        return out;
    }

private:
    const Modulus& m_;
    std::unordered_map<FaceTuple, Residue, FaceTupleHash> terms_;
};

// Inserts a zero bit at position k, shifting higher bits up.
std::uint32_t insert_zero_bit(std::uint32_t mask, int k)
{
    std::uint32_t low = mask & ((1u << k) - 1);
    return low | ((mask >> k) << (k + 1));
}

}  // namespace

// ---------------------------------------------------------------------------

CyclicGroupRing::CyclicGroupRing(int p, Modulus m) : p_(p), m_(m) { check_arity(p); }

std::vector<Residue> CyclicGroupRing::one() const { return alpha_power(0); }

std::vector<Residue> CyclicGroupRing::alpha_power(int j) const
{
    std::vector<Residue> r(p_, 0);
    r[((j % p_) + p_) % p_] = 1;
    return r;
}

std::vector<Residue> CyclicGroupRing::norm() const { return std::vector<Residue>(p_, 1); }

std::vector<Residue> CyclicGroupRing::t() const
{
    auto r = alpha_power(1);
    r[0] = m_.sub(r[0], 1);
    return r;
}

std::vector<Residue> CyclicGroupRing::mul(const std::vector<Residue>& a, const std::vector<Residue>& b) const
{
    std::vector<Residue> r(p_, 0);
    for (int i = 0; i < p_; ++i)
        for (int j = 0; j < p_; ++j)
            r[(i + j) % p_] = m_.add(r[(i + j) % p_], m_.mul(a[i], b[j]));
    return r;
}

std::vector<Residue> CyclicGroupRing::add(const std::vector<Residue>& a, const std::vector<Residue>& b) const
{
    std::vector<Residue> r(p_);
    for (int i = 0; i < p_; ++i)
        r[i] = m_.add(a[i], b[i]);
    return r;
}

bool CyclicGroupRing::is_zero(const std::vector<Residue>& a) const
{
    return std::all_of(a.begin(), a.end(), [](Residue v) { return v == 0; });
}

// ---------------------------------------------------------------------------

WResolution w_resolution(int p, Modulus m, int top)
{
    check_arity(p);
    if (top < 0)
        throw std::invalid_argument("w_resolution: top degree must be non-negative");
    if (m.prime() != static_cast<std::uint32_t>(p))
        throw std::invalid_argument("w_resolution: coefficients must have characteristic p");
    return {p, m, top};
}

std::vector<Residue> WResolution::boundary(int i) const
{
    CyclicGroupRing r(p, mod);
    if (i < 1 || i > top)
        throw std::out_of_range("W boundary index out of range");
    return (i % 2 == 1) ? r.t() : r.norm();
}

FpMatrix WResolution::alpha(int) const
{
    std::vector<la::Entry> e;
    for (int j = 0; j < p; ++j)
        e.push_back({std::size_t((j + 1) % p), std::size_t(j), 1});
    return FpMatrix::from_triplets(mod, p, p, e);
}

std::vector<Residue> WResolution::augmentation() const { return std::vector<Residue>(p, 1); }

cx::CochainComplex WResolution::complex() const
{
    std::vector<std::vector<cx::Label>> labels;
    for (int i = top; i >= 0; --i) {
        std::vector<cx::Label> l;
        for (int j = 0; j < p; ++j)
            l.push_back("a^" + std::to_string(j) + " e_" + std::to_string(i));
        labels.push_back(l);
    }
    std::vector<FpMatrix> ds;
    for (int i = top; i >= 1; --i) {
        auto r = boundary(i);
        std::vector<la::Entry> e;
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k)
                if (r[k])
                    e.push_back({std::size_t((j + k) % p), std::size_t(j), r[k]});
        ds.push_back(FpMatrix::from_triplets(mod, p, p, e));
    }
    return cx::CochainComplex(cx::GradedModule(mod, cx::Window{-top, 0, true, false}, labels), ds);
}

bool augmented_exact(const WResolution& w)
{
    auto c = w.complex();
    // Augmentation epsilon : W^0 -> R is onto, so H^0 must be one-dimensional (its kernel is the
    // image of d^{-1}) and H^{-i} = 0 for 0 < i < top.
    for (int i = 0; i < w.top; ++i) {
        std::size_t rank_out = i == 0 ? 1 : la::rank(c.d(-i));
        std::size_t rank_in = la::rank(c.d(-i - 1));
        if (rank_out + rank_in != c.dim(-i))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

TensorChain tensor_boundary(const TensorChain& c, int p, const Modulus& m)
{
    Accumulator acc(m);
    for (const auto& t : c) {
        int before = 0;
        for (int k = 0; k < p; ++k) {
            std::uint32_t mask = t.faces[k];
            if (face_degree(mask) > 0) {
                int j = 0;
                for (std::uint32_t rest = mask; rest; rest &= rest - 1, ++j) {
                    FaceTuple f = t.faces;
                    f[k] = mask & ~(rest & -rest);
                    acc.add(f, m.mul(t.coeff, sign(m, before + j)));
                }
            }
            before += face_degree(mask);
        }
    }
    return acc.finish();
}

TensorChain alpha_act(const TensorChain& c, int p, const Modulus& m)
{
    Accumulator acc(m);
    for (const auto& t : c) {
        FaceTuple f{};
        int rest = 0;
        for (int k = 0; k + 1 < p; ++k) {
            f[k + 1] = t.faces[k];
            rest += face_degree(t.faces[k]);
        }
        f[0] = t.faces[p - 1];
        acc.add(f, m.mul(t.coeff, sign(m, rest * face_degree(t.faces[p - 1]))));
    }
    return acc.finish();
}

TensorChain ring_act(const std::vector<Residue>& r, const TensorChain& c, int p, const Modulus& m)
{
    TensorChain out;
    TensorChain power = c;
    for (int j = 0; j < p; ++j) {
        if (r[j])
            out = chain_add(out, power, m, r[j]);
        if (j + 1 < p)
            power = alpha_act(power, p, m);
    }
    return out;
}

TensorChain chain_add(const TensorChain& a, const TensorChain& b, const Modulus& m, Residue scale)
{
    TensorChain out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].faces < b[j].faces)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].faces < a[i].faces) {
            Residue c = m.mul(scale, b[j].coeff);
            if (c)
                out.push_back({b[j].faces, c});
            ++j;
        } else {
            Residue c = m.add(a[i].coeff, m.mul(scale, b[j].coeff));
            if (c)
                out.push_back({a[i].faces, c});
            ++i;
            ++j;
        }
    }
    return out;
}

TensorChain coface_push(const TensorChain& c, int p, int k)
{
    TensorChain out;
    out.reserve(c.size());
    for (const auto& t : c) {
        TensorTerm u = t;
        for (int q = 0; q < p; ++q)
            u.faces[q] = insert_zero_bit(t.faces[q], k);
        out.push_back(u);
    }
    // Inserting a zero bit is monotone on each mask, so the lexicographic order is preserved.
    return out;
}

TensorChain cone_homotopy(const TensorChain& c, int p, const Modulus& m)
{
    Accumulator acc(m);
    for (const auto& t : c) {
        for (int k = 0; k < p; ++k) {
            // Factors before k pass through eta eps: vertices become vertex 0, anything else dies.
            if (k > 0 && face_degree(t.faces[k - 1]) != 0)
                break;
            if (t.faces[k] & 1u)
                continue;
            FaceTuple f = t.faces;
            for (int q = 0; q < k; ++q)
                f[q] = 1u;
            f[k] |= 1u;
            acc.add(f, t.coeff);
        }
    }
    return acc.finish();
}

TensorChain iterated_aw(int n, int p)
{
    // Sum over cut points 0 <= v_1 <= ... <= v_{p-1} <= n of [0..v_1] (x) [v_1..v_2] (x) ... (x) [v_{p-1}..n].
    TensorChain out;
    std::vector<int> cuts(p + 1, 0);
    cuts[p] = n;
    auto interval = [](int a, int b) { return ((1u << (b + 1)) - 1) & ~((1u << a) - 1); };
    std::function<void(int)> rec = [&](int k) {
        if (k == p) {
            TensorTerm t;
            for (int q = 0; q < p; ++q)
                t.faces[q] = interval(cuts[q], cuts[q + 1]);
            t.coeff = 1;
            out.push_back(t);
            return;
        }
        for (int v = cuts[k - 1]; v <= n; ++v) {
            cuts[k] = v;
            rec(k + 1);
        }
    };
    if (p == 1) {
        cuts[1] = n;
        rec(1);
    } else {
        rec(1);
    }
    std::sort(out.begin(), out.end(), [](const TensorTerm& a, const TensorTerm& b) { return a.faces < b.faces; });
    return out;
}

// ---------------------------------------------------------------------------

EquivariantDiagonal::EquivariantDiagonal(int p, int bound, std::vector<std::vector<TensorChain>> table)
    : p_(p), bound_(bound), mod_(static_cast<std::uint32_t>(p)), table_(std::move(table))
{
    check_arity(p);
    if (bound < 0 || bound > kMaxDiagonalDim)
        throw std::invalid_argument("equivariant diagonal: dimension bound outside [0, " +
                                    std::to_string(kMaxDiagonalDim) + "]");
    if (static_cast<int>(table_.size()) != bound + 1)
        throw std::invalid_argument("equivariant diagonal: table does not match the bound");
    for (int n = 0; n <= bound; ++n)
        if (static_cast<int>(table_[n].size()) != max_index(n) + 1)
            throw std::invalid_argument("equivariant diagonal: wrong number of entries in dimension " +
                                        std::to_string(n));
}

const TensorChain& EquivariantDiagonal::entry(int i, int n) const
{
    static const TensorChain empty;
    if (n < 0 || n > bound_)
        throw std::out_of_range("equivariant diagonal: simplex dimension " + std::to_string(n) +
                                " exceeds the table bound " + std::to_string(bound_));
    if (i < 0 || i > max_index(n))
        return empty;
    return table_[n][i];
}

TensorChain EquivariantDiagonal::entry(int j, int i, int n) const
{
    CyclicGroupRing r(p_, mod_);
    return ring_act(r.alpha_power(j), entry(i, n), p_, mod_);
}

namespace {

// Phi(d e_i (x) iota_n) + (-1)^i sum_k (-1)^k delta_k* Phi(e_i (x) iota_{n-1}), the boundary data
// of the generator e_i (x) iota_n.
TensorChain boundary_data(const EquivariantDiagonal* phi, const std::vector<std::vector<TensorChain>>* partial,
                          int p, const Modulus& m, int i, int n)
{
    auto get = [&](int ii, int nn) -> const TensorChain& {
        static const TensorChain empty;
        if (phi)
            return phi->entry(ii, nn);
        if (ii < 0 || ii > (p - 1) * nn)
            return empty;
        return (*partial)[nn][ii];
    };
    CyclicGroupRing ring(p, m);
    TensorChain rhs;
    if (i > 0)
        rhs = ring_act(i % 2 == 1 ? ring.t() : ring.norm(), get(i - 1, n), p, m);
    if (n > 0) {
        const TensorChain& lower = get(i, n - 1);
        for (int k = 0; k <= n; ++k)
            rhs = chain_add(rhs, coface_push(lower, p, k), m, sign(m, i + k));
    }
    return rhs;
}

}  // namespace

bool EquivariantDiagonal::chain_map_holds(int j, int i, int n) const
{
    CyclicGroupRing ring(p_, mod_);
    TensorChain lhs = tensor_boundary(entry(j, i, n), p_, mod_);
    TensorChain rhs = ring_act(ring.alpha_power(j), boundary_data(this, nullptr, p_, mod_, i, n), p_, mod_);
    return lhs == rhs;
}

EquivariantDiagonal equivariant_diagonal(int p, int bound)
{
    check_arity(p);
    if (bound < 0 || bound > kMaxDiagonalDim)
        throw std::invalid_argument("equivariant diagonal: dimension bound outside [0, " +
                                    std::to_string(kMaxDiagonalDim) + "]");
    Modulus m(static_cast<std::uint32_t>(p));
    std::vector<std::vector<TensorChain>> table(bound + 1);
    for (int n = 0; n <= bound; ++n) {
        table[n].resize((p - 1) * n + 1);
        table[n][0] = iterated_aw(n, p);
        for (int i = 1; i <= (p - 1) * n; ++i) {
            TensorChain rhs = boundary_data(nullptr, &table, p, m, i, n);
            if (!tensor_boundary(rhs, p, m).empty())
                throw std::logic_error("equivariant diagonal: boundary data of e_" + std::to_string(i) +
                                       " on Delta^" + std::to_string(n) + " is not a cycle");
            table[n][i] = cone_homotopy(rhs, p, m);
        }
    }
    return EquivariantDiagonal(p, bound, std::move(table));
}

// ---------------------------------------------------------------------------

std::string EquivariantDiagonal::serialize() const
{
    std::ostringstream out;
    out << "steenrod-equivariant-diagonal v1\n";
    out << "p " << p_ << " bound " << bound_ << "\n";
    for (int n = 0; n <= bound_; ++n)
        for (int i = 0; i <= max_index(n); ++i) {
            const auto& c = table_[n][i];
            out << "entry " << n << " " << i << " " << c.size() << "\n";
            for (const auto& t : c) {
                out << t.coeff;
                for (int q = 0; q < p_; ++q)
                    out << " " << t.faces[q];
                out << "\n";
            }
        }
    out << "end\n";
    return out.str();
}

EquivariantDiagonal EquivariantDiagonal::parse(const std::string& text)
{
    std::istringstream in(text);
    auto fail = [](const std::string& why) { throw std::runtime_error("diagonal cache: " + why); };
    std::string word, version;
    if (!(in >> word >> version) || word != "steenrod-equivariant-diagonal" || version != "v1")
        fail("bad header");
    int p = 0, bound = 0;
    std::string kp, kb;
    if (!(in >> kp >> p >> kb >> bound) || kp != "p" || kb != "bound")
        fail("bad parameters");
    check_arity(p);
    if (bound < 0 || bound > kMaxDiagonalDim)
        fail("bound out of range");
    std::vector<std::vector<TensorChain>> table(bound + 1);
    for (int n = 0; n <= bound; ++n) {
        table[n].resize((p - 1) * n + 1);
        for (int i = 0; i <= (p - 1) * n; ++i) {
            int nn = 0, ii = 0;
            std::size_t count = 0;
            if (!(in >> word >> nn >> ii >> count) || word != "entry" || nn != n || ii != i)
                fail("entry out of order");
            auto& c = table[n][i];
            c.resize(count);
            for (auto& t : c) {
                if (!(in >> t.coeff) || t.coeff == 0 || t.coeff >= static_cast<Residue>(p))
                    fail("bad coefficient");
                for (int q = 0; q < p; ++q)
                    if (!(in >> t.faces[q]) || t.faces[q] == 0 || (t.faces[q] >> (n + 1)) != 0)
                        fail("bad face");
            }
            for (std::size_t k = 1; k < c.size(); ++k)
                if (!(c[k - 1].faces < c[k].faces))
                    fail("terms not sorted");
        }
    }
    if (!(in >> word) || word != "end")
        fail("missing end marker");
    return EquivariantDiagonal(p, bound, std::move(table));
}

// ---------------------------------------------------------------------------

namespace {

TransportedChain finish_transported(std::map<GeneratorTuple, Residue>& acc)
{
    TransportedChain out;
    for (const auto& [t, c] : acc)
        if (c)
            out.push_back({t, c});
    return out;
}

}  // namespace

TransportedChain transport_chain(const TensorChain& c, const simp::SimplicialSet& x, const simp::SimplexRef& sigma,
                                 int p, const Modulus& m)
{
    std::map<GeneratorTuple, Residue> acc;
    std::unordered_map<std::uint32_t, std::int64_t> memo;
    auto face_of = [&](std::uint32_t mask) {
        auto it = memo.find(mask);
        if (it != memo.end())
            return it->second;
        std::int64_t g;
        if (!sigma.degenerate()) {
            g = x.nondegenerate_vertex_face(sigma.dim, sigma.gen, mask);
        } else {
            simp::SimplexRef f = x.vertex_face(sigma, mask);
            g = f.degenerate() ? -1 : f.gen;
        }
        memo.emplace(mask, g);
        return g;
    };
    for (const auto& t : c) {
        GeneratorTuple g;
        bool alive = true;
        for (int q = 0; q < p && alive; ++q) {
            std::int64_t f = face_of(t.faces[q]);
            if (f < 0)
                alive = false;
            g.gens[q] = f;
            g.dims[q] = face_degree(t.faces[q]);
        }
        if (alive)
            acc[g] = m.add(acc[g], t.coeff);
    }
    return finish_transported(acc);
}

TransportedChain transport(const EquivariantDiagonal& phi, const simp::SimplicialSet& x, int i,
                           const simp::SimplexRef& sigma)
{
    return transport_chain(phi.entry(i, sigma.dim), x, sigma, phi.p(), phi.modulus());
}

TransportedChain transported_boundary(const TransportedChain& c, const simp::SimplicialSet& x, int p,
                                      const Modulus& m)
{
    std::map<GeneratorTuple, Residue> acc;
    for (const auto& t : c) {
        int before = 0;
        for (int q = 0; q < p; ++q) {
            int d = t.tuple.dims[q];
            if (d > 0) {
                simp::SimplexRef s = simp::SimplexRef::nondegenerate(d, t.tuple.gens[q]);
                for (int k = 0; k <= d; ++k) {
                    simp::SimplexRef f = x.face(s, k);
                    if (f.degenerate())
                        continue;
                    GeneratorTuple g = t.tuple;
                    g.gens[q] = f.gen;
                    g.dims[q] = d - 1;
                    acc[g] = m.add(acc[g], m.mul(t.coeff, sign(m, before + k)));
                }
            }
            before += d;
        }
    }
    return finish_transported(acc);
}

TransportedChain push_forward(const TransportedChain& c, const simp::SimplicialMap& f, int p, const Modulus& m)
{
    std::map<GeneratorTuple, Residue> acc;
    for (const auto& t : c) {
        GeneratorTuple g = t.tuple;
        bool alive = true;
        for (int q = 0; q < p && alive; ++q) {
            simp::SimplexRef y = f(simp::SimplexRef::nondegenerate(t.tuple.dims[q], t.tuple.gens[q]));
            if (y.degenerate())
                alive = false;
            g.gens[q] = y.gen;
        }
        if (alive)
            acc[g] = m.add(acc[g], t.coeff);
    }
    return finish_transported(acc);
}

bool transported_chain_map_holds(const EquivariantDiagonal& phi, const simp::SimplicialSet& x, int i,
                                 const simp::SimplexRef& sigma)
{
    const int p = phi.p();
    const Modulus& m = phi.modulus();
    const int n = sigma.dim;
    CyclicGroupRing ring(p, m);
    TransportedChain lhs = transported_boundary(transport(phi, x, i, sigma), x, p, m);
    TransportedChain rhs;
    auto add_into = [&](const TransportedChain& c, Residue s) {
        std::map<GeneratorTuple, Residue> acc;
        for (const auto& t : rhs)
            acc[t.tuple] = t.coeff;
        for (const auto& t : c)
            acc[t.tuple] = m.add(acc[t.tuple], m.mul(s, t.coeff));
        rhs = finish_transported(acc);
    };
    if (i > 0) {
        TensorChain w = ring_act(i % 2 == 1 ? ring.t() : ring.norm(), phi.entry(i - 1, n), p, m);
        add_into(transport_chain(w, x, sigma, p, m), 1);
    }
    if (n > 0)
        for (int k = 0; k <= n; ++k)
            add_into(transport(phi, x, i, x.face(sigma, k)), sign(m, i + k));
    return lhs == rhs;
}

// ---------------------------------------------------------------------------

EquivariantComplex tensor_power_of_simplex(int n, int p, Modulus m)
{
    check_arity(p);
    if (n < 0 || n > 4)
        throw std::invalid_argument("tensor_power_of_simplex: n outside [0, 4]");
    const std::uint32_t faces = (1u << (n + 1)) - 1;
    const int top = p * n;
    std::vector<std::vector<FaceTuple>> basis(top + 1);
    std::vector<std::map<FaceTuple, std::size_t>> index(top + 1);
    FaceTuple cur{};
    std::function<void(int, int)> rec = [&](int q, int deg) {
        if (q == p) {
            index[deg].emplace(cur, basis[deg].size());
            basis[deg].push_back(cur);
            return;
        }
        for (std::uint32_t mask = 1; mask <= faces; ++mask) {
            cur[q] = mask;
            rec(q + 1, deg + face_degree(mask));
        }
    };
    rec(0, 0);
    std::vector<std::vector<cx::Label>> labels;
    for (int d = top; d >= 0; --d) {
        std::vector<cx::Label> l;
        for (const auto& f : basis[d]) {
            std::string s;
            for (int q = 0; q < p; ++q)
                s += (q ? "|" : "") + std::to_string(f[q]);
            l.push_back(s);
        }
        labels.push_back(l);
    }
    auto matrix_of = [&](int d, int target_deg, auto&& op) {
        std::vector<la::Entry> e;
        for (std::size_t c = 0; c < basis[d].size(); ++c)
            for (const auto& t : op(TensorChain{{basis[d][c], 1}}))
                e.push_back({index[target_deg].at(t.faces), c, t.coeff});
        return FpMatrix::from_triplets(m, basis[target_deg].size(), basis[d].size(), e);
    };
    std::vector<FpMatrix> ds;
    for (int d = top; d >= 1; --d)
        ds.push_back(matrix_of(d, d - 1, [&](const TensorChain& c) { return tensor_boundary(c, p, m); }));
    EquivariantComplex out;
    out.complex = std::make_shared<const cx::CochainComplex>(
        cx::GradedModule(m, cx::Window{-top, 0, false, false}, labels), ds);
    for (int d = 0; d <= top; ++d)
        out.alpha.emplace(-d, matrix_of(d, d, [&](const TensorChain& c) { return alpha_act(c, p, m); }));
    out.augmentation.assign(basis[0].size(), 1);
    return out;
}

cx::ChainMap lift_through_resolution(const WResolution& w, const EquivariantComplex& target, int top)
{
    if (top < 0 || top > w.top)
        throw std::invalid_argument("lift_through_resolution: degree bound outside the resolution");
    const Modulus& m = w.mod;
    const auto& t = *target.complex;
    auto source = std::make_shared<const cx::CochainComplex>(w.complex());
    cx::ChainMap f{source, target.complex, 0, {}};
    std::vector<Residue> prev;
    for (int i = 0; i <= top; ++i) {
        std::vector<Residue> image;
        if (i == 0) {
            FpMatrix eps = FpMatrix::from_triplets(m, 1, t.dim(0), [&] {
                std::vector<la::Entry> e;
                for (std::size_t k = 0; k < target.augmentation.size(); ++k)
                    if (target.augmentation[k])
                        e.push_back({0, k, target.augmentation[k]});
                return e;
            }());
            auto s = la::solve(eps, std::vector<Residue>{1});
            if (!s)
                throw LiftError("not acyclic in window: augmentation is not onto");
            image = *s;
        } else {
            // f(d e_i) = sum_k r_k alpha^k f(e_{i-1}).
            auto r = w.boundary(i);
            std::vector<Residue> b(t.dim(-(i - 1)), 0), power = prev;
            if (!b.empty()) {
                const FpMatrix& a = target.alpha.at(-(i - 1));
                for (int k = 0; k < w.p; ++k) {
                    for (std::size_t q = 0; q < b.size(); ++q)
                        b[q] = m.add(b[q], m.mul(r[k], power[q]));
                    power = a.apply(power);
                }
            }
            if (!t.window().contains(-i)) {
                if (std::any_of(b.begin(), b.end(), [](Residue v) { return v != 0; }))
                    throw LiftError("not acyclic in window: degree " + std::to_string(-i));
                image.clear();
            } else {
                auto s = la::solve(t.d(-i), b);
                if (!s)
                    throw LiftError("not acyclic in window: degree " + std::to_string(-i));
                image = *s;
            }
        }
        // Column j is alpha^j f(e_i).
        std::vector<la::Entry> e;
        std::vector<Residue> col = image;
        for (int j = 0; j < w.p; ++j) {
            for (std::size_t q = 0; q < col.size(); ++q)
                if (col[q])
                    e.push_back({q, std::size_t(j), col[q]});
            if (j + 1 < w.p && !col.empty())
                col = target.alpha.at(-i).apply(col);
        }
        f.components.emplace(-i, FpMatrix::from_triplets(m, t.dim(-i), w.p, e));
        prev = image;
    }
    return f;
}

}  // namespace steenrod::eq
