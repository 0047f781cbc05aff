// Acceptance run: eight end-to-end criteria, one PASS/FAIL line each.
//
// Exit status is 0 when every criterion passes. Sub-checks listed as known to be unattainable still
// print FAIL, and their criterion line says so, but they only affect the exit status with --strict.

#include "steenrod/adem.hpp"
#include "steenrod/complexes.hpp"
#include "steenrod/equivariant.hpp"
#include "steenrod/group.hpp"
#include "steenrod/operations.hpp"
#include "steenrod/orthogonal.hpp"
#include "steenrod/simplicial.hpp"
#include "steenrod/verify.hpp"

#include "CLI11.hpp"
#include "test_support.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace steenrod;
namespace fs = std::filesystem;
using la::FpMatrix;
using la::Modulus;
using la::Residue;
using ops::CohomologyClass;
using ops::Operation;
using ops::SteenrodContext;

namespace {

struct SubCheck {
    std::string name;
    long instances = 0;
    long failures = 0;
    std::string first_failure;
    bool known_unattainable = false;
};

class Criterion {
public:
    explicit Criterion(double limit_seconds = 0) : limit_(limit_seconds) {}

    SubCheck& sub(const std::string& name, bool known_unattainable = false)
    {
        for (auto& s : subs_)
            if (s.name == name)
                return s;
        subs_.push_back({name, 0, 0, "", known_unattainable});
        return subs_.back();
    }

    void check(const std::string& name, bool ok, const std::function<std::string()>& witness = {},
               bool known_unattainable = false)
    {
        SubCheck& s = sub(name, known_unattainable);
        ++s.instances;
        if (!ok && s.failures++ == 0 && witness)
            s.first_failure = witness();
    }

    void error(const std::string& what) { check("completes without error", false, [&] { return what; }); }

    double limit() const { return limit_; }
    const std::vector<SubCheck>& subs() const { return subs_; }

private:
    double limit_;
    std::vector<SubCheck> subs_;
};

std::string coords(const CohomologyClass& x)
{
    std::ostringstream s;
    s << "H" << x.degree << "[";
    for (std::size_t k = 0; k < x.coords.size(); ++k)
        s << (k ? "," : "") << x.coords[k];
    s << "]";
    return s.str();
}

bool is_zero(const CohomologyClass& x)
{
    for (Residue c : x.coords)
        if (c)
            return false;
    return true;
}

std::shared_ptr<const SteenrodContext> context(const std::string& group, int p, int bound,
                                               const std::string& cache_dir = "")
{
    auto g = std::make_shared<const grp::FiniteGroup>(grp::FiniteGroup::from_spec(group));
    ops::ContextOptions opts;
    opts.cache_dir = cache_dir;
    return std::make_shared<const SteenrodContext>(g, p, bound, opts);
}

// C(n, k) mod p digit by digit, each digit binomial from a Pascal row.
Residue lucas(long n, long k, int p)
{
    if (k < 0 || k > n)
        return 0;
    long result = 1;
    while (n > 0 || k > 0) {
        long a = n % p, b = k % p;
        if (b > a)
            return 0;
        std::vector<long> row{1};
        for (long i = 0; i < a; ++i) {
            std::vector<long> next(row.size() + 1, 0);
            for (std::size_t j = 0; j < row.size(); ++j) {
                next[j] += row[j];
                next[j + 1] += row[j];
            }
            row = next;
        }
        result = result * (row[b] % p) % p;
        n /= p;
        k /= p;
    }
    return static_cast<Residue>(result);
}

// All basis classes of degree q.
std::vector<CohomologyClass> basis(const SteenrodContext& ctx, int q)
{
    std::vector<CohomologyClass> out;
    for (std::size_t k = 0; k < ctx.dim(q); ++k)
        out.push_back(ctx.basis_class(q, k));
    return out;
}

// x^n, with x^0 the unit of the connected space.
CohomologyClass power(const SteenrodContext& ctx, const CohomologyClass& x, int n)
{
    return n == 0 ? ctx.basis_class(0, 0) : ctx.power(x, n);
}

// ---------------------------------------------------------------------------

void criterion_bz2(Criterion& c)
{
    const int D = 10;
    auto ctx = context("cyclic:2", 2, D);
    for (int n = 0; n <= D; ++n)
        c.check("dim H^n = 1", ctx->dim(n) == 1, [&] { return "n=" + std::to_string(n); });
    CohomologyClass t = ctx->basis_class(1, 0);
    for (int n = 0; n <= D; ++n) {
        CohomologyClass tn = power(*ctx, t, n);
        c.check("t^n generates H^n", tn.coords == std::vector<Residue>{1}, [&] { return "n=" + std::to_string(n); });
        for (int i = 0; n + i <= D; ++i) {
            CohomologyClass expected = ctx->scale(power(*ctx, t, n + i), lucas(n, i, 2));
            CohomologyClass got = ctx->sq(i, tn);
            c.check("Sq^i(t^n) = C(n,i) t^(n+i)", got == expected, [&] {
                return "i=" + std::to_string(i) + " n=" + std::to_string(n) + " got " + coords(got);
            });
        }
    }
}

// nu(n) straight from its definition, with the sign exponent in 64-bit integers.
Residue nu_oracle(long n, int p)
{
    long long e = static_cast<long long>(n) * (n - 1) * (p - 1) / 4;
    long long f = 1;
    for (int k = 2; k <= (p - 1) / 2; ++k)
        f = f * k % p;
    long long v = (e % 2 == 0) ? f : (p - f) % p;
    return static_cast<Residue>(v);
}

void criterion_bz3(Criterion& c)
{
    const int D = 8, p = 3;
    auto ctx = context("cyclic:3", p, D);
    for (int n = 0; n <= D; ++n)
        c.check("dim H^n = 1", ctx->dim(n) == 1, [&] { return "n=" + std::to_string(n); });

    // F_3[t] (x) Lambda(v) with |v| = 1 and t = beta v.
    CohomologyClass v = ctx->basis_class(1, 0);
    CohomologyClass t = ctx->bockstein(v);
    c.check("beta v generates H^2", !is_zero(t));
    c.check("v^2 = 0", is_zero(ctx->cup(v, v)));
    for (int k = 0; 2 * k <= D; ++k) {
        CohomologyClass tk = power(*ctx, t, k);
        c.check("t^k != 0", !is_zero(tk), [&] { return "k=" + std::to_string(k); });
        if (2 * k + 1 <= D)
            c.check("v t^k != 0", !is_zero(ctx->cup(v, tk)), [&] { return "k=" + std::to_string(k); });
    }

    for (int q = 0; q <= D; ++q)
        for (const auto& x : basis(*ctx, q))
            for (int s = 0; q + 4 * s <= D; ++s) {
                CohomologyClass got = ctx->p_op(s, x);
                if (2 * s == q)
                    c.check("P^s x = x^3 when 2s = |x|", got == ctx->power(x, 3),
                            [&] { return coords(x) + " s=" + std::to_string(s); });
                else if (2 * s > q)
                    c.check("P^s x = 0 when 2s > |x|", is_zero(got), [&] { return coords(x) + " s=" + std::to_string(s); });
            }

    for (int q = 0; q <= D; ++q)
        for (int s = 0; q + 4 * s + 1 <= D; ++s) {
            FpMatrix lhs = ops::operation_matrix(*ctx, Operation::BetaP, s, q);
            FpMatrix rhs = ops::operation_matrix(*ctx, Operation::Bockstein, 0, q + 4 * s) *
                           ops::operation_matrix(*ctx, Operation::P, s, q);
            c.check("beta P^s = beta o P^s", lhs == rhs, [&] { return "q=" + std::to_string(q) + " s=" + std::to_string(s); });
        }

    for (int pp : {3, 5, 7})
        for (long n = -20; n <= 20; ++n) {
            c.check("nu matches its definition", ops::nu(n, pp) == nu_oracle(n, pp),
                    [&] { return "p=" + std::to_string(pp) + " n=" + std::to_string(n); });
            Residue prod = static_cast<Residue>(std::uint64_t(nu_oracle(n, pp)) * nu_oracle(-n, pp) % pp);
            c.check("nu(n) nu(-n) = 1 mod p", prod == 1,
                    [&] {
                        return "p=" + std::to_string(pp) + " n=" + std::to_string(n) + " gives " + std::to_string(prod);
                    },
                    true);
        }
}

void criterion_negative_and_identity(Criterion& c)
{
    const int D = 8;
    struct Case {
        std::string group;
        int p;
    };
    for (const Case& k : {Case{"cyclic:2", 2}, Case{"cyclic:3", 3}, Case{"klein", 2}}) {
        auto ctx = context(k.group, k.p, D);
        std::string tag = k.group + " ";
        for (int q = 0; q <= D; ++q) {
            std::size_t n = ctx->dim(q);
            if (k.p == 2) {
                for (int s = -q; s < 0; ++s)
                    c.check("negative operations vanish", ops::operation_matrix(*ctx, Operation::Sq, s, q).is_zero(),
                            [&] { return tag + "Sq" + std::to_string(s) + " q=" + std::to_string(q); });
                c.check("Sq^0 = identity", ops::operation_matrix(*ctx, Operation::Sq, 0, q) == FpMatrix::identity(ctx->modulus(), n),
                        [&] { return tag + "q=" + std::to_string(q); });
            } else {
                for (int s = -1; q + 4 * s >= 0; --s) {
                    c.check("negative operations vanish", ops::operation_matrix(*ctx, Operation::P, s, q).is_zero(),
                            [&] { return tag + "P" + std::to_string(s) + " q=" + std::to_string(q); });
                    if (q + 4 * s + 1 >= 0)
                        c.check("negative operations vanish", ops::operation_matrix(*ctx, Operation::BetaP, s, q).is_zero(),
                                [&] { return tag + "bP" + std::to_string(s) + " q=" + std::to_string(q); });
                }
                c.check("P^0 = identity", ops::operation_matrix(*ctx, Operation::P, 0, q) == FpMatrix::identity(ctx->modulus(), n),
                        [&] { return tag + "q=" + std::to_string(q); });
            }
        }
    }
}

void criterion_bockstein(Criterion& c)
{
    for (auto [group, D] : {std::pair<std::string, int>{"cyclic:2", 8}, {"klein", 6}}) {
        auto ctx = context(group, 2, D);
        const Modulus& m = ctx->modulus();
        for (int q = 0; q < D; ++q)
            c.check("beta = Sq^1", ops::operation_matrix(*ctx, Operation::Bockstein, 0, q) ==
                                       ops::operation_matrix(*ctx, Operation::Sq, 1, q),
                    [&] { return group + " q=" + std::to_string(q); });
        for (int q = 0; q + 2 <= D; ++q)
            c.check("beta^2 = 0", (ops::operation_matrix(*ctx, Operation::Bockstein, 0, q + 1) *
                                   ops::operation_matrix(*ctx, Operation::Bockstein, 0, q))
                                      .is_zero(),
                    [&] { return group + " q=" + std::to_string(q); });
        for (int a = 0; a <= D; ++a)
            for (int b = 0; a + b + 1 <= D; ++b)
                for (const auto& x : basis(*ctx, a))
                    for (const auto& y : basis(*ctx, b)) {
                        CohomologyClass lhs = ctx->bockstein(ctx->cup(x, y));
                        Residue sign = (a % 2) ? m.neg(1) : 1;
                        CohomologyClass rhs = ctx->add(ctx->cup(ctx->bockstein(x), y),
                                                       ctx->scale(ctx->cup(x, ctx->bockstein(y)), sign));
                        c.check("beta(xy) = beta(x) y + (-1)^|x| x beta(y)", lhs == rhs,
                                [&] { return group + " " + coords(x) + " " + coords(y); });
                    }
    }
}

void criterion_adem_cartan(Criterion& c)
{
    std::vector<alg::OpPolynomial> pairs;
    for (int a = 1; a <= 12; ++a)
        for (int b = 1; a + b <= 12; ++b) {
            alg::OpPolynomial f = alg::OpPolynomial::word(2, {{0, a}, {0, b}});
            alg::OpPolynomial g = alg::rewrite_admissible(f);
            bool admissible = true, degree = true;
            for (const auto& [w, coeff] : g.terms()) {
                admissible = admissible && alg::admissible(w, 2);
                degree = degree && alg::degree(w, 2) == a + b;
            }
            auto where = [&] { return "Sq" + std::to_string(a) + " Sq" + std::to_string(b) + " -> " + alg::to_string(g); };
            c.check("normal form is admissible", admissible, where);
            c.check("normal form preserves degree", degree, where);
            c.check("normal form is a fixed point", alg::rewrite_admissible(g) == g, where);
            pairs.push_back(f);
        }

    auto ctx = context("klein", 2, 8);
    verify::Report adem = verify::verify_adem(*ctx, pairs);
    for (const auto& r : adem.records)
        c.check("applied relations act identically on H^<=8", r.passed,
                [&] { return r.relation + " degree " + std::to_string(r.degree) + " " + r.witness; });

    for (int a = 0; a <= 6; ++a)
        for (int b = 0; a + b <= 6; ++b)
            for (const auto& x : basis(*ctx, a))
                for (const auto& y : basis(*ctx, b))
                    for (int k = 0; a + b + k <= ctx->degree_bound(); ++k) {
                        CohomologyClass lhs = ctx->sq(k, ctx->cup(x, y));
                        CohomologyClass rhs = ctx->zero(a + b + k);
                        for (int i = 0; i <= k; ++i)
                            rhs = ctx->add(rhs, ctx->cup(ctx->sq(i, x), ctx->sq(k - i, y)));
                        c.check("Cartan formula", lhs == rhs, [&] {
                            return "Sq" + std::to_string(k) + " on " + coords(x) + " " + coords(y);
                        });
                    }
}

void add_report(Criterion& c, const std::string& name, const verify::Report& r)
{
    for (const auto& rec : r.records)
        c.check(name, rec.passed, [&] { return r.name + ": " + rec.relation + " " + rec.witness; });
}

void criterion_orthogonal(Criterion& c)
{
    for (int r = 1; r <= 4; ++r) {
        add_report(c, "restriction commutes with Sq on O_2r", orth::check_wu(r));
        for (int a = 0; a <= 2; ++a)
            for (int d = 0; d <= a; ++d)
                add_report(c, "identities on the torus", orth::check_orth_identities(a, d, r));
        add_report(c, "SO_n variants", orth::check_so_variants(r));
        add_report(c, "O_2r+1 Kunneth data", orth::check_kunneth(r));
    }
}

const char* kDgAlgebras[] = {
    R"({"prime": 2, "unit": "1", "basis": [{"name": "1", "degree": 0}]})",
    R"({"prime": 2, "unit": "1", "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 1}]})",
    R"({"prime": 2, "unit": "1",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 1}, {"name": "x2", "degree": 2},
                  {"name": "x3", "degree": 3}],
        "products": [{"left": "x", "right": "x", "result": {"x2": 1}}, {"left": "x", "right": "x2", "result": {"x3": 1}},
                     {"left": "x2", "right": "x", "result": {"x3": 1}}]})",
    R"({"prime": 2, "unit": "1",
        "basis": [{"name": "1", "degree": 0}, {"name": "b", "degree": 0}, {"name": "a", "degree": 1},
                  {"name": "ab", "degree": 1}],
        "products": [{"left": "b", "right": "a", "result": {"ab": 1}}, {"left": "a", "right": "b", "result": {"ab": 1}}],
        "differential": {"b": {"a": 1}}})",
    R"({"prime": 3, "unit": "1",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 2}, {"name": "x2", "degree": 4},
                  {"name": "x3", "degree": 6}],
        "products": [{"left": "x", "right": "x", "result": {"x2": 1}}, {"left": "x", "right": "x2", "result": {"x3": 1}},
                     {"left": "x2", "right": "x", "result": {"x3": 1}}]})",
    R"({"prime": 3, "unit": "1",
        "basis": [{"name": "1", "degree": 0}, {"name": "e", "degree": 0}, {"name": "y", "degree": 3}],
        "products": [{"left": "e", "right": "e", "result": {"e": 1}}, {"left": "e", "right": "y", "result": {"y": 1}},
                     {"left": "y", "right": "e", "result": {"y": 1}}]})",
};

void criterion_triviality(Criterion& c)
{
    for (int p : {2, 3})
        for (int n = 1; n <= 3; ++n)
            add_report(c, "Cartan extension of the trivial operation is Frobenius",
                       orth::reductive_trivial_check(p, n, 100, 10));
    for (const char* json : kDgAlgebras) {
        auto report = ops::trivial_theta_ops(ops::dg_algebra_from_json(json));
        for (const auto& k : report.cases)
            c.check("trivial theta gives the p-th power", k.holds, [&] { return k.class_label + " " + k.detail; });
    }
}

void criterion_infrastructure(Criterion& c)
{
    using testing::d_squared_zero;
    std::mt19937_64 rng(8);
    const std::vector<std::string> groups{"trivial", "cyclic:2", "cyclic:3", "cyclic:4", "klein", "symmetric:3"};
    for (int trial = 0; trial < 200; ++trial) {
        int p = std::array{2, 3, 5}[trial % 3];
        Modulus mod(p);
        auto a = testing::random_complex(rng, mod, -1, 1, 3, "a");
        auto b = testing::random_complex(rng, mod, 0, 2, 3, "b");
        std::string at = "trial " + std::to_string(trial);
        auto where = [&] { return at; };
        c.check("d^2 = 0: random input", d_squared_zero(a) && d_squared_zero(b), where);
        c.check("d^2 = 0: tensor", d_squared_zero(cx::tensor(a, b)), where);
        c.check("d^2 = 0: hom", d_squared_zero(cx::hom_complex(a, b)), where);
        c.check("d^2 = 0: shift", d_squared_zero(cx::shift(a, static_cast<int>(trial % 3) - 1)), where);
        auto cosimplicial = simp::constant_cosimplicial(simp::standard_simplex(1 + trial % 2), a, 2);
        c.check("d^2 = 0: totalize", d_squared_zero(cx::totalize(cosimplicial.double_complex())), where);

        auto g = std::make_shared<const grp::FiniteGroup>(grp::FiniteGroup::from_spec(groups[trial % groups.size()]));
        auto bar = simp::bar_construction(g, 4);
        bool normalized = trial % 2 == 0;
        c.check("d^2 = 0: chains", d_squared_zero(simp::chains(bar, mod, normalized, 4)), where);
        c.check("d^2 = 0: cochains", d_squared_zero(simp::cochains(bar, mod, normalized, 4)), where);
        c.check("d^2 = 0: W resolution", d_squared_zero(eq::w_resolution(p, mod, 2 + trial % 5).complex()), where);
    }

    for (int p : {2, 3}) {
        auto phi = eq::equivariant_diagonal(p, 6);
        const Modulus& m = phi.modulus();
        for (int n = 0; n <= 6; ++n)
            for (int i = 0; i <= phi.max_index(n) + 1; ++i) {
                eq::TensorChain moved = phi.entry(i, n);
                for (int j = 0; j < p; ++j) {
                    auto where = [&] {
                        return "p=" + std::to_string(p) + " j=" + std::to_string(j) + " i=" + std::to_string(i) +
                               " n=" + std::to_string(n);
                    };
                    c.check("diagonal is a chain map", phi.chain_map_holds(j, i, n), where);
                    c.check("diagonal is equivariant", phi.entry(j, i, n) == moved, where);
                    moved = eq::alpha_act(moved, p, m);
                }
            }
    }

    std::random_device rd;
    fs::path root = fs::temp_directory_path() / ("steenrod-acceptance-" + std::to_string(rd()) + std::to_string(rd()));
    fs::path miss_dir = root / "miss", hit_dir = root / "hit";
    for (auto [group, p] : {std::pair<std::string, int>{"cyclic:2", 2}, {"cyclic:3", 3}}) {
        const int D = 6;
        auto plain = context(group, p, D);
        auto miss = context(group, p, D, miss_dir.string());
        fs::create_directories(hit_dir);
        fs::copy(miss_dir, hit_dir, fs::copy_options::overwrite_existing);
        auto hit = context(group, p, D, hit_dir.string());

        for (const auto& entry : fs::directory_iterator(miss_dir)) {
            std::ifstream in(entry.path(), std::ios::binary);
            std::stringstream bytes;
            bytes << in.rdbuf();
            auto parsed = eq::EquivariantDiagonal::parse(bytes.str());
            c.check("cache file equals a fresh table", parsed == eq::equivariant_diagonal(parsed.p(), parsed.bound()),
                    [&] { return entry.path().filename().string(); });
            c.check("cache file re-serializes to the same bytes", parsed.serialize() == bytes.str(),
                    [&] { return entry.path().filename().string(); });
        }
        c.check("cache hit loads the stored table", hit->diagonal() == miss->diagonal() && miss->diagonal() == plain->diagonal(),
                [&] { return group; });
        for (int q = 0; q <= D; ++q)
            for (int s = 0; s <= D; ++s) {
                Operation op = p == 2 ? Operation::Sq : Operation::P;
                if (ops::operation_degree(op, s, q, p) > D)
                    break;
                FpMatrix ref = ops::operation_matrix(*plain, op, s, q);
                c.check("operations agree with and without the cache",
                        ops::operation_matrix(*miss, op, s, q) == ref && ops::operation_matrix(*hit, op, s, q) == ref,
                        [&] { return group + " s=" + std::to_string(s) + " q=" + std::to_string(q); });
            }
    }
    std::error_code ec;
    fs::remove_all(root, ec);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Runs the acceptance criteria"};
    bool strict = false;
    app.add_flag("--strict", strict, "Known-unattainable sub-checks also fail the exit status");
    CLI11_PARSE(app, argc, argv);

    struct Entry {
        std::string title;
        double limit;
        void (*run)(Criterion&);
    };
    const std::vector<Entry> criteria{
        {"BZ/2, D=10: dims and Sq^i(t^n) against Lucas binomials", 120, criterion_bz2},
        {"BZ/3, D=8: ring shape, P^s top and vanishing, beta P^s = beta o P^s, nu identity", 0, criterion_bz3},
        {"negative operations vanish and Sq^0, P^0 are identities on H^<=8", 0, criterion_negative_and_identity},
        {"Bockstein: beta = Sq^1, derivation rule, beta^2 = 0", 0, criterion_bockstein},
        {"Adem rewriting, relations on H^<=8(B(Z/2 x Z/2)), Cartan formula", 600, criterion_adem_cartan},
        {"orthogonal-group symbolic suite, r <= 4", 10, criterion_orthogonal},
        {"trivial total operation gives Frobenius; trivial theta on dg-algebras", 0, criterion_triviality},
        {"d^2 = 0 after constructors, equivariant diagonal, cache round trip", 0, criterion_infrastructure},
    };

    int failed = 0, known = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Criterion c(criteria[k].limit);
        auto start = std::chrono::steady_clock::now();
        try {
            criteria[k].run(c);
        } catch (const std::exception& e) {
            c.error(e.what());
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit() > 0) {
            std::ostringstream lim;
            lim << "runtime within " << c.limit() << " s";
            c.check(lim.str(), seconds <= c.limit(), [&] {
                std::ostringstream s;
                s << std::fixed << std::setprecision(1) << seconds << " s";
                return s.str();
            });
        }

        long instances = 0;
        bool hard_fail = false, known_fail = false;
        std::ostringstream details;
        for (const auto& s : c.subs()) {
            instances += s.instances;
            if (s.failures == 0)
                continue;
            (s.known_unattainable ? known_fail : hard_fail) = true;
            details << "; " << s.name << ": " << s.failures << "/" << s.instances << " failed, first " << s.first_failure
                    << (s.known_unattainable ? " (known unattainable)" : "");
        }
        bool pass = !hard_fail && !known_fail;
        std::cout << "criterion " << k + 1 << "  " << (pass ? "PASS" : "FAIL") << "  " << std::fixed << std::setprecision(2)
                  << seconds << " s  " << instances << " checks  " << criteria[k].title << details.str() << "\n";
        failed += hard_fail;
        known += !hard_fail && known_fail;
    }
    std::cout << "summary: " << criteria.size() - failed - known << " passed, " << failed << " failed, " << known
              << " failed only on known-unattainable sub-checks\n";
    return (failed > 0 || (strict && known > 0)) ? 1 : 0;
}
