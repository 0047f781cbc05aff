#include "steenrod/verify.hpp"

#include <sstream>

namespace steenrod::verify {

using la::Residue;
using ops::CohomologyClass;
using ops::Operation;
using ops::SteenrodContext;

namespace {

std::string coords(const CohomologyClass& x)
{
    std::string s = "[";
    for (std::size_t k = 0; k < x.coords.size(); ++k)
        s += (k ? "," : "") + std::to_string(x.coords[k]);
    return s + "]";
}

std::string label(int q, std::size_t k)
{
    return "H^" + std::to_string(q) + "[" + std::to_string(k) + "]";
}

Record compare(std::string relation, int degree, const CohomologyClass& lhs, const CohomologyClass& rhs,
               const std::string& where)
{
    Record r{std::move(relation), degree, lhs == rhs, ""};
    if (!r.passed)
        r.witness = where + ": lhs=" + coords(lhs) + " rhs=" + coords(rhs);
    return r;
}

Record compare(std::string relation, int degree, const la::FpMatrix& lhs, const la::FpMatrix& rhs)
{
    Record r{std::move(relation), degree, lhs == rhs, ""};
    if (!r.passed)
        r.witness = "lhs=" + la::to_string(lhs) + " rhs=" + la::to_string(rhs);
    return r;
}

Operation letter_operation(const alg::Letter& l, int p)
{
    if (p == 2)
        return Operation::Sq;
    return l.beta ? Operation::BetaP : Operation::P;
}

// Steenrod operations of degree `step` * s at the context's prime: Sq^s or P^s.
Operation primary(const SteenrodContext& ctx)
{
    return ctx.prime() == 2 ? Operation::Sq : Operation::P;
}

int step(const SteenrodContext& ctx)
{
    return ctx.prime() == 2 ? 1 : 2 * (ctx.prime() - 1);
}

// Applies op through the memoized matrix.
CohomologyClass act(const SteenrodContext& ctx, Operation op, int s, const CohomologyClass& x)
{
    const int t = ops::operation_degree(op, s, x.degree, ctx.prime());
    if (t < 0)
        return {t, {}};
    return {t, ctx.matrix(op, s, x.degree).apply(std::span<const Residue>(x.coords))};
}

CohomologyClass act_b(const SteenrodContext& ctx, const CohomologyClass& x)
{
    return act(ctx, Operation::Bockstein, 0, x);
}

CohomologyClass act_p(const SteenrodContext& ctx, int s, const CohomologyClass& x)
{
    return act(ctx, Operation::P, s, x);
}

CohomologyClass act_bp(const SteenrodContext& ctx, int s, const CohomologyClass& x)
{
    return act(ctx, Operation::BetaP, s, x);
}

}  // namespace

std::optional<la::FpMatrix> word_matrix(const SteenrodContext& ctx, const alg::OpWord& w, int q)
{
    const int p = ctx.prime();
    if (q < 0 || q > ctx.degree_bound())
        return std::nullopt;
    la::FpMatrix m = la::FpMatrix::identity(ctx.modulus(), ctx.dim(q));
    int deg = q;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        int next = deg + alg::degree(*it, p);
        if (next > ctx.degree_bound())
            return std::nullopt;
        m = ctx.matrix(letter_operation(*it, p), it->power, deg) * m;
        deg = next;
    }
    return m;
}

std::optional<la::FpMatrix> polynomial_matrix(const SteenrodContext& ctx, const alg::OpPolynomial& f, int degree,
                                              int q)
{
    if (q < 0 || q + degree > ctx.degree_bound())
        return std::nullopt;
    la::FpMatrix sum(ctx.modulus(), ctx.dim(q + degree), ctx.dim(q));
    for (const auto& [w, c] : f.terms()) {
        if (alg::degree(w, ctx.prime()) != degree)
            throw std::invalid_argument("polynomial_matrix: term of the wrong degree");
        sum = sum + word_matrix(ctx, w, q)->scaled(c);
    }
    return sum;
}

Report verify_cartan(const SteenrodContext& ctx, int max_degree)
{
    const int d = ctx.degree_bound();
    if (max_degree < 0)
        max_degree = d;
    const int p = ctx.prime();
    const int st = step(ctx);
    const Operation op = primary(ctx);
    Report rep{"cartan", {}};
    const auto& m = ctx.modulus();
    for (int a = 0; a <= max_degree; ++a)
        for (int b = 0; a + b <= max_degree; ++b)
            for (std::size_t i = 0; i < ctx.dim(a); ++i)
                for (std::size_t j = 0; j < ctx.dim(b); ++j) {
                    auto x = ctx.basis_class(a, i), y = ctx.basis_class(b, j);
                    const std::string where = "x=" + label(a, i) + " y=" + label(b, j);
                    auto xy = ctx.cup(x, y);
                    for (int k = 0; a + b + k * st <= d; ++k) {
                        CohomologyClass rhs = ctx.zero(a + b + k * st);
                        for (int s = 0; s <= k; ++s)
                            rhs = ctx.add(rhs, ctx.cup(act(ctx, op, s, x), act(ctx, op, k - s, y)));
                        rep.records.push_back(compare(ops::operation_name(op, k) + "(xy)", a + b,
                                                      act(ctx, op, k, xy), rhs, where));
                    }
                    if (p == 2 || a + b + 1 > d)
                        continue;
                    const Residue sx = a % 2 ? m.neg(1) : 1;
                    auto bock = ctx.add(ctx.cup(act_b(ctx, x), y), ctx.scale(ctx.cup(x, act_b(ctx, y)), sx));
                    rep.records.push_back(compare("b(xy)", a + b, act_b(ctx, xy), bock, where));
                    for (int k = 0; a + b + k * st + 1 <= d; ++k) {
                        CohomologyClass rhs = ctx.zero(a + b + k * st + 1);
                        for (int s = 0; s <= k; ++s) {
                            rhs = ctx.add(rhs, ctx.cup(act_bp(ctx, s, x), act_p(ctx, k - s, y)));
                            rhs = ctx.add(rhs, ctx.scale(ctx.cup(act_p(ctx, s, x), act_bp(ctx, k - s, y)), sx));
                        }
                        rep.records.push_back(compare("bP" + std::to_string(k) + "(xy)", a + b, act_bp(ctx, k, xy), rhs,
                                                      where));
                    }
                }
    return rep;
}

std::vector<alg::OpPolynomial> inadmissible_pairs(int p, int max_total_degree)
{
    std::vector<alg::OpPolynomial> out;
    const int betas = p == 2 ? 1 : 2;
    for (int e1 = 0; e1 < betas; ++e1)
        for (int e2 = 0; e2 < betas; ++e2)
            for (int a = 0; a <= max_total_degree; ++a)
                for (int b = 0; b <= max_total_degree; ++b) {
                    alg::OpWord w{{e1, a}, {e2, b}};
                    if ((a == 0 && e1 == 0) || (b == 0 && e2 == 0))
                        continue;
                    if (alg::degree(w, p) > max_total_degree || alg::admissible(w, p))
                        continue;
                    out.push_back(alg::OpPolynomial::word(p, w));
                }
    return out;
}

Report verify_adem(const SteenrodContext& ctx, const std::vector<alg::OpPolynomial>& polys)
{
    Report rep{"adem", {}};
    const int p = ctx.prime();
    auto check = [&](const std::string& name, const alg::OpPolynomial& lhs, const alg::OpPolynomial& rhs) {
        const int deg = alg::degree(lhs.terms().begin()->first, p);
        for (int q = 0; q + deg <= ctx.degree_bound(); ++q)
            rep.records.push_back(compare(name, q, *polynomial_matrix(ctx, lhs, deg, q), *polynomial_matrix(ctx, rhs, deg, q)));
    };
    for (const auto& f : polys) {
        std::vector<alg::AppliedRelation> log;
        auto normal = alg::rewrite_admissible(f, 1'000'000, &log);
        check(alg::to_string(f) + " = " + alg::to_string(normal), f, normal);
        for (const auto& rel : log) {
            auto lhs = alg::OpPolynomial::word(p, {rel.left, rel.right});
            check(alg::to_string(lhs) + " = " + alg::to_string(rel.expansion), lhs, rel.expansion);
        }
    }
    return rep;
}

Report verify_adem(const SteenrodContext& ctx)
{
    return verify_adem(ctx, inadmissible_pairs(ctx.prime(), ctx.degree_bound()));
}

Report verify_axioms(const SteenrodContext& ctx)
{
    Report rep{"axioms", {}};
    const int d = ctx.degree_bound();
    const int p = ctx.prime();
    const int st = step(ctx);
    const Operation op = primary(ctx);
    for (int q = 0; q <= d; ++q) {
        rep.records.push_back(compare(ops::operation_name(op, 0) + " = id", q, ctx.matrix(op, 0, q),
                                      la::FpMatrix::identity(ctx.modulus(), ctx.dim(q))));
        for (int s = -1; s >= -3; --s) {
            int t = ops::operation_degree(op, s, q, p);
            if (t < 0)
                break;
            auto m = ctx.matrix(op, s, q);
            rep.records.push_back(compare(ops::operation_name(op, s) + " = 0", q, m,
                                          la::FpMatrix(ctx.modulus(), m.rows(), m.cols())));
        }
        for (std::size_t k = 0; k < ctx.dim(q); ++k) {
            auto x = ctx.basis_class(q, k);
            const std::string where = "x=" + label(q, k);
            // Top operation: Sq^q at p = 2, P^{q/2} at odd p for even q.
            if (p == 2 && 2 * q <= d)
                rep.records.push_back(compare("Sq^|x|(x) = x^2", q, ctx.sq(q, x), ctx.power(x, 2), where));
            if (p != 2 && q % 2 == 0 && p * q <= d)
                rep.records.push_back(compare("P^{|x|/2}(x) = x^p", q, act_p(ctx, q / 2, x), ctx.power(x, p), where));
            for (int s = 0; q + s * st <= d; ++s) {
                if (p == 2 ? s <= q : 2 * s <= q)
                    continue;
                rep.records.push_back(compare(ops::operation_name(op, s) + "(x) = 0 above the top", q,
                                              ops::apply(ctx, op, s, x), ctx.zero(q + s * st), where));
            }
        }
        if (p != 2)
            for (int s = 0; q + s * st + 1 <= d; ++s)
                rep.records.push_back(compare("bP" + std::to_string(s) + " = b o P" + std::to_string(s), q,
                                              ctx.matrix(Operation::BetaP, s, q),
                                              ctx.matrix(Operation::Bockstein, 0, q + s * st) *
                                                  ctx.matrix(Operation::P, s, q)));
    }
    return rep;
}

Report verify_naturality(const simp::SimplicialMap& f, const SteenrodContext& source, const SteenrodContext& target,
                         const std::string& map_name)
{
    if (source.prime() != target.prime())
        throw std::invalid_argument("naturality: contexts over different primes");
    Report rep{"naturality", {}};
    const int d = std::min(source.degree_bound(), target.degree_bound());
    const int p = source.prime();
    std::vector<std::pair<Operation, int>> letters;
    for (int s = 0; s <= d; ++s) {
        letters.push_back({primary(source), s});
        if (p != 2)
            letters.push_back({Operation::BetaP, s});
    }
    letters.push_back({Operation::Bockstein, 0});
    for (int q = 0; q <= d; ++q)
        for (auto [op, s] : letters) {
            int t = ops::operation_degree(op, s, q, p);
            if (t > d)
                continue;
            auto lhs = ops::pullback_matrix(f, source, target, t) * target.matrix(op, s, q);
            auto rhs = source.matrix(op, s, q) * ops::pullback_matrix(f, source, target, q);
            rep.records.push_back(compare(map_name + "^* o " + ops::operation_name(op, s), q, lhs, rhs));
        }
    return rep;
}

Report verify_bockstein(const SteenrodContext& ctx, int max_degree)
{
    const int d = ctx.degree_bound();
    if (max_degree < 0)
        max_degree = d;
    Report rep{"bockstein", {}};
    const auto& m = ctx.modulus();
    for (int q = 0; q + 1 <= d; ++q) {
        auto b = ctx.matrix(Operation::Bockstein, 0, q);
        if (ctx.prime() == 2)
            rep.records.push_back(compare("b = Sq1", q, b, ctx.matrix(Operation::Sq, 1, q)));
        if (q + 2 <= d) {
            auto bb = ctx.matrix(Operation::Bockstein, 0, q + 1) * b;
            rep.records.push_back(compare("b o b = 0", q, bb, la::FpMatrix(m, bb.rows(), bb.cols())));
        }
    }
    for (int a = 0; a <= max_degree; ++a)
        for (int b = 0; a + b + 1 <= std::min(max_degree, d); ++b)
            for (std::size_t i = 0; i < ctx.dim(a); ++i)
                for (std::size_t j = 0; j < ctx.dim(b); ++j) {
                    auto x = ctx.basis_class(a, i), y = ctx.basis_class(b, j);
                    const Residue sx = a % 2 ? m.neg(1) : 1;
                    auto rhs = ctx.add(ctx.cup(act_b(ctx, x), y), ctx.scale(ctx.cup(x, act_b(ctx, y)), sx));
                    rep.records.push_back(compare("b(xy) = b(x)y + (-1)^|x| x b(y)", a + b, act_b(ctx, ctx.cup(x, y)),
                                                  rhs, "x=" + label(a, i) + " y=" + label(b, j)));
                }
    return rep;
}

}  // namespace steenrod::verify
