#include "steenrod/orthogonal.hpp"

#include <random>

namespace steenrod::orth {

using poly::Generator;
using poly::GradedRingSpec;
using poly::RingPtr;
using verify::Record;
using verify::Report;

namespace {

std::string u_name(int k)
{
    return "u_" + std::to_string(k);
}

// Sq(u_{2a}) = u_{2a}^2 and Sq(u_{2a+1}) = u_{2a+1}^2 + u_{4a+1} + sum_t u_{2a-t} u_{2a+1+t}, where
// u(k) is zero for generators the ring does not have.
FpPoly wu_value(const RingPtr& ring, int k)
{
    auto u = [&](int i) { return ring->has(u_name(i)) ? FpPoly::generator(ring, u_name(i)) : FpPoly(ring); };
    FpPoly x = u(k);
    FpPoly v = x * x;
    if (k % 2 == 1) {
        const int a = (k - 1) / 2;
        v += u(4 * a + 1);
        for (int t = 0; t <= 2 * a - 1; ++t)
            v += u(2 * a - t) * u(2 * a + 1 + t);
    }
    return v;
}

TotalOperation with_wu_values(GradedRingSpec spec)
{
    auto ring = poly::make_ring(std::move(spec));
    TotalOperation op{ring, {}};
    for (const auto& g : ring->generators) {
        if (g.name == "v_1")
            op.values.push_back(FpPoly(ring));
        else if (g.name == "c_1")
            op.values.push_back(FpPoly::generator(ring, g.name).pow(2));
        else
            op.values.push_back(wu_value(ring, g.degree));
    }
    op.validate();
    return op;
}

Record compare(std::string relation, int degree, const FpPoly& lhs, const FpPoly& rhs)
{
    Record r{std::move(relation), degree, lhs == rhs, ""};
    if (!r.passed)
        r.witness = "lhs = " + lhs.to_string() + "; rhs = " + rhs.to_string();
    return r;
}

}  // namespace

TotalOperation orth_spec(int n)
{
    if (n < 1)
        throw std::invalid_argument("orth_spec needs n >= 1");
    GradedRingSpec spec{"O_" + std::to_string(n), 2, {}};
    if (n % 2 == 1) {
        spec.generators.push_back({"v_1", 1, true});
        spec.generators.push_back({"c_1", 2, false});
    } else {
        spec.generators.push_back({u_name(1), 1, false});
    }
    for (int i = 2; i <= n; ++i)
        spec.generators.push_back({u_name(i), i, false});
    return with_wu_values(std::move(spec));
}

TotalOperation so_spec(int n)
{
    if (n < 1)
        throw std::invalid_argument("so_spec needs n >= 1");
    GradedRingSpec spec{"SO_" + std::to_string(n), 2, {}};
    for (int i = 2; i <= n; ++i)
        spec.generators.push_back({u_name(i), i, false});
    return with_wu_values(std::move(spec));
}

TotalOperation mu2_spec()
{
    auto ring = poly::make_ring({"mu_2", 2, {{"t", 2, false}, {"v", 1, true}}});
    TotalOperation op{ring, {FpPoly::generator(ring, "t").pow(2), FpPoly(ring)}};
    op.validate();
    return op;
}

TotalOperation torus_spec(int r)
{
    if (r < 1)
        throw std::invalid_argument("torus_spec needs r >= 1");
    GradedRingSpec spec{"O_2^" + std::to_string(r), 2, {}};
    for (int i = 1; i <= r; ++i)
        spec.generators.push_back({"s_" + std::to_string(i), 1, false});
    for (int i = 1; i <= r; ++i)
        spec.generators.push_back({"t_" + std::to_string(i), 2, false});
    auto ring = poly::make_ring(std::move(spec));
    TotalOperation op{ring, {}};
    for (int i = 0; i < r; ++i) {
        FpPoly s = FpPoly::generator(ring, i);
        op.values.push_back(s + s * s);
    }
    for (int i = 0; i < r; ++i) {
        FpPoly t = FpPoly::generator(ring, r + i);
        op.values.push_back(t * t);
    }
    op.validate();
    return op;
}

FpPoly elementary(const TotalOperation& torus, int k, int omit)
{
    const auto& ring = torus.ring;
    const int r = static_cast<int>(ring->generators.size()) / 2;
    FpPoly sum(ring);
    if (k < 0)
        return sum;
    std::vector<int> vars;
    for (int i = 1; i <= r; ++i)
        if (i != omit)
            vars.push_back(i);
    if (k > static_cast<int>(vars.size()))
        return sum;
    std::vector<int> pick(k);
    auto rec = [&](auto&& self, int from, int depth) -> void {
        if (depth == k) {
            poly::Monomial m(ring->generators.size(), 0);
            for (int i : pick)
                m[r + i - 1] = 1;
            sum += FpPoly::monomial(ring, m);
            return;
        }
        for (int j = from; j < static_cast<int>(vars.size()); ++j) {
            pick[depth] = vars[j];
            self(self, j + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    return sum;
}

namespace {

FpPoly torus_image(const TotalOperation& torus, int r, int k)
{
    if (k == 0)
        return FpPoly::constant(torus.ring, 1);
    if (k > 2 * r || k < 0)
        return FpPoly(torus.ring);
    if (k % 2 == 0)
        return elementary(torus, k / 2);
    const int a = (k - 1) / 2;
    FpPoly sum(torus.ring);
    for (int m = 1; m <= r; ++m)
        sum += FpPoly::generator(torus.ring, m - 1) * elementary(torus, a, m);
    return sum;
}

poly::RingMap iota_map(const TotalOperation& source, const TotalOperation& target, int r)
{
    std::vector<FpPoly> images;
    for (int k = 1; k <= 2 * r; ++k)
        images.push_back(torus_image(target, r, k));
    return poly::RingMap(source.ring, target.ring, std::move(images));
}

}  // namespace

FpPoly Restriction::image(int k) const
{
    return torus_image(target, r, k);
}

Restriction restriction_iota(int r)
{
    TotalOperation source = orth_spec(2 * r);
    TotalOperation target = torus_spec(r);
    poly::RingMap map = iota_map(source, target, r);
    return Restriction{std::move(source), std::move(target), std::move(map), r};
}

Report check_wu(int r)
{
    Restriction iota = restriction_iota(r);
    Report report{"wu formula on O_" + std::to_string(2 * r), {}};
    for (int k = 1; k <= 2 * r; ++k) {
        FpPoly lhs = iota.map(iota.source.values[k - 1]);
        FpPoly rhs = poly::extend_total(iota.target, iota.image(k));
        report.records.push_back(compare("iota*(Sq(u_" + std::to_string(k) + ")) = Sq(iota*(u_" +
                                             std::to_string(k) + "))",
                                         k, lhs, rhs));
    }
    return report;
}

IdentitySides orth_identity(const Restriction& iota, int a, int d, Identity which)
{
    if (a < 0 || d < 0 || d > a)
        throw std::invalid_argument("identity needs 0 <= d <= a");
    const auto& torus = iota.target;
    const int r = iota.r;
    const int lo = which == Identity::Avoiding ? 2 * a - 2 * d : 2 * a - 2 * d - 1;

    std::string text = "iota*(" + u_name(4 * a + 1);
    FpPoly lhs = iota.image(4 * a + 1);
    for (int t = lo; t <= 2 * a - 1; ++t) {
        lhs += iota.image(2 * a - t) * iota.image(2 * a + 1 + t);
        text += " + " + u_name(2 * a - t) + " " + u_name(2 * a + 1 + t);
    }
    text += ") = sum_m s_m ";

    FpPoly rhs(torus.ring);
    for (int m = 1; m <= r; ++m) {
        FpPoly s = FpPoly::generator(torus.ring, m - 1);
        FpPoly t = FpPoly::generator(torus.ring, r + m - 1);
        switch (which) {
        case Identity::Avoiding:
            rhs += s * elementary(torus, d, m) * elementary(torus, 2 * a - d, m);
            break;
        case Identity::Containing:
            rhs += s * t * elementary(torus, d, m) * elementary(torus, 2 * a - d - 1, m);
            break;
        case Identity::ContainingUnshifted:
            rhs += s * t * elementary(torus, d - 1, m) * elementary(torus, 2 * a - d, m);
            break;
        }
    }
    const std::string ds = std::to_string(d), rest = std::to_string(2 * a - d), rest1 = std::to_string(2 * a - d - 1);
    switch (which) {
    case Identity::Avoiding:
        text += "e_" + ds + "(t without t_m) e_" + rest + "(t without t_m)";
        break;
    case Identity::Containing:
        text += "sum_{|J|=" + std::to_string(d + 1) + ", m in J} t_J e_" + rest1 + "(t without t_m)";
        break;
    case Identity::ContainingUnshifted:
        text += "sum_{|J|=" + ds + ", m in J} t_J e_" + rest + "(t without t_m)";
        break;
    }
    return {text + " [r=" + std::to_string(r) + ", a=" + std::to_string(a) + ", d=" + ds + "]", lhs, rhs};
}

Report check_orth_identities(int a, int d, int r)
{
    Restriction iota = restriction_iota(r);
    Report report{"restriction identities a=" + std::to_string(a) + " d=" + std::to_string(d) + " r=" +
                      std::to_string(r),
                  {}};
    for (Identity which : {Identity::Avoiding, Identity::Containing}) {
        auto sides = orth_identity(iota, a, d, which);
        report.records.push_back(compare(sides.relation, 4 * a + 1, sides.lhs, sides.rhs));
    }
    return report;
}

Report check_ring_map(const poly::RingMap& f, const TotalOperation& source, const TotalOperation& target,
                      const std::string& name)
{
    if (f.source() != source.ring || f.target() != target.ring)
        throw std::invalid_argument("ring map does not match the operations");
    Report report{name, {}};
    for (std::size_t k = 0; k < source.values.size(); ++k) {
        const auto& g = source.ring->generators[k];
        FpPoly lhs = f(source.values[k]);
        FpPoly rhs = poly::extend_total(target, f.image(k));
        report.records.push_back(compare("f(Sq(" + g.name + ")) = Sq(f(" + g.name + "))", g.degree, lhs, rhs));
    }
    return report;
}

namespace {

// u_i -> u_i where the target has it, else 0.
poly::RingMap forget_u(const TotalOperation& source, const TotalOperation& target)
{
    std::vector<FpPoly> images;
    for (const auto& g : source.ring->generators)
        images.push_back(target.ring->has(g.name) ? FpPoly::generator(target.ring, g.name) : FpPoly(target.ring));
    return poly::RingMap(source.ring, target.ring, std::move(images));
}

}  // namespace

Report check_so_variants(int r)
{
    Report report{"SO variants r=" + std::to_string(r), {}};
    auto append = [&](const TotalOperation& src, const TotalOperation& dst) {
        auto sub = check_ring_map(forget_u(src, dst), src, dst, "");
        for (auto& rec : sub.records) {
            rec.relation = src.ring->name + " -> " + dst.ring->name + ": " + rec.relation;
            report.records.push_back(std::move(rec));
        }
    };
    append(orth_spec(2 * r), so_spec(2 * r));
    append(orth_spec(2 * r + 2), so_spec(2 * r + 1));
    return report;
}

Report check_kunneth(int r)
{
    const int n = 2 * r + 1;
    TotalOperation direct = orth_spec(n);
    TotalOperation tensor = poly::rename(poly::kunneth_tensor(so_spec(n), mu2_spec()), {{"v", "v_1"}, {"t", "c_1"}},
                                         "SO_" + std::to_string(n) + "_x_mu_2");
    Report report{"kunneth O_" + std::to_string(n), {}};
    Record rec{"O_" + std::to_string(n) + " = SO_" + std::to_string(n) + " x mu_2 (v -> v_1, t -> c_1)", n,
               poly::equivalent(direct, tensor), ""};
    if (!rec.passed)
        rec.witness = poly::format_ring_spec(direct) + "vs\n" + poly::format_ring_spec(tensor);
    report.records.push_back(rec);
    return report;
}

Report reductive_trivial_check(int p, int n, int samples, int max_degree, std::uint64_t seed)
{
    GradedRingSpec spec{"F_" + std::to_string(p) + "[x_1..x_" + std::to_string(n) + "]", p, {}};
    for (int i = 1; i <= n; ++i)
        spec.generators.push_back({"x_" + std::to_string(i), 2, false});
    auto ring = poly::make_ring(std::move(spec));
    TotalOperation op = poly::frobenius_operation(ring);
    std::mt19937_64 rng(seed);
    const std::string name = p == 2 ? "Sq" : "P";
    Report report{"trivial operations on " + ring->name, {}};
    for (int k = 0; k < samples; ++k) {
        FpPoly f = poly::random_poly(ring, max_degree, rng);
        report.records.push_back(compare(name + "(f) = f^" + std::to_string(p) + " for f = " + f.to_string(),
                                         f.max_degree(), poly::extend_total(op, f),
                                         f.pow(static_cast<unsigned>(p))));
    }
    return report;
}

}  // namespace steenrod::orth
