#include "doctest.h"

#include "steenrod/simplicial.hpp"
#include "test_support.hpp"

#include <map>
#include <tuple>

using namespace steenrod;
using la::FpMatrix;
using la::Modulus;
using la::Residue;
using simp::SimplexRef;
using simp::SimplicialSet;

namespace {

grp::GroupPtr group(const std::string& spec)
{
    return std::make_shared<const grp::FiniteGroup>(grp::FiniteGroup::from_spec(spec));
}

std::vector<std::size_t> cohomology_dims(const SimplicialSet& x, Modulus m, int top)
{
    auto c = simp::cochains(x, m, true, top + 1);
    std::vector<std::size_t> out;
    for (const auto& h : c.cohomology(0, top))
        out.push_back(h.dimension());
    return out;
}

// d_i d_j = d_{j-1} d_i checked independently on every simplex, degenerate ones included.
bool identities_on_all_simplices(const SimplicialSet& x, int top)
{
    for (int n = 0; n <= top; ++n)
        for (const auto& s : x.all_simplices(n)) {
            for (int j = 0; j <= n; ++j) {
                SimplexRef sj = x.degeneracy(s, j);
                // d_j s_j = d_{j+1} s_j = id
                if (!(x.face(sj, j) == s) || !(x.face(sj, j + 1) == s))
                    return false;
            }
            if (n < 2)
                continue;
            for (int j = 1; j <= n; ++j)
                for (int i = 0; i < j; ++i)
                    if (!(x.face(x.face(s, j), i) == x.face(x.face(s, i), j - 1)))
                        return false;
        }
    return true;
}

}  // namespace

TEST_CASE("standard simplices")
{
    auto d0 = simp::standard_simplex(0);
    CHECK(d0.count(0) == 1);
    CHECK(d0.count(1) == 0);
    auto d2 = simp::standard_simplex(2);
    CHECK(d2.count(0) == 3);
    CHECK(d2.count(1) == 3);
    CHECK(d2.count(2) == 1);
    CHECK(d2.label(1, 1) == "[0,2]");
    auto c = simp::chains(d2, Modulus(5), true, 2);
    CHECK(c.dim(0) == 3);
    CHECK(c.dim(-1) == 3);
    CHECK(c.dim(-2) == 1);
    CHECK_FALSE(c.window().open_below);
    auto h = c.cohomology(-2, 0);
    CHECK(h[0].dimension() == 0);
    CHECK(h[1].dimension() == 0);
    CHECK(h[2].dimension() == 1);
    auto d4 = simp::standard_simplex(4);
    for (int k = 0; k <= 4; ++k)
        for (std::int64_t g = 0; g < d4.count(k); ++g)
            for (std::uint32_t mask = 1; mask < (1u << (k + 1)); ++mask) {
                SimplexRef f = d4.vertex_face(SimplexRef::nondegenerate(k, g), mask);
                CHECK(f.gen == d4.nondegenerate_vertex_face(k, g, mask));
            }
    CHECK(identities_on_all_simplices(d4, 5));
    auto c0 = simp::chains(d0, Modulus(3), false, 0);
    CHECK(c0.dim(0) == 1);
    CHECK_NOTHROW(simp::chains(d2, Modulus(2), true, 3));
    auto bar = simp::bar_construction(group("cyclic:2"), 3);
    CHECK_THROWS_AS(simp::chains(bar, Modulus(2), true, 4), cx::WindowError);
}

TEST_CASE("degeneracy words are canonical")
{
    auto d1 = simp::standard_simplex(1);
    SimplexRef e = SimplexRef::nondegenerate(1, 0);
    SimplexRef x = d1.degeneracy(d1.degeneracy(e, 0), 2);  // s_2 s_0 e
    CHECK(x.degeneracy_word() == std::vector<int>{2, 0});
    CHECK(d1.label(x) == "s2s0[0,1]");
    // s_0 s_0 = s_1 s_0
    CHECK(d1.degeneracy(d1.degeneracy(e, 0), 0) == d1.degeneracy(d1.degeneracy(e, 0), 1));
}

TEST_CASE("bar constructions")
{
    auto triv = simp::bar_construction(group("trivial"), 5);
    CHECK(triv.count(0) == 1);
    for (int n = 1; n <= 5; ++n) {
        CHECK(triv.count(n) == 0);
        CHECK(triv.all_simplices(n).size() == 1);
    }
    CHECK(triv.complete());

    auto bz2 = simp::bar_construction(group("cyclic:2"), 11);
    for (int n = 0; n <= 11; ++n)
        CHECK(bz2.count(n) == 1);
    for (int n = 0; n <= 6; ++n)
        CHECK(bz2.all_simplices(n).size() == (std::size_t(1) << n));
    auto c = simp::chains(bz2, Modulus(2), true, 10);
    CHECK(c.window().open_below);
    for (int n = 0; n <= 10; ++n)
        CHECK(c.dim(-n) == 1);
    auto dims = cohomology_dims(bz2, Modulus(2), 10);
    for (int n = 0; n <= 10; ++n)
        CHECK(dims[n] == 1);

    // Over F_3, BZ/2 is acyclic in positive degrees.
    auto dims3 = cohomology_dims(bz2, Modulus(3), 8);
    CHECK(dims3[0] == 1);
    for (int n = 1; n <= 8; ++n)
        CHECK(dims3[n] == 0);

    auto bz3 = simp::bar_construction(group("cyclic:3"), 7);
    auto d33 = cohomology_dims(bz3, Modulus(3), 6);
    for (int n = 0; n <= 6; ++n)
        CHECK(d33[n] == 1);
    CHECK(identities_on_all_simplices(bz3, 4));

    // Fast vertex faces agree with iterated faces.
    auto bs3 = simp::bar_construction(group("symmetric:3"), 4);
    for (int n = 1; n <= 4; ++n)
        for (std::int64_t g = 0; g < bs3.count(n); g += 7)
            for (std::uint32_t mask = 1; mask < (1u << (n + 1)); ++mask) {
                SimplexRef f = bs3.vertex_face(SimplexRef::nondegenerate(n, g), mask);
                CHECK(bs3.nondegenerate_vertex_face(n, g, mask) == (f.degenerate() ? -1 : f.gen));
            }
    CHECK(simp::bar_index(bs3, simp::bar_tuple(bs3, 3, 17)) == 17);
    CHECK(simp::bar_index(bs3, {1, 0, 2}) == -1);
}

TEST_CASE("normalized and unnormalized cohomology agree")
{
    auto bz2 = simp::bar_construction(group("cyclic:2"), 7);
    for (Modulus m : {Modulus(2), Modulus(3)}) {
        auto n = simp::cochains(bz2, m, true, 6);
        auto u = simp::cochains(bz2, m, false, 6);
        auto hn = n.cohomology(0, 5);
        auto hu = u.cohomology(0, 5);
        for (int k = 0; k <= 5; ++k)
            CHECK(hn[k].dimension() == hu[k].dimension());
    }
    auto d2 = simp::standard_simplex(2);
    auto u = simp::cochains(d2, Modulus(2), false, 4);
    auto hu = u.cohomology(0, 3);
    CHECK(hu[0].dimension() == 1);
    for (int k = 1; k <= 3; ++k)
        CHECK(hu[k].dimension() == 0);
}

namespace {

void check_dold_kan(const SimplicialSet& x, Modulus m, int top)
{
    auto s = simp::dold_kan_split(x, m, top);
    CHECK(cx::is_chain_map(s.inclusion));
    CHECK(cx::is_chain_map(s.projection));
    auto pi = cx::compose(s.projection, s.inclusion);
    for (int n = -top; n <= 0; ++n)
        CHECK(pi.at(n) == FpMatrix::identity(m, s.normalized->dim(n)));
    CHECK(s.verified_lo == -top + 1);
    const auto& u = *s.unnormalized;
    for (int n = s.verified_lo; n <= 0; ++n) {
        FpMatrix lhs = FpMatrix::identity(m, u.dim(n)) - s.inclusion.at(n) * s.projection.at(n);
        FpMatrix rhs = u.d(n - 1) * s.homotopy.at(n);
        if (n < 0)
            rhs = rhs + s.homotopy.at(n + 1) * u.d(n);
        CHECK(lhs == rhs);
    }
}

}  // namespace

TEST_CASE("Dold-Kan splitting")
{
    auto d0 = simp::standard_simplex(0);
    auto s0 = simp::dold_kan_split(d0, Modulus(2), 0);
    CHECK(s0.inclusion.at(0) == FpMatrix::identity(Modulus(2), 1));
    CHECK(s0.homotopy.at(0).is_zero());
    check_dold_kan(d0, Modulus(3), 3);
    auto d1 = simp::standard_simplex(1);
    check_dold_kan(d1, Modulus(2), 3);
    check_dold_kan(d1, Modulus(5), 3);
    auto bz2 = simp::bar_construction(group("cyclic:2"), 6);
    check_dold_kan(bz2, Modulus(2), 4);
    check_dold_kan(bz2, Modulus(3), 4);
    auto bz3 = simp::bar_construction(group("cyclic:3"), 4);
    check_dold_kan(bz3, Modulus(3), 3);
}

TEST_CASE("Alexander-Whitney diagonal")
{
    Modulus f2(2);
    auto d1 = simp::standard_simplex(1);
    auto aw = simp::aw_diagonal(d1, f2, 1);
    CHECK(cx::is_chain_map(aw));
    const auto& c = *aw.source;
    const auto& t = *aw.target;
    // vertices go to v (x) v
    for (std::size_t v = 0; v < 2; ++v) {
        auto img = aw.at(0).apply(std::vector<Residue>(v == 0 ? std::vector<Residue>{1, 0} : std::vector<Residue>{0, 1}));
        for (std::size_t r = 0; r < img.size(); ++r)
            CHECK(img[r] == (r == cx::tensor_index(c, c, 0, v, 0, v) ? 1u : 0u));
    }
    // [01] -> [0] (x) [01] + [01] (x) [1]
    auto img = aw.at(-1).apply(std::vector<Residue>{1});
    std::vector<Residue> expected(t.dim(-1), 0);
    expected[cx::tensor_index(c, c, 0, 0, -1, 0)] = 1;
    expected[cx::tensor_index(c, c, -1, 0, 0, 1)] = 1;
    CHECK(img == expected);

    for (const auto& x : {simp::standard_simplex(3), simp::bar_construction(group("cyclic:3"), 5),
                          simp::bar_construction(group("klein"), 4)})
        for (Modulus m : {Modulus(2), Modulus(3)}) {
            auto a = simp::aw_diagonal(x, m, std::min(3, x.bound() - 1));
            CHECK(cx::is_chain_map(a));
        }
}

TEST_CASE("Alexander-Whitney diagonal is coassociative")
{
    auto x = simp::bar_construction(group("cyclic:3"), 5);
    Modulus m(3);
    const int top = 4;
    auto aw = simp::aw_diagonal(x, m, top);
    const auto& c = *aw.source;
    // Decode tensor indices into (front degree, front index, back index).
    std::map<std::pair<int, std::size_t>, std::tuple<int, std::size_t, std::size_t>> decode;
    for (int n = 0; n <= top; ++n)
        for (int i = 0; i <= n; ++i)
            for (std::size_t a = 0; a < c.dim(-i); ++a)
                for (std::size_t b = 0; b < c.dim(-(n - i)); ++b)
                    decode[{-n, cx::tensor_index(c, c, -i, a, -(n - i), b)}] = {i, a, b};
    auto expand = [&](int n, std::size_t g) {
        std::vector<std::tuple<int, std::size_t, std::size_t, Residue>> out;
        std::vector<Residue> v(c.dim(-n), 0);
        v[g] = 1;
        auto img = aw.at(-n).apply(v);
        for (std::size_t r = 0; r < img.size(); ++r)
            if (img[r]) {
                auto [i, a, b] = decode.at({-n, r});
                out.push_back({i, a, b, img[r]});
            }
        return out;
    };
    for (int n = 0; n <= top; ++n)
        for (std::size_t g = 0; g < c.dim(-n); ++g) {
            std::map<std::tuple<std::size_t, std::size_t, std::size_t, int, int>, Residue> left, right;
            for (auto [i, a, b, k] : expand(n, g)) {
                for (auto [i2, a1, a2, k2] : expand(i, a))
                    left[{a1, a2, b, i2, i}] = m.add(left[{a1, a2, b, i2, i}], m.mul(k, k2));
                for (auto [j2, b1, b2, k2] : expand(n - i, b))
                    right[{a, b1, b2, i, i + j2}] = m.add(right[{a, b1, b2, i, i + j2}], m.mul(k, k2));
            }
            CHECK(left == right);
        }
}

TEST_CASE("cup product on the bar construction of Z/2")
{
    Modulus f2(2);
    auto bz2 = simp::bar_construction(group("cyclic:2"), 6);
    auto c = simp::cochains(bz2, f2, true, 5);
    auto h1 = c.cohomology(1), h2 = c.cohomology(2);
    REQUIRE(h1.dimension() == 1);
    auto t = h1.representative_dense(0);
    auto tt = simp::cup(bz2, f2, 1, t, 1, t);
    CHECK(c.d(2).apply(tt) == std::vector<Residue>(c.dim(3), 0));
    CHECK(h2.reduce(std::span<const Residue>(tt)) == std::vector<Residue>{1});
    // t^4 generates degree 4.
    auto t3 = simp::cup(bz2, f2, 2, tt, 1, t);
    auto t4 = simp::cup(bz2, f2, 3, t3, 1, t);
    CHECK(c.cohomology(4).reduce(std::span<const Residue>(t4)) == std::vector<Residue>{1});
}

TEST_CASE("induced maps on bar constructions")
{
    Modulus f2(2);
    auto z2 = group("cyclic:2");
    auto z2z2 = std::make_shared<const grp::FiniteGroup>(grp::FiniteGroup::direct_product(*z2, *z2));
    auto b1 = simp::bar_construction(z2, 4);
    auto b2 = simp::bar_construction(z2z2, 4);
    auto c1 = std::make_shared<const cx::CochainComplex>(simp::cochains(b1, f2, true, 3));
    auto c2 = std::make_shared<const cx::CochainComplex>(simp::cochains(b2, f2, true, 3));

    auto id = simp::induced_map(grp::make_homomorphism(z2, z2, {0, 1}), b1, b1);
    auto id_star = simp::cochain_map(id, c1, c1);
    for (int n = 0; n <= 3; ++n)
        CHECK(id_star.at(n) == FpMatrix::identity(f2, c1->dim(n)));

    auto diag = simp::induced_map(grp::diagonal(z2, z2z2), b1, b2);
    auto diag_star = simp::cochain_map(diag, c2, c1);
    CHECK(cx::is_chain_map(diag_star));
    auto t = c1->cohomology(1);
    auto h = c2->cohomology(1);
    CHECK(h.dimension() == 2);
    for (int k = 0; k < 2; ++k) {
        auto pr = simp::induced_map(grp::projection(z2, z2, z2z2, k), b2, b1);
        auto pr_star = simp::cochain_map(pr, c1, c2);
        CHECK(cx::is_chain_map(pr_star));
        auto gen = pr_star.at(1).apply(t.representative_dense(0));
        CHECK(h.reduce(std::span<const Residue>(gen)) != std::vector<Residue>{0, 0});
        auto back = diag_star.at(1).apply(gen);
        CHECK(t.reduce(std::span<const Residue>(back)) == std::vector<Residue>{1});
    }

    auto trivial = simp::induced_map(grp::make_homomorphism(z2, z2, {0, 0}), b1, b1);
    auto triv_star = simp::cochain_map(trivial, c1, c1);
    CHECK(triv_star.at(0) == FpMatrix::identity(f2, 1));
    for (int n = 1; n <= 3; ++n)
        CHECK(triv_star.at(n).is_zero());

    auto z4 = group("cyclic:4");
    CHECK_THROWS_AS(grp::make_homomorphism(z2, z4, {0, 1}), std::invalid_argument);
}

TEST_CASE("products of simplicial sets")
{
    auto d1 = simp::standard_simplex(1);
    auto sq = simp::product(d1, d1);
    CHECK(sq.count(0) == 4);
    CHECK(sq.count(1) == 5);
    CHECK(sq.count(2) == 2);
    CHECK(sq.complete());
    CHECK(identities_on_all_simplices(sq, 3));
    auto h = simp::chains(sq, Modulus(2), true, 2).cohomology(-2, 0);
    CHECK(h[0].dimension() == 0);
    CHECK(h[1].dimension() == 0);
    CHECK(h[2].dimension() == 1);

    auto bz3 = simp::bar_construction(group("cyclic:3"), 4);
    auto xp = simp::product(bz3, simp::bar_construction(group("trivial"), 4));
    for (int n = 0; n <= 4; ++n)
        CHECK(xp.count(n) == bz3.count(n));

    auto d2 = simp::standard_simplex(2);
    auto prism = simp::product(d2, d1);
    CHECK(prism.count(3) == 3);

    auto bz2 = simp::bar_construction(group("cyclic:2"), 9);
    auto bb = simp::product(bz2, bz2);
    CHECK(identities_on_all_simplices(bb, 4));
    auto dims = cohomology_dims(bb, Modulus(2), 8);
    for (int n = 0; n <= 8; ++n)
        CHECK(dims[n] == std::size_t(n + 1));
}

TEST_CASE("Kunneth formula for bar constructions of products")
{
    // Predicted dims: convolution of the factor dims, each computed separately.
    struct Case {
        const char* g;
        const char* h;
        int p;
        int top;
    };
    std::vector<Case> cases = {{"cyclic:2", "cyclic:2", 2, 6}, {"cyclic:2", "cyclic:3", 2, 6},
                               {"cyclic:2", "cyclic:3", 3, 6}, {"cyclic:3", "cyclic:2", 3, 6},
                               {"cyclic:2", "trivial", 2, 6},  {"cyclic:2", "cyclic:4", 2, 4},
                               {"klein", "cyclic:2", 2, 4},    {"cyclic:3", "cyclic:3", 3, 4},
                               {"cyclic:4", "cyclic:3", 2, 3}, {"klein", "klein", 2, 3},
                               {"cyclic:4", "cyclic:4", 2, 3}, {"cyclic:4", "klein", 2, 3}};
    for (const auto& cs : cases) {
        CAPTURE(cs.g);
        CAPTURE(cs.h);
        Modulus m(cs.p);
        auto g = group(cs.g), h = group(cs.h);
        auto gh = std::make_shared<const grp::FiniteGroup>(grp::FiniteGroup::direct_product(*g, *h));
        auto dg = cohomology_dims(simp::bar_construction(g, cs.top + 1), m, cs.top);
        auto dh = cohomology_dims(simp::bar_construction(h, cs.top + 1), m, cs.top);
        auto dgh = cohomology_dims(simp::bar_construction(gh, cs.top + 1), m, cs.top);
        for (int n = 0; n <= cs.top; ++n) {
            std::size_t predicted = 0;
            for (int i = 0; i <= n; ++i)
                predicted += dg[i] * dh[n - i];
            CHECK(dgh[n] == predicted);
        }
    }
}

TEST_CASE("cosimplicial cochain complexes")
{
    std::mt19937_64 rng(11);
    Modulus f3(3);
    auto k = testing::random_complex(rng, f3, 0, 2, 2, "k");
    auto d0 = simp::standard_simplex(0);
    auto cos = simp::constant_cosimplicial(d0, k, 4);
    CHECK(cos.identities_hold());
    auto tot = cx::totalize(cos.double_complex());
    CHECK(testing::d_squared_zero(tot));
    // A constant cosimplicial object on a point totalizes to K itself.
    for (int n = std::max(tot.lo(), k.lo()); n <= std::min(tot.hi(), k.hi()) - 1; ++n)
        if (tot.window().known(n - 1) && tot.window().known(n + 1))
            CHECK(tot.cohomology(n).dimension() == k.cohomology(n).dimension());

    auto bz2 = simp::bar_construction(group("cyclic:2"), 5);
    auto unit = cx::CochainComplex::single(Modulus(2), 0, {"1"});
    auto cb = simp::constant_cosimplicial(bz2, unit, 4);
    CHECK(cb.identities_hold());
    auto tb = cx::totalize(cb.double_complex());
    CHECK(testing::d_squared_zero(tb));
    // Totalization with constant coefficients is the unnormalized cochain complex.
    for (int n = 0; n < 4; ++n)
        CHECK(tb.cohomology(n).dimension() == 1);

    auto d1 = simp::standard_simplex(1);
    auto k2 = testing::random_complex(rng, f3, -1, 1, 2, "m");
    auto c1 = simp::constant_cosimplicial(d1, k2, 3);
    CHECK(c1.identities_hold());
    CHECK(testing::d_squared_zero(cx::totalize(c1.double_complex())));
}

TEST_CASE("malformed simplicial data is rejected")
{
    // d_0 d_1 != d_0 d_0 on a 2-simplex whose edges do not match up.
    std::vector<std::vector<std::string>> labels = {{"a", "b", "c"}, {"ab", "bc"}, {"abc"}};
    auto v = [](std::int64_t g) { return SimplexRef::nondegenerate(0, g); };
    auto e = [](std::int64_t g) { return SimplexRef::nondegenerate(1, g); };
    std::vector<std::vector<std::vector<SimplexRef>>> faces = {
        {}, {{v(1), v(0)}, {v(2), v(1)}}, {{e(1), e(0), e(0)}}};
    CHECK_THROWS_AS(SimplicialSet("bad", 2, labels, faces, true), std::invalid_argument);
    faces[1][0] = {v(1), v(5)};
    CHECK_THROWS_AS(SimplicialSet("bad", 2, labels, faces, true), std::invalid_argument);
}
