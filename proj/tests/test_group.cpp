#include "doctest.h"

#include "steenrod/group.hpp"

#include <memory>
#include <random>

using namespace steenrod::grp;

namespace {

bool is_group(const FiniteGroup& g)
{
    const int n = g.order();
    for (int a = 0; a < n; ++a) {
        if (g.mul(a, g.inverse(a)) != 0 || g.mul(g.inverse(a), a) != 0)
            return false;
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
                    return false;
    }
    return true;
}

int count_commuting_pairs(const FiniteGroup& g)
{
    int c = 0;
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b)
            c += g.mul(a, b) == g.mul(b, a);
    return c;
}

}  // namespace

TEST_CASE("group families have the expected orders and structure")
{
    CHECK(FiniteGroup::trivial().order() == 1);
    auto c5 = FiniteGroup::cyclic(5);
    CHECK(c5.order() == 5);
    CHECK(c5.mul(3, 4) == 2);
    CHECK(c5.inverse(2) == 3);
    auto k = FiniteGroup::klein();
    CHECK(k.order() == 4);
    for (int a = 0; a < 4; ++a)
        CHECK(k.mul(a, a) == 0);
    auto d4 = FiniteGroup::dihedral(4);
    CHECK(d4.order() == 8);
    CHECK(is_group(d4));
    // D_4 has 5 conjugacy classes, so 5 * 8 commuting ordered pairs.
    CHECK(count_commuting_pairs(d4) == 40);
    auto s3 = FiniteGroup::symmetric(3);
    CHECK(s3.order() == 6);
    CHECK(count_commuting_pairs(s3) == 18);
    auto s4 = FiniteGroup::symmetric(4);
    CHECK(s4.order() == 24);
    CHECK(count_commuting_pairs(s4) == 24 * 5);
    CHECK_THROWS_AS(FiniteGroup::symmetric(5), std::invalid_argument);
}

TEST_CASE("symmetric group composes right to left")
{
    auto s3 = FiniteGroup::symmetric(3);
    // Elements are permutations in lexicographic order: 012, 021, 102, 120, 201, 210.
    CHECK(s3.element_name(1) == "021");
    CHECK(s3.element_name(2) == "102");
    // (021)(102): i -> a(b(i)) = 0->a(1)=2, 1->a(0)=0, 2->a(2)=1 -> "201".
    CHECK(s3.element_name(s3.mul(1, 2)) == "201");
}

TEST_CASE("direct product indexing")
{
    auto g = FiniteGroup::cyclic(2), h = FiniteGroup::cyclic(3);
    auto gh = FiniteGroup::direct_product(g, h);
    CHECK(gh.order() == 6);
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y)
            CHECK(gh.mul(x, y) == g.mul(x / 3, y / 3) * 3 + h.mul(x % 3, y % 3));
    CHECK(count_commuting_pairs(gh) == 36);
}

TEST_CASE("group table parsing")
{
    auto g = FiniteGroup::parse_table("e a b\ne a b\na b e\nb e a\n");
    CHECK(g.order() == 3);
    CHECK(g.mul(1, 1) == 2);
    CHECK_THROWS_AS(FiniteGroup::parse_table("e a\ne a\na a\n"), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGroup::parse_table("e a\ne a\n"), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGroup::parse_table("e a\ne a\na x\n"), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGroup::parse_table("a e\ne a\na e\n"), std::invalid_argument);
    // A Latin square that is not associative.
    CHECK_THROWS_AS(FiniteGroup::parse_table("e a b c d\n"
                                             "e a b c d\n"
                                             "a e c d b\n"
                                             "b d e a c\n"
                                             "c b d e a\n"
                                             "d c a b e\n"),
                    std::invalid_argument);
}

TEST_CASE("group specs")
{
    CHECK(FiniteGroup::from_spec("cyclic:4").order() == 4);
    CHECK(FiniteGroup::from_spec("klein").order() == 4);
    CHECK(FiniteGroup::from_spec("dihedral:3").order() == 6);
    CHECK(FiniteGroup::from_spec("symmetric:3").order() == 6);
    CHECK(FiniteGroup::from_spec("trivial").order() == 1);
    CHECK_THROWS_AS(FiniteGroup::from_spec("cyclic:x"), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGroup::from_spec("cyclic"), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGroup::from_spec("lie:3"), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGroup::from_spec("@/nonexistent/file"), std::invalid_argument);
}

TEST_CASE("homomorphisms are checked")
{
    auto z4 = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(4));
    auto z2 = std::make_shared<const FiniteGroup>(FiniteGroup::cyclic(2));
    CHECK_NOTHROW(make_homomorphism(z4, z2, {0, 1, 0, 1}));
    CHECK_THROWS_AS(make_homomorphism(z2, z4, {0, 1}), std::invalid_argument);
    CHECK_NOTHROW(make_homomorphism(z2, z4, {0, 2}));
    CHECK_THROWS_AS(make_homomorphism(z2, z4, {0}), std::invalid_argument);
    auto z2z2 = std::make_shared<const FiniteGroup>(FiniteGroup::direct_product(*z2, *z2));
    auto d = diagonal(z2, z2z2);
    CHECK(d.images == std::vector<int>{0, 3});
    auto p0 = projection(z2, z2, z2z2, 0), p1 = projection(z2, z2, z2z2, 1);
    CHECK(p0.images == std::vector<int>{0, 0, 1, 1});
    CHECK(p1.images == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("property: random direct products of small groups are groups")
{
    std::mt19937_64 rng(7);
    std::vector<FiniteGroup> pool = {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::klein(),
                                     FiniteGroup::dihedral(3), FiniteGroup::symmetric(3)};
    for (int t = 0; t < 10; ++t) {
        const auto& a = pool[rng() % pool.size()];
        const auto& b = pool[rng() % pool.size()];
        auto ab = FiniteGroup::direct_product(a, b);
        CHECK(ab.order() == a.order() * b.order());
        CHECK(count_commuting_pairs(ab) == count_commuting_pairs(a) * count_commuting_pairs(b));
    }
}
