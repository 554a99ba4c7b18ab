#include <catch2/catch_amalgamated.hpp>

#include "permgrow/perm.hpp"
#include "permgrow/rng.hpp"

using namespace permgrow;

namespace {

Permutation cyc(const std::string& s, Point n) {
    return Permutation::from_cycles(s, n);
}

Permutation random_perm(Point n, RngStream& rng) {
    std::vector<Point> img(n);
    std::iota(img.begin(), img.end(), Point{1});
    for (Point i = n; i > 1; --i)
        std::swap(img[i - 1], img[rng.below(i)]);
    return Permutation::from_images(std::move(img));
}

}  // namespace

TEST_CASE("compose follows the right-action convention") {
    // (1 2 3) then (1 2): 1->2->1, 2->3->3, 3->1->2, i.e. (2 3)
    auto p = cyc("(1 2 3)", 3);
    auto q = cyc("(1 2)", 3);
    CHECK(compose(p, q) == cyc("(2 3)", 3));
    CHECK(compose(p, Permutation::identity(3)) == p);
    CHECK(compose(p, cyc("(1 3 2)", 3)).is_identity());
    CHECK_THROWS_AS(compose(p, Permutation::identity(4)), DegreeError);
}

TEST_CASE("inverse") {
    CHECK(inverse(cyc("(1 2 3)", 3)) == cyc("(1 3 2)", 3));
    CHECK(inverse(Permutation::identity(5)).is_identity());
    auto t = cyc("(2 5)", 5);
    CHECK(inverse(t) == t);
}

TEST_CASE("commutator") {
    auto g = cyc("(1 2 3)", 5);
    auto h = cyc("(3 4 5)", 5);
    CHECK(commutator(g, h) == cyc("(1 3 4)", 5));
    CHECK(commutator(g, g).is_identity());
    // disjoint supports commute
    CHECK(commutator(cyc("(1 2)", 5), cyc("(4 5)", 5)).is_identity());
    CHECK_THROWS_AS(commutator(g, Permutation::identity(3)), DegreeError);
}

TEST_CASE("support and cycle type") {
    CHECK(support(Permutation::identity(4)).empty());
    auto p = cyc("(1 2)(3 4 5)", 6);
    auto s = support(p);
    CHECK(s.members() == std::vector<Point>{1, 2, 3, 4, 5});
    auto ct = cycle_type(p);
    CHECK(ct.lengths == std::vector<Point>{2, 3});
    CHECK(ct.fixed_points == 1);
    auto full = cyc("(1 2 3 4 5 6)", 6);
    CHECK(support(full).size() == 6);
}

TEST_CASE("restrict") {
    auto p = cyc("(1 2)(3 4)", 4);
    auto r = restrict(p, PointSet(4, {3, 4}));
    CHECK(r.degree() == 2);
    CHECK(r == cyc("(1 2)", 2));
    CHECK(restrict(Permutation::identity(6), PointSet(6, {2, 4, 6})).is_identity());
    CHECK_THROWS_AS(restrict(cyc("(1 2 3)", 3), PointSet(3, {1, 2})),
                    NotInvariantError);
}

TEST_CASE("power and order") {
    auto p = cyc("(1 2)(3 4 5)", 5);
    CHECK(order(p) == 6);
    CHECK(power(p, 3) == cyc("(1 2)", 5));
    CHECK(power(p, order(p)).is_identity());
    CHECK(power(p, -1) == inverse(p));
    // huge exponent reduced per cycle
    Big huge = Big(1) << 200;
    CHECK(power(p, huge) == power(p, (huge % 6).convert_to<long>()));
}

TEST_CASE("cycle notation round trip and parse errors") {
    auto p = cyc("(1 2 3)(4 5)", 5);
    CHECK(p.to_cycle_string() == "(1 2 3)(4 5)");
    CHECK(Permutation::from_cycles(p.to_cycle_string(), 5) == p);
    CHECK(Permutation::from_cycles("()", 3).is_identity());
    CHECK(Permutation::from_cycles("e", 3).is_identity());
    CHECK(Permutation::from_cycles("(1,2,3)", 3) == cyc("(1 2 3)", 3));
    CHECK_THROWS_AS(Permutation::from_cycles("(1 2 7)", 5), ParseError);
    CHECK_THROWS_AS(Permutation::from_cycles("(1 2)(2 3)", 5), ParseError);
    CHECK_THROWS_AS(Permutation::from_cycles("(1 2", 5), ParseError);
    CHECK_THROWS_AS(Permutation::from_images({1, 1, 3}), ParseError);
    CHECK_THROWS_AS(Permutation::from_images({1, 5, 3}), ParseError);
}

TEST_CASE("algebraic properties on random triples") {
    auto rng = RngStream::derive(7, "test-perm-props");
    for (int rep = 0; rep < 200; ++rep) {
        Point n = 2 + static_cast<Point>(rng.below(7));
        auto a = random_perm(n, rng);
        auto b = random_perm(n, rng);
        auto c = random_perm(n, rng);
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        CHECK(compose(a, inverse(a)).is_identity());
        CHECK(compose(inverse(a), a).is_identity());
        CHECK(support(compose(a, b)).size() <=
              support(a).size() + support(b).size());
        CHECK((commutator(a, b).is_identity()) ==
              (compose(a, b) == compose(b, a)));
        // restriction of a product equals product of restrictions when the
        // set is invariant under both factors
        PointSet orb = support(a);  // may not be invariant under b; test on full
        PointSet full = PointSet::full(n);
        CHECK(restrict(compose(a, b), full) ==
              compose(restrict(a, full), restrict(b, full)));
        // power depends only on k mod order
        Big ord = order(a);
        Big k = Big(rng.below(1'000'000'000));
        CHECK(power(a, k) == power(a, k % ord));
        CHECK(power(a, k + ord) == power(a, k));
    }
}

TEST_CASE("restriction multiplicativity on invariant sets") {
    auto rng = RngStream::derive(11, "test-perm-restrict");
    for (int rep = 0; rep < 100; ++rep) {
        // build two permutations supported inside {1..4} of degree 8
        Point n = 8;
        auto a = random_perm(4, rng);
        auto b = random_perm(4, rng);
        std::vector<Point> ia(n), ib(n);
        std::iota(ia.begin(), ia.end(), Point{1});
        std::iota(ib.begin(), ib.end(), Point{1});
        for (Point i = 1; i <= 4; ++i) {
            ia[i - 1] = a.apply(i);
            ib[i - 1] = b.apply(i);
        }
        auto pa = Permutation::from_images(ia);
        auto pb = Permutation::from_images(ib);
        PointSet d(n, {1, 2, 3, 4});
        CHECK(restrict(compose(pa, pb), d) ==
              compose(restrict(pa, d), restrict(pb, d)));
    }
}
