#include <catch2/catch_amalgamated.hpp>

#include "permgrow/closure.hpp"
#include "permgrow/perm.hpp"
#include "permgrow/wordset.hpp"
#include "permgrow/diameter.hpp"

using namespace permgrow;

namespace {

GenSet adjacent_transpositions(Point n) {
    std::vector<Permutation> gens;
    for (Point i = 1; i < n; ++i)
        gens.push_back(Permutation::from_cycles(
            "(" + std::to_string(i) + " " + std::to_string(i + 1) + ")", n));
    return GenSet(n, std::move(gens)).symmetrized();
}

}  // namespace

TEST_CASE("genset flags and symmetrization") {
    auto c = Permutation::from_cycles("(1 2 3)", 3);
    GenSet raw(3, {c});
    CHECK_FALSE(raw.symmetric_closed());
    CHECK_FALSE(raw.contains_identity());
    auto sym = raw.symmetrized();
    CHECK(sym.symmetric_closed());
    CHECK(sym.contains_identity());
    CHECK(sym.size() == 3);  // c, e, c^{-1}
    // duplicates collapse
    GenSet dup(2, {Permutation::from_cycles("(1 2)", 2),
                   Permutation::from_cycles("(1 2)", 2),
                   Permutation::identity(2)});
    CHECK(dup.size() == 2);
}

TEST_CASE("ball expansion basics") {
    // A = {e, (1 2)} on n=2: ball of any radius is the 2-element group
    GenSet a2(2, {Permutation::identity(2), Permutation::from_cycles("(1 2)", 2)});
    auto b = Ball::expand(a2, 5);
    CHECK(b.size() == 2);
    CHECK(b.closed());
    CHECK(b.length_at(0) == 0);
    CHECK(b.length_at(1) == 1);

    // radius 0 is only the identity
    auto b0 = Ball::expand(a2, 0);
    CHECK(b0.size() == 1);
    CHECK(b0.perm_at(0).is_identity());

    // non-symmetric input is rejected
    GenSet bad(3, {Permutation::from_cycles("(1 2 3)", 3)});
    CHECK_THROWS_AS(Ball::expand(bad, 2), ConventionError);
}

TEST_CASE("ball over Sym(4) adjacent transpositions reaches 24 at radius 6") {
    auto a = adjacent_transpositions(4);
    auto b = Ball::expand(a, 6);
    CHECK(b.size() == 24);
    std::uint64_t maxlen = 0;
    for (std::size_t i = 0; i < b.size(); ++i)
        maxlen = std::max(maxlen, b.length_at(i));
    CHECK(maxlen == 6);
    // radius 5 must be strictly smaller
    CHECK(Ball::expand(a, 5).size() < 24);
}

TEST_CASE("ball lengths are geodesic and nested") {
    auto a = adjacent_transpositions(4);
    auto b6 = Ball::expand(a, 6);
    auto b3 = Ball::expand(a, 3);
    for (std::size_t i = 0; i < b3.size(); ++i) {
        auto j = b6.find(b3.perm_at(i));
        REQUIRE(j >= 0);
        CHECK(b6.length_at(static_cast<std::size_t>(j)) == b3.length_at(i));
    }
    // nesting
    for (std::size_t i = 0; i < b3.size(); ++i)
        CHECK(b6.contains(b3.perm_at(i)));
}

TEST_CASE("ball witnesses evaluate to their elements") {
    auto a = adjacent_transpositions(5);
    auto b = Ball::expand(a, 4);
    for (std::size_t i = 0; i < b.size(); ++i) {
        auto w = b.element_at(i);
        CHECK(witness_verify(w, *b.base()));
        CHECK(Big(w.witness->size()) == w.length_bound);
    }
}

TEST_CASE("truncation is explicit") {
    auto a = adjacent_transpositions(5);
    auto b = Ball::expand(a, 10, 30);
    CHECK(b.truncated());
    CHECK(b.size() <= 30);
    CHECK_FALSE(b.closed());
}

TEST_CASE("stabilizer filters") {
    auto a = adjacent_transpositions(4);
    auto full = Ball::expand(a, 6);  // all of Sym(4)
    auto pw = filter_pointwise_stab(full, PointSet(4, {1, 2, 3}));
    REQUIRE(pw.size() == 1);
    CHECK(pw.perm_at(0).is_identity());

    auto a3 = adjacent_transpositions(3);
    auto s3 = Ball::expand(a3, 3);
    REQUIRE(s3.size() == 6);
    auto sw = filter_setwise_stab(s3, PointSet(3, {1, 2}));
    CHECK(sw.size() == 2);  // e and (1 2)

    // empty set filters nothing
    auto none = filter_pointwise_stab(full, PointSet(4, {}));
    CHECK(none.size() == full.size());

    // pointwise subset of setwise
    for (Point p1 = 1; p1 <= 3; ++p1) {
        PointSet sigma(4, {p1, static_cast<Point>(p1 + 1)});
        auto fp = filter_pointwise_stab(full, sigma);
        auto fs = filter_setwise_stab(full, sigma);
        for (std::size_t i = 0; i < fp.size(); ++i)
            CHECK(fs.contains(fp.perm_at(i)));
    }

    CHECK_THROWS_AS(filter_pointwise_stab(full, PointSet(5, {1})), DegreeError);
}

TEST_CASE("witness verification catches corruption") {
    auto a = adjacent_transpositions(4);
    auto b = Ball::expand(a, 6);
    auto w = b.element_at(b.size() - 1);
    REQUIRE(witness_verify(w, *b.base()));
    auto bad = w;
    (*bad.witness)[0] = (*bad.witness)[0] == 1 ? 2 : 1;
    CHECK_FALSE(witness_verify(bad, *b.base()));
    WordElement no_witness{w.perm, w.length_bound, std::nullopt, w.base};
    CHECK_THROWS_AS(witness_verify(no_witness, *b.base()), NoWitnessError);
    // empty witness with identity perm
    auto id = WordElement::identity_of(b.base());
    CHECK(witness_verify(id, *b.base()));
}

TEST_CASE("product_bound adds lengths and concatenates witnesses") {
    auto a = adjacent_transpositions(4);
    auto b = Ball::expand(a, 6);
    auto x = b.element_at(5);
    auto xinv = inverse_bound(x);
    auto prod = product_bound(x, xinv);
    CHECK(prod.perm.is_identity());
    CHECK(prod.length_bound == 2 * x.length_bound);
    CHECK(witness_verify(prod, *b.base()));

    auto e = WordElement::identity_of(b.base());
    auto same = product_bound(x, e);
    CHECK(same.perm == x.perm);
    CHECK(same.length_bound == x.length_bound);

    GenSet other(4, {Permutation::identity(4)});
    WordElement foreign{Permutation::identity(4), 0, Word{},
                        std::make_shared<const GenSet>(other)};
    CHECK_THROWS_AS(product_bound(x, foreign), BaseMismatchError);
}

TEST_CASE("ball sizes stabilize exactly at the group") {
    auto a = adjacent_transpositions(4);
    std::size_t prev = 0;
    for (int k = 0; k <= 8; ++k) {
        auto b = Ball::expand(a, k);
        CHECK(b.size() >= prev);
        prev = b.size();
    }
    auto grp = Ball::expand_group(a);
    CHECK(grp.size() == 24);
    CHECK(grp.closed());
    CHECK(Big(closure(a.generators()).size()) == Big(grp.size()));
}

TEST_CASE("ball stabilization radius equals the exact diameter") {
    // |Ball(A,k)| stabilizes exactly when the ball is <A>, at the radius the
    // BFS engine reports as the diameter
    auto a = adjacent_transpositions(5);
    auto diam = bfs_diameter(GenSet(5, a.generators()));
    std::size_t prev = 0;
    std::uint32_t stabilized_at = 0;
    for (std::uint32_t k = 0; k <= diam.diameter + 2; ++k) {
        auto b = Ball::expand(a, k);
        if (b.size() == prev && stabilized_at == 0) stabilized_at = k - 1;
        prev = b.size();
    }
    CHECK(stabilized_at == diam.diameter);
    CHECK(Big(prev) == diam.group_order);
}
