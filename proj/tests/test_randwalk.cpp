#include <catch2/catch_amalgamated.hpp>

#include "permgrow/closure.hpp"
#include "permgrow/randwalk.hpp"

using namespace permgrow;

namespace {

Permutation cyc(const std::string& s, Point n) {
    return Permutation::from_cycles(s, n);
}

GenSet cycle_and_swap(Point n) {
    std::string s = "(";
    for (Point i = 1; i <= n; ++i) s += std::to_string(i) + (i < n ? " " : ")");
    return GenSet(n, {cyc(s, n), cyc("(1 2)", n)}).symmetrized();
}

}  // namespace

TEST_CASE("mixing bound formula") {
    CHECK(mixing_bound(20, 6, 0.25) == 10517);
    CHECK(mixing_bound(1, 3, 0.5) == Big(static_cast<long long>(
                                         std::ceil(3 * std::log(2.0)))));
    CHECK_THROWS_AS(mixing_bound(20, 6, 1.5), ParamError);
    CHECK_THROWS_AS(mixing_bound(20, 6, 0.0), ParamError);
    CHECK_THROWS_AS(mixing_bound(0, 6, 0.5), ParamError);
}

TEST_CASE("exact mixing verification on the pair action of Sym(5)") {
    auto a = cycle_and_swap(5);
    auto rep = mixing_verify_small(a, 2, 0.25);
    CHECK(rep.n_states == 20);
    CHECK(rep.entries_ok);
    CHECK(rep.lambda2_ok);
    CHECK(rep.lambda2 <= 1.0 - 1.0 / (20.0 * 20.0 * rep.valency) + 1e-12);
}

TEST_CASE("mixing verification passes for 2-transitive proper subgroups") {
    // Alt(5) generators are 2-transitive on pairs
    GenSet alt5(5, {cyc("(1 2 3)", 5), cyc("(3 4 5)", 5)});
    auto rep = mixing_verify_small(alt5, 2, 0.25);
    CHECK(rep.entries_ok);
}

TEST_CASE("mixing verification rejects intransitive tuple actions") {
    GenSet stuck(5, {cyc("(1 2)", 5)});
    CHECK_THROWS_AS(mixing_verify_small(stuck, 2, 0.25), NotTransitiveError);
}

TEST_CASE("walk sampling is deterministic and length-certified") {
    auto a = cycle_and_swap(5);
    auto base = std::make_shared<const GenSet>(a);
    WalkSampler w(base, 50, 12345);
    auto s1 = walk_sample(w, 5);
    auto s2 = walk_sample(w, 5);
    REQUIRE(s1.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(s1[i].perm == s2[i].perm);
        CHECK(s1[i].length_bound == s2[i].length_bound);
        CHECK(s1[i].length_bound <= 50);
        CHECK(witness_verify(s1[i], *base));
    }
    // zero steps: identity
    WalkSampler w0(base, 0, 7);
    auto s0 = walk_sample(w0, 2);
    CHECK(s0[0].perm.is_identity());
    CHECK(s0[1].perm.is_identity());
    // non-symmetric base rejected
    GenSet raw(5, {cyc("(1 2 3 4 5)", 5)});
    CHECK_THROWS_AS(WalkSampler(std::make_shared<const GenSet>(raw), 5, 1),
                    ConventionError);
}

TEST_CASE("walk distribution approaches uniform on pairs") {
    // sample pair images and compare with the exact stationary distribution
    auto a = cycle_and_swap(5);
    auto base = std::make_shared<const GenSet>(a);
    const Big ell = mixing_bound(20, 5, 0.25);
    WalkSampler w(base, ell, 99);
    const std::size_t samples = 4000;
    auto draws = walk_sample(w, samples);
    std::map<std::pair<Point, Point>, std::size_t> counts;
    for (const auto& d : draws)
        ++counts[{d.perm.apply(1), d.perm.apply(2)}];
    const double expect = static_cast<double>(samples) / 20.0;
    const double sigma = std::sqrt(expect * (1 - 1.0 / 20.0));
    for (const auto& [pair, c] : counts) {
        (void)pair;
        CHECK(std::abs(static_cast<double>(c) - expect) <= 5 * sigma);
    }
}

TEST_CASE("random subproducts reach half support") {
    auto a = cycle_and_swap(6);
    auto g = random_subproduct_large_support(a, 424242);
    CHECK(2 * support(g.perm).size() >= 6);
    CHECK(witness_verify(g, a));

    // n = 2 degenerate
    GenSet two(2, {cyc("(1 2)", 2)});
    auto g2 = random_subproduct_large_support(two.symmetrized(), 1);
    CHECK(support(g2.perm).size() == 2);

    // a set moving only {1,2} cannot serve every point
    GenSet stuck(4, {cyc("(1 2)", 4)});
    CHECK_THROWS_AS(random_subproduct_large_support(stuck.symmetrized(), 1),
                    NotTransitiveError);
}

TEST_CASE("random subproduct support concentration") {
    auto a = cycle_and_swap(7);
    double total = 0;
    const int runs = 1000;
    for (int i = 0; i < runs; ++i) {
        auto g = random_subproduct_large_support(a, 1000 + i);
        total += static_cast<double>(support(g.perm).size());
    }
    const double mean = total / runs;
    CHECK(mean >= 7.0 / 2 - 3 * std::sqrt(7.0));
}

TEST_CASE("gv codes meet their contracts") {
    auto c4 = gv_code(4);
    CHECK(c4.k == 9);
    CHECK(c4.min_distance == 3);
    CHECK(c4.words.size() > 4);
    c4.verify_pairwise();

    auto c2 = gv_code(2);
    CHECK(c2.k == 5);
    CHECK(c2.min_distance == 2);
    CHECK(c2.words.size() > 2);
    c2.verify_pairwise();

    for (std::uint64_t n : {16ULL, 100ULL, 500ULL}) {
        auto c = gv_code(n);
        CHECK(c.words.size() > n);
        CHECK(static_cast<double>(c.min_distance) >
              std::log2(static_cast<double>(n)));
        c.verify_pairwise();
    }
    CHECK_THROWS_AS(gv_code(1), ParamError);
}

TEST_CASE("gv code determinism") {
    auto a = gv_code(64);
    auto b = gv_code(64);
    CHECK(a.words == b.words);
}

TEST_CASE("few orbits pair") {
    auto a = cycle_and_swap(6);
    auto res = few_orbits_pair(a, 7);
    CHECK(res.orbit_bound == Catch::Approx(175.0 * std::pow(std::log(6.0), 2)));
    CHECK(static_cast<double>(res.orbit_count) <= res.orbit_bound);
    CHECK(res.orbit_count >= 1);
    CHECK(witness_verify(res.h, *res.h.base));

    GenSet stuck(6, {cyc("(1 2)", 6), cyc("(3 4)", 6)});
    CHECK_THROWS_AS(few_orbits_pair(stuck.symmetrized(), 7), NotFullGroupError);
}

TEST_CASE("transitive triples") {
    auto a = cycle_and_swap(6);
    auto res = transitive_triple(a, 11);
    CHECK(is_transitive({res.g1.perm, res.g2.perm, res.g3.perm}, 6));
    CHECK(witness_verify(res.g1, *res.g1.base));
    CHECK(witness_verify(res.g3, *res.g3.base));

    // degenerate n = 1
    GenSet one(1, {Permutation::identity(1)});
    auto res1 = transitive_triple(one, 3);
    CHECK(res1.g1.perm.is_identity());
}

TEST_CASE("k-transitive sets by stabilizer descent") {
    auto a = cycle_and_swap(7);
    auto res = k_transitive_set(a, 2, 5);
    CHECK(res.elements.size() <= 6);
    CHECK(res.verified);
    std::vector<Permutation> sperm;
    for (const auto& w : res.elements) {
        sperm.push_back(w.perm);
        CHECK(witness_verify(w, *w.base));
    }
    // 2-transitivity: the orbit of an ordered pair covers all 42
    CHECK(tuple_orbit(sperm, {1, 2}).size() == 42);

    // k = 1 reduces to a transitive triple
    auto res1 = k_transitive_set(cycle_and_swap(6), 1, 5);
    CHECK(res1.elements.size() == 3);
    std::vector<Permutation> t;
    for (const auto& w : res1.elements) t.push_back(w.perm);
    CHECK(is_transitive(t, 6));

    CHECK_THROWS_AS(k_transitive_set(cycle_and_swap(6), 2, 5), ParamError);
}
