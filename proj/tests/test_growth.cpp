#include <catch2/catch_amalgamated.hpp>

#include "permgrow/growth.hpp"

using namespace permgrow;

namespace {

Permutation cyc(const std::string& s, Point n) {
    return Permutation::from_cycles(s, n);
}

GenSet standard_gens(Point n) {
    std::string s = "(";
    for (Point i = 1; i <= n; ++i) s += std::to_string(i) + (i < n ? " " : ")");
    return GenSet(n, {cyc("(1 2)", n), cyc(s, n)});
}

Ball group_ball(const GenSet& gens) {
    auto b = Ball::expand(gens.symmetrized(), 100000);
    REQUIRE(b.closed());
    return b;
}

}  // namespace

TEST_CASE("creation dichotomy: growth branch by hand") {
    // B = {e, (1 2)(3 4)} in Sym(4), Y generating Alt(4)
    auto ball = group_ball(standard_gens(4));
    std::vector<WordElement> b_plus{
        WordElement::identity_of(ball.base()),
        ball.element_at(static_cast<std::size_t>(ball.find(cyc("(1 2)(3 4)", 4))))};
    std::vector<WordElement> y{
        ball.element_at(static_cast<std::size_t>(ball.find(cyc("(1 2 3)", 4)))),
        ball.element_at(static_cast<std::size_t>(ball.find(cyc("(1 2 4)", 4))))};
    auto alt4 = closure({cyc("(1 2 3)", 4), cyc("(1 2 4)", 4)});
    auto out = creation_step(b_plus, y, PointSet::full(4), alt4);
    CHECK_FALSE(out.exit);
    CHECK(out.created_distinct >= 2);  // |B|^{1/2} = sqrt(2) rounds up to 2
    CHECK(out.required == 2);
    // raw conjugation sanity: (1 2 3)^{(1 2)(3 4)} = (1 4 2)
    CHECK(conjugate(cyc("(1 2 3)", 4), cyc("(1 2)(3 4)", 4)) == cyc("(1 4 2)", 4));
}

TEST_CASE("creation dichotomy: exit branch from a centralizing element") {
    // degree 6: Y acts on {1..4}, B contains (5 6) commuting with Y
    auto ball = group_ball(standard_gens(6));
    std::vector<WordElement> b_plus{
        WordElement::identity_of(ball.base()),
        ball.element_at(static_cast<std::size_t>(ball.find(cyc("(5 6)", 6))))};
    std::vector<WordElement> y{
        ball.element_at(static_cast<std::size_t>(ball.find(cyc("(1 2 3)", 6)))),
        ball.element_at(static_cast<std::size_t>(ball.find(cyc("(1 2 4)", 6))))};
    PointSet gamma(6, {1, 2, 3, 4});
    auto h_minus = closure({cyc("(1 2 3)", 6), cyc("(1 2 4)", 6), cyc("(5 6)", 6)});
    auto out = creation_step(b_plus, y, gamma, h_minus);
    REQUIRE(out.exit);
    CHECK(out.exit_element.perm == cyc("(5 6)", 6));
    CHECK(fixes_pointwise(out.exit_element.perm, gamma));

    // B = {e} has nothing to collide: growth branch with |W| >= 1
    std::vector<WordElement> only_e{WordElement::identity_of(ball.base())};
    auto out1 = creation_step(only_e, y, gamma, h_minus);
    CHECK_FALSE(out1.exit);
    CHECK(out1.created_distinct >= 1);
}

TEST_CASE("creation guards") {
    auto ball = group_ball(standard_gens(4));
    std::vector<WordElement> b_plus{WordElement::identity_of(ball.base())};
    // Y not 2-transitive on Gamma
    std::vector<WordElement> y{
        ball.element_at(static_cast<std::size_t>(ball.find(cyc("(1 2 3)", 4))))};
    auto h = closure({cyc("(1 2 3)", 4)});
    CHECK_THROWS_AS(creation_step(b_plus, y, PointSet::full(4), h), ParamError);
}

TEST_CASE("setup step on the full Sym(6) ball") {
    auto ball = group_ball(standard_gens(6));
    auto chain = make_chain(ball, {1, 2});
    GrowthConfig cfg;
    cfg.orbit_threshold = 0.5;
    cfg.setup_fraction = 0.51;
    cfg.descent_fraction = 0.5;
    Ledger ledger;
    auto setup = setup_step(ball, chain, cfg, ledger);
    CHECK(setup.kernel_identity_checked);
    CHECK(setup.section.delta.members() == std::vector<Point>{1});
    // B- fixes 1; its big orbit {2..6} is invariant under <B+>
    CHECK(setup.gamma.members() == std::vector<Point>{2, 3, 4, 5, 6});
    CHECK(setup.gamma_invariant_under_bplus);
    for (const auto& w : setup.b_minus)
        CHECK(fixes_pointwise(w.perm, setup.section.delta));
}

TEST_CASE("classification: alternating section vs descent") {
    GrowthConfig cfg;
    // Alt(5) on {1..5} inside degree 6
    auto alt5 = closure({cyc("(1 2 3)", 6), cyc("(3 4 5)", 6)});
    PointSet gamma(6, {1, 2, 3, 4, 5});
    auto c = classify_descent(alt5, gamma, 6, cfg);
    CHECK_FALSE(c.full_alt_section);  // 5 <= 0.95 * 6 = 5.7: too small
    CHECK(c.descent_degree == Catch::Approx(5.7));

    GrowthConfig loose = cfg;
    loose.descent_fraction = 0.8;
    auto c2 = classify_descent(alt5, gamma, 6, loose);
    CHECK(c2.full_alt_section);  // 5 > 4.8 and the section is Alt(5)
    CHECK(c2.section_order == 60);

    // dihedral-like small section descends
    auto d4 = closure({cyc("(1 2 3 4)", 4), cyc("(1 3)", 4)});
    auto c3 = classify_descent(d4, PointSet::full(4), 4, loose);
    CHECK_FALSE(c3.full_alt_section);
    CHECK(c3.section_order == 8);

    // trivial closure descends
    auto c4 = classify_descent({Permutation::identity(4)}, PointSet(4, {1}), 4,
                               loose);
    CHECK_FALSE(c4.full_alt_section);
}

TEST_CASE("growth round reaches Extended on Sym(6) with relaxed constants") {
    auto ball = group_ball(standard_gens(6));
    auto chain = make_chain(ball, {1, 2});
    GrowthConfig cfg;
    cfg.orbit_threshold = 0.5;
    cfg.setup_fraction = 0.51;
    cfg.descent_fraction = 0.5;
    cfg.waive_asymptotic_guards = true;  // m >= (log 6)^2 does not hold at m=1
    auto out = growth_round(ball, chain, cfg, 7);
    REQUIRE(out.kind == GrowthOutcome::Kind::Extended);
    CHECK(out.added_points >= 1);
    CHECK(out.chain.levels.size() > chain.levels.size());
    for (auto r : out.chain.orbit_sizes())
        CHECK(static_cast<double>(r) >= 0.5 * 6 - 1e-9);
    REQUIRE(out.creation.has_value());
    CHECK_FALSE(out.creation->exit);
    CHECK(Big(out.creation->created_distinct) >= out.creation->required);
    CHECK(static_cast<double>(out.organiser_rounds) - 1 < 60 * std::log(6.0));
    // exponent ledger stays within n^{c3 log n} symbolically
    for (const auto& e : out.ledger.entries)
        CHECK(e.log_value <= 750.0 * std::pow(std::log(6.0), 2) + 1e-9);
}

TEST_CASE("growth round exits on an engineered split instance") {
    // <A> = Sym({1..6}) x Sym({7,8}): the creation step finds (7 8)
    std::vector<Permutation> gens;
    {
        auto s6 = standard_gens(6);
        for (const auto& g : s6.generators()) {
            std::vector<Point> img(8);
            std::iota(img.begin(), img.end(), Point{1});
            for (Point i = 1; i <= 6; ++i) img[i - 1] = g.apply(i);
            gens.push_back(Permutation::from_images(std::move(img)));
        }
        gens.push_back(cyc("(7 8)", 8));
    }
    auto ball = group_ball(GenSet(8, gens));
    auto chain = make_chain(ball, {1, 2});
    GrowthConfig cfg;
    cfg.orbit_threshold = 0.5;
    cfg.setup_fraction = 0.51;
    cfg.descent_fraction = 0.5;
    cfg.waive_asymptotic_guards = true;
    auto out = growth_round(ball, chain, cfg, 3);
    REQUIRE(out.kind == GrowthOutcome::Kind::Exit);
    REQUIRE(out.exit_element.has_value());
    CHECK(out.exit_element->perm == cyc("(7 8)", 8));
    CHECK(support(out.exit_element->perm).size() <= (1.0 - 0.5) * 8);
    CHECK(witness_verify(*out.exit_element, *ball.base()));
}

TEST_CASE("growth round descends with production constants at desk scale") {
    auto ball = group_ball(standard_gens(5));
    auto chain = make_chain(ball, {1, 2, 3, 4});
    GrowthConfig cfg;
    cfg.waive_asymptotic_guards = true;
    auto out = growth_round(ball, chain, cfg, 5);
    CHECK(out.kind == GrowthOutcome::Kind::Descent);
    CHECK(out.descent_degree == Catch::Approx(0.95 * 5));
    CHECK_FALSE(out.ledger.waivers.empty());
}

TEST_CASE("growth round enforces hypotheses without the waiver") {
    auto ball = group_ball(standard_gens(5));
    auto chain = make_chain(ball, {1, 2});
    GrowthConfig cfg;  // defaults keep 9/10 and m >= (log n)^2
    CHECK_THROWS_AS(growth_round(ball, chain, cfg, 5), HypothesisError);
}

TEST_CASE("ledger lengths re-derive from witnesses") {
    auto ball = group_ball(standard_gens(6));
    auto chain = make_chain(ball, {1, 2});
    GrowthConfig cfg;
    cfg.orbit_threshold = 0.5;
    cfg.setup_fraction = 0.51;
    cfg.descent_fraction = 0.5;
    cfg.waive_asymptotic_guards = true;
    auto out = growth_round(ball, chain, cfg, 7);
    REQUIRE(out.creation.has_value());
    for (const auto& w : out.creation->created) {
        REQUIRE(w.witness.has_value());
        CHECK(Big(w.witness->size()) == w.length_bound);
        CHECK(witness_verify(w, *ball.base()));
    }
}

TEST_CASE("desk main loop terminates via descent on Sym(5) and Sym(6)") {
    GrowthConfig cfg;
    cfg.waive_asymptotic_guards = true;
    for (Point n : {Point(5), Point(6)}) {
        auto res = main_loop_desk(standard_gens(n), cfg, 11);
        CHECK(res.mode == "desk");
        CHECK((res.last.kind == GrowthOutcome::Kind::Descent ||
               res.last.kind == GrowthOutcome::Kind::Exit));
        CHECK(res.exact_diameter.has_value());
        CHECK(res.diameter_within_f2);
        CHECK_FALSE(res.ledger.entries.empty());
        // every waiver is visible
        CHECK_FALSE(res.ledger.waivers.empty());
    }
}

TEST_CASE("desk main loop refuses non-full groups") {
    GenSet mix(6, {cyc("(1 2)", 6), cyc("(1 2 3)", 6)});
    GrowthConfig cfg;
    cfg.waive_asymptotic_guards = true;
    CHECK_THROWS_AS(main_loop_desk(mix, cfg, 1), NotFullGroupError);
}

TEST_CASE("trace mode is symbolic and fast") {
    GrowthConfig cfg;
    auto t0 = std::chrono::steady_clock::now();
    auto res = main_loop_trace(1'000'000, cfg);
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
    CHECK(dt < 1.0);
    CHECK(res.mode == "trace");
    CHECK(res.iterations >= 1);
    CHECK(res.bound.log_f1 > 0);
    // formula-level check of the headline constant
    CHECK(std::abs(res.bound.ratio - 49071.0) / 49071.0 < 0.01);
    // iteration count respects c' log n log log n at large n
    CHECK(static_cast<double>(res.iterations) <= res.iteration_cap + 2);
}

TEST_CASE("trace ledger exponents are monotone") {
    GrowthConfig cfg;
    auto res = main_loop_trace(1000, cfg);
    double prev = -1;
    for (const auto& e : res.ledger.entries) {
        CHECK(e.log_value >= prev - 1e-9);
        prev = e.log_value;
    }
}

TEST_CASE("claimed word lengths dominate exact geodesics in desk mode") {
    auto ball = group_ball(standard_gens(6));
    auto chain = make_chain(ball, {1, 2});
    GrowthConfig cfg;
    cfg.orbit_threshold = 0.5;
    cfg.setup_fraction = 0.51;
    cfg.descent_fraction = 0.5;
    cfg.waive_asymptotic_guards = true;
    auto out = growth_round(ball, chain, cfg, 7);
    REQUIRE(out.creation.has_value());
    for (std::size_t i = 0; i < std::min<std::size_t>(out.creation->created.size(), 10); ++i) {
        const auto& w = out.creation->created[i];
        auto idx = ball.find(w.perm);
        REQUIRE(idx >= 0);  // the element lies in <A>
        CHECK(Big(ball.length_at(static_cast<std::size_t>(idx))) <= w.length_bound);
    }
}
