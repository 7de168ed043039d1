#include <doctest.h>

#include <cmath>

#include "gmfg/graphon.hpp"

using namespace gmfg;

namespace {

GraphonSpec sbm_two_communities() {
    SbmGraphon g;
    g.boundaries = {0.7, 1.0};
    g.rates = {{0.9, 0.3}, {0.3, 0.9}};
    return GraphonSpec(g);
}

}  // namespace

TEST_CASE("constant graphon evaluates to p everywhere") {
    const GraphonSpec spec{ConstantGraphon{0.5}};
    CHECK(evaluate(spec, 1, 0.0, 0.0) == 0.5);
    CHECK(evaluate(spec, 1, 0.3, 0.9) == 0.5);
    CHECK(evaluate(spec, 1, 1.0, 1.0) == 0.5);
}

TEST_CASE("exp graphon matches its closed form") {
    const GraphonSpec spec{ExpGraphon{3.0}};
    CHECK(evaluate(spec, 1, 0.0, 0.5) == 0.0);  // alpha*beta = 0 forces weight 0

    // Formula oracle evaluated directly.
    const double x = std::exp(3.0);
    const double expected = 2.0 * x / (1.0 + x) - 1.0;
    CHECK(evaluate(spec, 1, 1.0, 1.0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(evaluate(spec, 1, 1.0, 1.0) == doctest::Approx(0.905148).epsilon(1e-6));
    CHECK(expected == doctest::Approx((x - 1.0) / (x + 1.0)).epsilon(1e-15));
}

TEST_CASE("sbm graphon resolves communities from cumulative boundaries") {
    const GraphonSpec spec = sbm_two_communities();
    CHECK(evaluate(spec, 1, 0.1, 0.2) == 0.9);
    CHECK(evaluate(spec, 1, 0.1, 0.8) == 0.3);
    CHECK(evaluate(spec, 1, 0.8, 0.1) == 0.3);
    CHECK(evaluate(spec, 1, 0.75, 0.95) == 0.9);
    // Exact boundary belongs to the left community.
    CHECK(evaluate(spec, 1, 0.7, 0.1) == 0.9);
    CHECK(evaluate(spec, 1, 0.0, 0.0) == 0.9);
}

TEST_CASE("evaluate validates inputs") {
    const GraphonSpec spec{ConstantGraphon{0.5}};
    CHECK_THROWS_AS(evaluate(spec, 1, -0.1, 0.5), ValidationError);
    CHECK_THROWS_AS(evaluate(spec, 1, 0.5, 1.1), ValidationError);
    CHECK_THROWS_AS(evaluate(GraphonSpec{ConstantGraphon{1.5}}, 1, 0.5, 0.5), ValidationError);
    CHECK_THROWS_AS(evaluate(GraphonSpec{ExpGraphon{-1.0}}, 1, 0.5, 0.5), ValidationError);

    SbmGraphon bad;
    bad.boundaries = {0.8, 0.7, 1.0};
    bad.rates = {{0.9, 0.3, 0.1}, {0.3, 0.9, 0.1}, {0.1, 0.1, 0.9}};
    CHECK_THROWS_AS(evaluate(GraphonSpec{bad}, 1, 0.5, 0.5), ValidationError);

    SbmGraphon asym;
    asym.boundaries = {0.5, 1.0};
    asym.rates = {{0.9, 0.3}, {0.4, 0.9}};
    CHECK_THROWS_AS(evaluate(GraphonSpec{asym}, 1, 0.5, 0.5), ValidationError);
}

TEST_CASE("discretize constant graphon is all p") {
    const DiscreteGraphon g = discretize(GraphonSpec{ConstantGraphon{1.0}}, 3, 2);
    REQUIRE(g.n_agents == 3);
    REQUIRE(g.horizon == 2);
    for (int h = 0; h < 2; ++h)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(g.at(h, i, j) == 1.0);
}

TEST_CASE("discretize sbm partitions the grid at the boundary index") {
    const DiscreteGraphon g = discretize(sbm_two_communities(), 10, 1);
    // Grid-point oracle: agent i (1-based) sits at alpha = i/10, community 1
    // iff alpha <= 0.7, i.e. agents 1..7.
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const bool same = (i < 7) == (j < 7);
            CHECK(g.at(0, i, j) == (same ? 0.9 : 0.3));
        }
    }
}

TEST_CASE("discretize exp graphon matches pointwise evaluation") {
    const GraphonSpec spec{ExpGraphon{3.0}};
    const DiscreteGraphon g = discretize(spec, 2, 1);
    const auto w = [](double a, double b) {
        const double x = std::exp(3.0 * a * b);
        return 2.0 * x / (1.0 + x) - 1.0;
    };
    CHECK(g.at(0, 0, 0) == doctest::Approx(w(0.5, 0.5)).epsilon(1e-15));
    CHECK(g.at(0, 0, 1) == doctest::Approx(w(0.5, 1.0)).epsilon(1e-15));
    CHECK(g.at(0, 1, 0) == g.at(0, 0, 1));
    CHECK(g.at(0, 1, 1) == doctest::Approx(0.905148).epsilon(1e-6));
}

TEST_CASE("discretize output is exactly symmetric for every kind") {
    const GraphonSpec specs[] = {GraphonSpec{ConstantGraphon{0.25}},
                                 GraphonSpec{ExpGraphon{3.0}}, sbm_two_communities()};
    for (const auto& spec : specs) {
        const DiscreteGraphon g = discretize(spec, 17, 3);
        for (int h = 0; h < 3; ++h)
            for (int i = 0; i < 17; ++i)
                for (int j = 0; j < 17; ++j) CHECK(g.at(h, i, j) == g.at(h, j, i));
    }
}

TEST_CASE("refinement error of Lipschitz graphons shrinks like L/N") {
    // Estimates the Lipschitz constant by finite differences, then checks the
    // gap between the N-grid weights and the nearest odd points of the
    // 2N-grid stays within L/N.
    const GraphonSpec spec{ExpGraphon{3.0}};
    double lipschitz = 0.0;
    const int probe = 200;
    for (int k = 0; k < probe; ++k) {
        const double a = static_cast<double>(k) / probe;
        const double d = std::abs(evaluate(spec, 1, a + 1.0 / probe, 1.0) -
                                  evaluate(spec, 1, a, 1.0));
        lipschitz = std::max(lipschitz, d * probe);
    }
    const int n = 8;
    const DiscreteGraphon coarse = discretize(spec, n, 1);
    const DiscreteGraphon fine = discretize(spec, 2 * n, 1);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            worst = std::max(worst,
                             std::abs(coarse.at(0, i, j) - fine.at(0, 2 * i, 2 * j)));
    CHECK(worst <= lipschitz / n + 1e-12);
}

TEST_CASE("per-step specs broadcast or must match the horizon") {
    GraphonSpec per_step;
    per_step.steps = {StepGraphon{ConstantGraphon{0.2}}, StepGraphon{ConstantGraphon{0.8}}};
    const DiscreteGraphon g = discretize(per_step, 2, 2);
    CHECK(g.at(0, 0, 0) == 0.2);
    CHECK(g.at(1, 0, 0) == 0.8);
    CHECK_THROWS_AS(discretize(per_step, 2, 3), ValidationError);

    const DiscreteGraphon broadcast = discretize(GraphonSpec{ConstantGraphon{0.4}}, 2, 5);
    for (int h = 0; h < 5; ++h) CHECK(broadcast.at(h, 0, 1) == 0.4);
}

TEST_CASE("custom grid graphon uses half-open cells") {
    CustomGridGraphon grid;
    grid.values = {{0.1, 0.6}, {0.6, 0.9}};
    const GraphonSpec spec{grid};
    CHECK(evaluate(spec, 1, 0.0, 0.0) == 0.1);
    CHECK(evaluate(spec, 1, 0.5, 0.5) == 0.1);   // 0.5 closes the first cell
    CHECK(evaluate(spec, 1, 0.51, 0.5) == 0.6);
    CHECK(evaluate(spec, 1, 1.0, 1.0) == 0.9);
    CHECK(evaluate(spec, 1, 1e-13, 1e-13) == 0.1);  // below the cell tolerance
}
