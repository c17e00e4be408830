#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "normdyn/errors.hpp"
#include "normdyn/game_model.hpp"

using namespace normdyn;

namespace {

void check_rows(const GamePayoffs& g, const std::vector<std::vector<double>>& expected) {
    REQUIRE(g.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        for (std::size_t j = 0; j < expected.size(); ++j)
            CHECK(g(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));
}

}  // namespace

TEST_CASE("baseline matrix substitutes L, C, S, delta") {
    const GamePayoffs g = baseline_matrix({2.0, 1.0, 1.0, 0.5});
    CHECK(g.strategy_names() == std::vector<std::string>{"R", "O"});
    check_rows(g, {{1.0, 0.5}, {0.5, 1.0}});
    CHECK(is_coordination(g));
}

TEST_CASE("baseline matrix with zero mismatch cost has constant rows") {
    const GamePayoffs g = baseline_matrix({3.5, 1.25, 0.75, 0.0});
    check_rows(g, {{2.25, 2.25}, {0.75, 0.75}});
    CHECK_FALSE(is_coordination(g));

    const GamePayoffs zero = baseline_matrix({1.0, 1.0, 0.0, 0.0});
    check_rows(zero, {{0.0, 0.0}, {0.0, 0.0}});
}

TEST_CASE("baseline matrix rejects bad parameters") {
    CHECK_THROWS_AS(baseline_matrix({std::nan(""), 1, 1, 1}), InvalidParameter);
    CHECK_THROWS_AS(baseline_matrix({1, std::numeric_limits<double>::infinity(), 1, 1}),
                    InvalidParameter);
    CHECK_THROWS_AS(baseline_matrix({1, 1, 1, -0.1}), InvalidParameter);
}

TEST_CASE("extended matrix at the reference parameters with r = 2") {
    ExtendedParams p = reference_params();
    p.reflection_reward = 2.0;
    const GamePayoffs g = extended_matrix(p);
    CHECK(g.strategy_names() == std::vector<std::string>{"RR", "RS", "O", "M"});
    check_rows(g, {{2, 2, 1, -1}, {1.4, 1.4, 0.4, -0.4}, {0, 0, 2, 2}, {-1, -1, 1, 1}});
}

TEST_CASE("extended matrix degenerate cases") {
    ExtendedParams p = reference_params();
    p.reflection_reward = 0.0;
    p.reflection_effort = 0.0;
    for (double sigma : {0.0, 0.3, 1.0}) {
        p.superficial_factor = sigma;
        const GamePayoffs g = extended_matrix(p);
        CHECK(g.row(kRR) == std::vector<double>{p.a, p.a, p.b, p.b});
        CHECK(g.row(kRS) == g.row(kRR));
    }
    p = reference_params();
    p.misconduct_cost = 0.0;
    const GamePayoffs g = extended_matrix(p);
    CHECK(g.row(kO) == g.row(kM));
}

TEST_CASE("extended matrix keeps b - kappa in the RR-vs-M cell") {
    ExtendedParams p = reference_params();
    p.reflection_reward = 5.0;
    CHECK(extended_matrix(p)(kRR, kM) == doctest::Approx(p.b - p.reflection_effort));
}

TEST_CASE("extended matrix rejects sigma outside [0, 1] and negative costs") {
    ExtendedParams p = reference_params();
    p.superficial_factor = 1.01;
    CHECK_THROWS_AS(extended_matrix(p), InvalidParameter);
    p.superficial_factor = -0.01;
    CHECK_THROWS_AS(extended_matrix(p), InvalidParameter);
    p = reference_params();
    p.misconduct_cost = -1;
    CHECK_THROWS_AS(extended_matrix(p), InvalidParameter);
    p = reference_params();
    p.reflection_effort = -1;
    CHECK_THROWS_AS(extended_matrix(p), InvalidParameter);
    p = reference_params();
    p.a = std::nan("");
    CHECK_THROWS_AS(extended_matrix(p), InvalidParameter);
}

TEST_CASE("is_coordination edge cases") {
    CHECK(is_coordination(GamePayoffs({"x", "y"}, {{1, 0.5}, {0.5, 1}})));
    CHECK_FALSE(is_coordination(GamePayoffs({"x", "y"}, {{1, 1}, {1, 1}})));
    CHECK_FALSE(is_coordination(GamePayoffs({"x", "y"}, {{0, 1}, {1, 0}})));
    CHECK_THROWS_AS(is_coordination(extended_matrix(reference_params())), DimensionError);
}

TEST_CASE("GamePayoffs validates shape and entries") {
    CHECK_THROWS_AS(GamePayoffs({"a", "b"}, {{1, 2}}), DimensionError);
    CHECK_THROWS_AS(GamePayoffs({"a", "b"}, {{1, 2}, {3}}), DimensionError);
    CHECK_THROWS_AS(GamePayoffs({"a"}, {{std::numeric_limits<double>::infinity()}}),
                    InvalidParameter);
    const GamePayoffs g({"a", "b"}, {{1, 2}, {3, 4}});
    CHECK(g.index_of("b") == 1);
    CHECK_THROWS_AS(g.index_of("z"), DomainError);
    const GamePayoffs swapped = g.permuted({1, 0});
    CHECK(swapped(0, 0) == 4);
    CHECK(swapped(0, 1) == 3);
    CHECK(swapped.name(0) == "b");
}

TEST_CASE("property: positive legitimacy cost always yields a coordination game") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5, 5);
    std::uniform_real_distribution<double> pos(1e-6, 5);
    for (int trial = 0; trial < 500; ++trial) {
        const BaselineParams p{u(rng), u(rng), u(rng), pos(rng)};
        CHECK(is_coordination(baseline_matrix(p)));
    }
}

TEST_CASE("property: extended matrix is affine in r, kappa, tau and delta") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 3);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        ExtendedParams base{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), unit(rng), u(rng)};
        const double h = 0.5;
        for (double ExtendedParams::*field :
             {&ExtendedParams::reflection_reward, &ExtendedParams::reflection_effort,
              &ExtendedParams::misconduct_cost, &ExtendedParams::legitimacy_cost}) {
            ExtendedParams p1 = base, p2 = base;
            p1.*field += h;
            p2.*field += 2 * h;
            const GamePayoffs g0 = extended_matrix(base);
            const GamePayoffs g1 = extended_matrix(p1);
            const GamePayoffs g2 = extended_matrix(p2);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    CHECK(g2(i, j) - g1(i, j) == doctest::Approx(g1(i, j) - g0(i, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: sigma = 1 copies RR into RS; sigma = 0 gives the unreflected row") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 3);
    for (int trial = 0; trial < 100; ++trial) {
        ExtendedParams p{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), 1.0, u(rng)};
        GamePayoffs g = extended_matrix(p);
        for (std::size_t j = 0; j < 4; ++j) CHECK(g(kRS, j) == doctest::Approx(g(kRR, j)));

        p.superficial_factor = 0.0;
        g = extended_matrix(p);
        ExtendedParams plain = p;
        plain.reflection_reward = 0.0;
        plain.reflection_effort = 0.0;
        const GamePayoffs h = extended_matrix(plain);
        for (std::size_t j = 0; j < 4; ++j) CHECK(g(kRS, j) == doctest::Approx(h(kRR, j)));
    }
}
