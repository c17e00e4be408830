#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "normdyn/errors.hpp"
#include "normdyn/io.hpp"
#include "normdyn/sweeps.hpp"

using namespace normdyn;

namespace {

SweepSpec r_sweep(double lo, double hi, int count, double beta = 0.1) {
    SweepSpec spec;
    spec.base = reference_params();
    spec.dynamics = DynamicsConfig{100, beta, 1e-3};
    spec.axes = {Axis::range(SweepParam::reflection_reward, lo, hi, count)};
    spec.threads = 1;
    return spec;
}

SweepTable synthetic_table(const std::vector<double>& xs, const std::vector<double>& rr) {
    SweepTable t;
    t.axes = {SweepParam::reflection_reward};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        SweepRow row;
        row.index = i;
        row.r = xs[i];
        row.frequencies = {rr[i], 1 - rr[i], 0, 0};
        t.rows.push_back(row);
    }
    return t;
}

}  // namespace

TEST_CASE("axis ranges include both endpoints without drift") {
    const Axis a = Axis::range(SweepParam::reflection_reward, 0.0, 3.0, 61);
    REQUIRE(a.size() == 61);
    CHECK(a.values.front() == 0.0);
    CHECK(a.values.back() == 3.0);
    CHECK(a.values[20] == 0.0 + 20 * (3.0 / 60));
    CHECK_THROWS_AS(Axis::range(SweepParam::reflection_reward, 1.0, 1.0, 5), InvalidParameter);
    CHECK_THROWS_AS(Axis::range(SweepParam::reflection_reward, 2.0, 1.0, 5), InvalidParameter);
    CHECK_THROWS_AS(Axis::range(SweepParam::reflection_reward, 0.0, 1.0, 1), InvalidParameter);
    CHECK_THROWS_AS(Axis::list(SweepParam::selection_intensity, {}), InvalidParameter);
}

TEST_CASE("reference r-sweep: O dominates at r = 0, RR at r = 3") {
    const SweepTable t = run_sweep(r_sweep(0.0, 3.0, 13));
    REQUIRE(t.rows.size() == 13);
    CHECK(t.all_ok());
    const auto& first = t.rows.front().frequencies;
    const auto& last = t.rows.back().frequencies;
    CHECK(std::max_element(first.begin(), first.end()) - first.begin() == static_cast<long>(kO));
    CHECK(std::max_element(last.begin(), last.end()) - last.begin() == static_cast<long>(kRR));
    for (const SweepRow& row : t.rows) {
        CHECK(std::abs(std::accumulate(row.frequencies.begin(), row.frequencies.end(), 0.0) - 1.0) <= 1e-8);
        CHECK(row.kappa == 1.0);
        CHECK(row.beta == 0.1);
    }
}

TEST_CASE("degenerate two-point grid gives near-identical rows") {
    const SweepTable t = run_sweep(r_sweep(1.0, 1.0 + 1e-12, 2));
    REQUIRE(t.rows.size() == 2);
    for (std::size_t s = 0; s < 4; ++s)
        CHECK(t.rows[0].frequencies[s] == doctest::Approx(t.rows[1].frequencies[s]).epsilon(1e-9));
}

TEST_CASE("two-axis grids are row-major with the first axis outermost") {
    SweepSpec spec = r_sweep(0, 3, 4);
    spec.axes.insert(spec.axes.begin(), Axis::range(SweepParam::reflection_effort, 0.5, 1.5, 3));
    const SweepTable t = design_space_grid(spec);
    REQUIRE(t.rows.size() == 12);
    CHECK(t.rows[0].kappa == 0.5);
    CHECK(t.rows[3].kappa == 0.5);
    CHECK(t.rows[4].kappa == 1.0);
    CHECK(t.rows[1].r == 1.0);
    CHECK(t.rows[11].r == 3.0);
    CHECK(t.rows[11].kappa == 1.5);

    SweepSpec wrong = r_sweep(0, 3, 4);
    CHECK_THROWS_AS(design_space_grid(wrong), InvalidParameter);
    wrong.axes.push_back(Axis::list(SweepParam::selection_intensity, {0.1, 0.5}));
    CHECK_THROWS_AS(design_space_grid(wrong), InvalidParameter);
}

TEST_CASE("property: evaluation order does not change the table") {
    SweepSpec spec = r_sweep(0, 3, 7);
    spec.axes.push_back(Axis::range(SweepParam::reflection_effort, 0, 2, 5));
    const SweepTable reference = run_sweep(spec);
    std::vector<std::size_t> order(grid_size(spec));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(3);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<SweepRow> rows;
    for (std::size_t i : order) rows.push_back(evaluate_grid_point(spec, i));
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.index < b.index; });
    SweepTable shuffled;
    shuffled.axes = reference.axes;
    shuffled.rows = rows;
    CHECK(sweep_csv(shuffled) == sweep_csv(reference));

    spec.threads = 4;
    CHECK(sweep_csv(run_sweep(spec)) == sweep_csv(reference));
}

TEST_CASE("failed grid points are flagged and the sweep continues") {
    SweepSpec spec = r_sweep(0, 1, 3);
    spec.axes = {Axis::list(SweepParam::reflection_effort, {1.0, -1.0, 0.5})};
    const SweepTable t = run_sweep(spec);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].ok);
    CHECK_FALSE(t.rows[1].ok);
    CHECK(std::isnan(t.rows[1].frequencies[0]));
    CHECK_FALSE(t.rows[1].error.empty());
    CHECK(t.rows[2].ok);
    CHECK(t.failed_count() == 1);
}

TEST_CASE("sweep spec validation") {
    SweepSpec spec = r_sweep(0, 1, 3);
    spec.axes.clear();
    CHECK_THROWS_AS(run_sweep(spec), InvalidParameter);
    spec = r_sweep(0, 1, 3);
    spec.axes.push_back(spec.axes.front());
    CHECK_THROWS_AS(run_sweep(spec), InvalidParameter);
    spec = r_sweep(0, 1, 3);
    spec.engine = Engine::monte_carlo;
    spec.dynamics.mutation_rate = 0.0;
    CHECK_THROWS_AS(run_sweep(spec), InvalidParameter);
}

TEST_CASE("Monte Carlo sweeps are seeded per grid point") {
    SweepSpec spec = r_sweep(0, 3, 3);
    spec.dynamics.population_size = 20;
    spec.engine = Engine::monte_carlo;
    spec.monte_carlo = {200'000, 1'000, 99};
    const SweepTable a = run_sweep(spec);
    const SweepTable b = run_sweep(spec);
    CHECK(sweep_csv(a) == sweep_csv(b));
    for (const SweepRow& row : a.rows) {
        CHECK(row.ok);
        CHECK(std::abs(std::accumulate(row.frequencies.begin(), row.frequencies.end(), 0.0) - 1.0) <= 1e-9);
        CHECK(row.residual > 0.0);
    }
}

TEST_CASE("threshold detection on synthetic tables") {
    const std::vector<double> xs{0, 1, 2, 3};
    SUBCASE("already above the level") {
        const ThresholdResult t = find_threshold(synthetic_table(xs, {1, 1, 1, 1}), "RR", 0.5);
        REQUIRE(t.coordinate);
        CHECK(*t.coordinate == 0.0);
    }
    SUBCASE("never crosses") {
        CHECK_FALSE(find_threshold(synthetic_table(xs, {0, 0, 0, 0}), "RR", 0.5).coordinate);
    }
    SUBCASE("linear interpolation between bracketing points") {
        const ThresholdResult t = find_threshold(synthetic_table(xs, {0, 0.2, 0.6, 0.9}), "RR", 0.5);
        REQUIRE(t.coordinate);
        CHECK(*t.coordinate == doctest::Approx(1.75));
        CHECK_FALSE(t.non_monotone);
        CHECK_FALSE(t.refined);
    }
    SUBCASE("non-monotone crossings are flagged, first crossing returned") {
        const ThresholdResult t = find_threshold(synthetic_table(xs, {0, 0.7, 0.3, 0.9}), "RR", 0.5);
        REQUIRE(t.coordinate);
        CHECK(*t.coordinate < 1.0);
        CHECK(t.non_monotone);
    }
    SUBCASE("invalid input") {
        SweepTable two_d = synthetic_table(xs, {0, 0, 1, 1});
        two_d.axes.push_back(SweepParam::reflection_effort);
        CHECK_THROWS_AS(find_threshold(two_d, "RR", 0.5), InvalidParameter);
        CHECK_THROWS_AS(find_threshold(synthetic_table(xs, {0, 0, 1, 1}), "RR", 1.0), InvalidParameter);
        CHECK_THROWS_AS(find_threshold(synthetic_table(xs, {0, 0, 1, 1}), "XX", 0.5), DomainError);
    }
}

TEST_CASE("refined threshold on the reference r-sweep") {
    const SweepSpec spec = r_sweep(0, 3, 61);
    const SweepTable t = run_sweep(spec);
    const ThresholdResult th = find_threshold(t, "RR", 0.5, &spec);
    REQUIRE(th.coordinate);
    CHECK(th.refined);
    CHECK(*th.coordinate >= 1.2);
    CHECK(*th.coordinate <= 1.8);
    CHECK(std::abs(th.frequency - 0.5) <= 0.02);
    CHECK(th.frequency == analytic_frequency(spec, SweepParam::reflection_reward, *th.coordinate, kRR));
}

TEST_CASE("crossing intervals and censoring") {
    const std::vector<double> xs{0, 1, 2, 3};
    const CrossingInterval full =
        crossing_interval(synthetic_table(xs, {0, 0.25, 0.75, 1}), "RR", 0.25, 0.75);
    REQUIRE(full.width);
    CHECK(*full.width == doctest::Approx(1.0));
    CHECK_FALSE(full.censored);

    const CrossingInterval open =
        crossing_interval(synthetic_table(xs, {0.1, 0.3, 0.4, 0.5}), "RR", 0.25, 0.75);
    CHECK_FALSE(open.width);
    CHECK(open.censored);
    CHECK(open.width_lower_bound == doctest::Approx(3.0 - 0.75));

    CHECK(strictly_narrower(full, open));
    CHECK_FALSE(strictly_narrower(open, full));
    CHECK_FALSE(strictly_narrower(full, full));
}
