#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "normdyn/finite_population.hpp"
#include "normdyn/game_model.hpp"

namespace normdyn {

enum class SweepParam { reflection_reward, reflection_effort, selection_intensity };
enum class Engine { analytic, monte_carlo };

// CSV/metadata name of a swept parameter: "r", "kappa" or "beta".
std::string to_string(SweepParam param);
std::string to_string(Engine engine);
SweepParam parse_sweep_param(const std::string& name);
Engine parse_engine(const std::string& name);

// One grid axis. Ranges are inclusive of both endpoints with
// value_i = min + i (max - min) / (count - 1).
struct Axis {
    SweepParam param = SweepParam::reflection_reward;
    std::vector<double> values;
    // Set for axes built with range(); explicit lists leave them empty.
    std::optional<double> min;
    std::optional<double> max;

    static Axis range(SweepParam param, double min, double max, int count);
    static Axis list(SweepParam param, std::vector<double> values);

    std::size_t size() const noexcept { return values.size(); }
};

struct MonteCarloSettings {
    std::uint64_t steps = 10'000'000;
    std::uint64_t burn_in = 100'000;
    std::uint64_t seed = 1;
};

struct SweepSpec {
    ExtendedParams base;
    DynamicsConfig dynamics;
    std::vector<Axis> axes;  // one or two, distinct parameters
    Engine engine = Engine::analytic;
    MonteCarloSettings monte_carlo;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

inline constexpr std::size_t kStrategyCount = 4;

struct SweepRow {
    std::size_t index = 0;  // row-major grid index, first axis outermost
    double r = 0.0;
    double kappa = 0.0;
    double beta = 0.0;
    std::array<double, kStrategyCount> frequencies{};
    // Analytic: left-invariance residual. Monte Carlo: largest standard error.
    double residual = 0.0;
    bool ok = true;
    std::string error;

    double coordinate(SweepParam param) const;
};

struct SweepTable {
    std::vector<std::string> strategy_names{"RR", "RS", "O", "M"};
    std::vector<SweepParam> axes;
    std::vector<SweepRow> rows;

    bool all_ok() const;
    std::size_t failed_count() const;
    std::size_t strategy_index(const std::string& label) const;
};

std::size_t grid_size(const SweepSpec& spec);

// Evaluates a single grid point; failures are captured in the row.
SweepRow evaluate_grid_point(const SweepSpec& spec, std::size_t index);

// Every grid point, assembled in grid-index order regardless of the order in
// which worker threads finish.
SweepTable run_sweep(const SweepSpec& spec);

// run_sweep restricted to specs whose axes are exactly {r, kappa}.
SweepTable design_space_grid(const SweepSpec& spec);

// Rows of several tables in sequence; axes taken from the first table.
SweepTable concatenate(const std::vector<SweepTable>& tables);

// Analytic stationary frequency of one strategy at a parameter point built
// from `spec.base`/`spec.dynamics` with the swept parameter set to `value`.
double analytic_frequency(const SweepSpec& spec, SweepParam param, double value,
                          std::size_t strategy);

struct ThresholdResult {
    std::optional<double> coordinate;
    double frequency = 0.0;  // frequency at `coordinate` (when present)
    bool refined = false;
    bool non_monotone = false;
    double level = 0.5;
};

inline constexpr double kThresholdTolerance = 1e-3;

// First crossing of `level` by the strategy's frequency along a 1D table.
// With `refine` (an analytic spec whose single axis generated the table) the
// bracketing interval is bisected to kThresholdTolerance; without it, the
// crossing is linearly interpolated between the bracketing grid points.
// Returns the first grid coordinate when the first row is already >= level and
// no coordinate when the level is never reached. Throws InvalidParameter for
// tables with more than one axis.
ThresholdResult find_threshold(const SweepTable& table, const std::string& strategy, double level,
                               const SweepSpec* refine = nullptr);

// Interval over which a strategy rises from `lower_level` to `upper_level`.
struct CrossingInterval {
    ThresholdResult lower;
    ThresholdResult upper;
    // Set when both crossings exist.
    std::optional<double> width;
    // When the upper level is never reached the width is only known to exceed
    // (last coordinate - lower crossing); `censored` is then true.
    bool censored = false;
    double width_lower_bound = 0.0;
};

CrossingInterval crossing_interval(const SweepTable& table, const std::string& strategy,
                                   double lower_level, double upper_level,
                                   const SweepSpec* refine = nullptr);

// Strictly-narrower comparison that treats censored widths as lower bounds.
// Returns false if either interval lacks a lower crossing.
bool strictly_narrower(const CrossingInterval& narrow, const CrossingInterval& wide);

}  // namespace normdyn
