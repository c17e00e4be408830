#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "normdyn/finite_population.hpp"
#include "normdyn/game_model.hpp"

namespace normdyn {

// One agent-based run of imitation with exploration.
//
// Each step picks a focal agent uniformly. With probability mu the focal agent
// adopts a strategy drawn uniformly from all n strategies (possibly its own).
// Otherwise it picks a distinct model agent uniformly and copies the model's
// strategy with the Fermi probability of the two strategies' current average
// payoffs (self-interaction excluded).
struct SimulationRun {
    GamePayoffs payoffs;
    DynamicsConfig config;
    std::uint64_t steps = 1'000'000;  // total updates, burn-in included
    std::uint64_t burn_in = 0;
    std::uint64_t seed = 1;
    std::uint64_t thinning = 1;  // trace records every thinning-th post-burn-in step
    // Starting strategy counts; empty means each agent draws a strategy
    // uniformly at random from the run's generator.
    std::vector<int> initial_counts;
    // Exploration draws among the other n-1 strategies instead of all n.
    bool explore_excludes_current = false;

    void validate() const;
};

struct FrequencyEstimate {
    std::vector<std::string> strategy_names;
    std::vector<double> mean_frequencies;
    // Batch-means standard errors of the mean frequencies.
    std::vector<double> standard_errors;
    std::uint64_t effective_samples = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

struct TraceRow {
    std::uint64_t step = 0;
    std::vector<int> counts;
};

using OccupancyTrace = std::vector<TraceRow>;

struct SimulationOutput {
    FrequencyEstimate estimate;
    OccupancyTrace trace;
};

inline constexpr std::size_t kBatchCount = 50;

FrequencyEstimate simulate(const SimulationRun& run);

// Strategy counts after every thinning-th post-burn-in step. Empty when
// steps == burn_in.
OccupancyTrace occupancy_trace(const SimulationRun& run);

// Estimate and trace from a single pass.
SimulationOutput simulate_with_trace(const SimulationRun& run);

// Deterministic 64-bit mixer used to derive independent per-run seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace normdyn
