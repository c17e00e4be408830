#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "normdyn/game_model.hpp"

namespace normdyn {

// Row-stochastic transition matrix over homogeneous population states.
struct EmbeddedChain {
    std::vector<std::string> strategy_names;
    std::vector<std::vector<double>> transition_matrix;
    // Ordered (resident, mutant) pairs whose fixation probability underflowed.
    std::vector<std::pair<std::size_t, std::size_t>> underflow_pairs;

    std::size_t size() const noexcept { return strategy_names.size(); }
};

struct StationaryDiagnostics {
    // max_j |(v M)_j - v_j|
    double residual = 0.0;
    // Largest |row sum - 1| seen before renormalisation.
    double row_sum_drift = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> underflow_pairs;
};

struct StationaryResult {
    std::vector<double> frequencies;
    EmbeddedChain chain;
    StationaryDiagnostics diagnostics;

    double frequency(const std::string& strategy) const;
};

inline constexpr double kRowSumTolerance = 1e-10;

// Entry (i, j), i != j, is rho(mutant j into resident i) / (n - 1); the
// diagonal completes each row to one.
EmbeddedChain build_chain(const GamePayoffs& payoffs, int population_size, double beta);

// Solves v M = v, sum v = 1 by Gaussian elimination with partial pivoting.
// Throws InvalidChain for negative entries or row sums off by more than
// kRowSumTolerance, and SolverError if the system is singular.
StationaryResult stationary_distribution(const EmbeddedChain& chain);

inline StationaryResult stationary(const GamePayoffs& payoffs, int population_size, double beta) {
    return stationary_distribution(build_chain(payoffs, population_size, beta));
}

}  // namespace normdyn
