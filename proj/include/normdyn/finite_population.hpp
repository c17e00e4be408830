#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "normdyn/game_model.hpp"

namespace normdyn {

// Population size N, selection intensity beta, and mutation rate mu. The
// mutation rate is only consulted by the Monte Carlo engine.
struct DynamicsConfig {
    int population_size = 100;
    double selection_intensity = 0.1;
    double mutation_rate = 1e-3;

    void validate() const;
};

// Average payoffs of strategies i and j when k players use i and N-k use j,
// excluding self-interaction.
struct PairPayoffs {
    double first = 0.0;   // Pi_i(k)
    double second = 0.0;  // Pi_j(k)
};

struct TransitionRates {
    double plus = 0.0;   // probability the i-count grows by one
    double minus = 0.0;  // probability the i-count shrinks by one
};

struct FixationResult {
    double probability = 0.0;
    // Natural log of the exact probability; finite even when `probability`
    // has been clamped.
    double log_probability = 0.0;
    // True when the exact value is below the smallest positive double and
    // `probability` was clamped to it.
    bool underflow = false;
};

PairPayoffs average_payoffs(const GamePayoffs& payoffs, std::size_t i, std::size_t j, int k,
                            int population_size);

// Probability that a player earning `payoff_from` imitates one earning
// `payoff_to`: 1 / (1 + exp(-beta (to - from))). Never overflows.
double fermi_probability(double payoff_from, double payoff_to, double beta);

TransitionRates transition_rates(const GamePayoffs& payoffs, std::size_t i, std::size_t j, int m,
                                 int population_size, double beta);

// Probability that a single `mutant` takes over a population of `resident`
// players, evaluated in the log domain.
FixationResult fixation(const GamePayoffs& payoffs, std::size_t mutant, std::size_t resident,
                        int population_size, double beta);

inline double fixation_probability(const GamePayoffs& payoffs, std::size_t mutant,
                                   std::size_t resident, int population_size, double beta) {
    return fixation(payoffs, mutant, resident, population_size, beta).probability;
}

// Lazily filled table of fixation results for every ordered (mutant,
// resident) pair of one game at fixed N and beta.
class FixationTable {
public:
    FixationTable(GamePayoffs payoffs, int population_size, double beta);

    const FixationResult& get(std::size_t mutant, std::size_t resident);

    const GamePayoffs& payoffs() const noexcept { return payoffs_; }
    int population_size() const noexcept { return population_size_; }
    double beta() const noexcept { return beta_; }

private:
    GamePayoffs payoffs_;
    int population_size_;
    double beta_;
    std::vector<std::optional<FixationResult>> cache_;
};

}  // namespace normdyn
