#pragma once

// Reference implementations used only by tests. They follow the textbook
// formulas literally and share no code with the library's evaluation paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "normdyn/game_model.hpp"

namespace normdyn::oracle {

using Matrix = std::vector<std::vector<double>>;

// Fixation probability of one `mutant` in `resident`s as
// 1 / (1 + sum_m prod_{l<=m} T-(l)/T+(l)), with T+- evaluated explicitly from
// the average payoffs and the Fermi function. Only usable where the products do
// not overflow.
inline double naive_fixation(const Matrix& pi, std::size_t mutant, std::size_t resident, int n,
                             double beta) {
    const std::size_t i = mutant;
    const std::size_t j = resident;
    auto t = [&](int m, double sign) {
        const double pi_i = ((m - 1) * pi[i][i] + (n - m) * pi[i][j]) / (n - 1);
        const double pi_j = (m * pi[j][i] + (n - m - 1) * pi[j][j]) / (n - 1);
        return (static_cast<double>(m) / n) * (static_cast<double>(n - m) / n) /
               (1.0 + std::exp(-sign * beta * (pi_i - pi_j)));
    };
    double total = 1.0;
    for (int m = 1; m <= n - 1; ++m) {
        double prod = 1.0;
        for (int l = 1; l <= m; ++l) prod *= t(l, -1.0) / t(l, +1.0);
        total += prod;
    }
    return 1.0 / total;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double lo = -2.0,
                            double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(n, std::vector<double>(n));
    for (auto& row : m)
        for (double& x : row) x = u(rng);
    return m;
}

inline GamePayoffs as_game(const Matrix& m) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < m.size(); ++i) names.push_back("s" + std::to_string(i));
    return GamePayoffs(names, m);
}

// Long-run occupancy of a discrete-time chain with row-stochastic matrix
// `transition`, estimated by streaming `jumps` steps from state 0.
inline std::vector<double> jump_chain_occupancy(const Matrix& transition, std::uint64_t jumps,
                                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = transition.size();
    std::vector<double> visits(n, 0.0);
    std::size_t state = 0;
    for (std::uint64_t k = 0; k < jumps; ++k) {
        double x = u(rng);
        std::size_t next = n - 1;
        for (std::size_t s = 0; s < n; ++s) {
            if (x < transition[state][s]) {
                next = s;
                break;
            }
            x -= transition[state][s];
        }
        state = next;
        visits[state] += 1.0;
    }
    for (double& v : visits) v /= static_cast<double>(jumps);
    return visits;
}

}  // namespace normdyn::oracle
