#include "normdyn/finite_population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

void check_population(int population_size) {
    if (population_size < 2) {
        std::ostringstream os;
        os << "population size must be >= 2, got " << population_size;
        throw InvalidParameter(os.str());
    }
}

void check_beta(double beta) {
    if (!std::isfinite(beta) || beta < 0.0) {
        std::ostringstream os;
        os << "selection intensity must be finite and >= 0, got " << beta;
        throw InvalidParameter(os.str());
    }
}

void check_pair(const GamePayoffs& g, std::size_t i, std::size_t j) {
    if (i >= g.size() || j >= g.size()) throw DomainError("strategy index out of range");
    if (i == j) throw InvalidParameter("strategy pair must consist of two distinct strategies");
}

}  // namespace

void DynamicsConfig::validate() const {
    check_population(population_size);
    check_beta(selection_intensity);
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        std::ostringstream os;
        os << "mutation rate must lie in [0, 1], got " << mutation_rate;
        throw InvalidParameter(os.str());
    }
}

PairPayoffs average_payoffs(const GamePayoffs& g, std::size_t i, std::size_t j, int k,
                            int population_size) {
    check_population(population_size);
    check_pair(g, i, j);
    if (k < 1 || k > population_size - 1) {
        std::ostringstream os;
        os << "composition k=" << k << " outside [1, " << population_size - 1 << "]";
        throw DomainError(os.str());
    }
    const double n = population_size;
    const double kk = k;
    return {((kk - 1.0) * g(i, i) + (n - kk) * g(i, j)) / (n - 1.0),
            (kk * g(j, i) + (n - kk - 1.0) * g(j, j)) / (n - 1.0)};
}

double fermi_probability(double payoff_from, double payoff_to, double beta) {
    const double x = beta * (payoff_to - payoff_from);
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

TransitionRates transition_rates(const GamePayoffs& g, std::size_t i, std::size_t j, int m,
                                 int population_size, double beta) {
    check_beta(beta);
    const PairPayoffs pi = average_payoffs(g, i, j, m, population_size);
    const double n = population_size;
    const double mixing = (m / n) * ((n - m) / n);
    return {mixing * fermi_probability(pi.second, pi.first, beta),
            mixing * fermi_probability(pi.first, pi.second, beta)};
}

FixationResult fixation(const GamePayoffs& g, std::size_t mutant, std::size_t resident,
                        int population_size, double beta) {
    check_population(population_size);
    check_beta(beta);
    check_pair(g, mutant, resident);

    // log of prod_{l<=m} T-(l)/T+(l) is S_m = -beta * sum_{l<=m} (Pi_mut(l) - Pi_res(l)).
    // rho = 1 / sum_{m=0}^{N-1} exp(S_m) with S_0 = 0.
    const double n = population_size;
    const double self_mut = g(mutant, mutant);
    const double vs_res = g(mutant, resident);
    const double vs_mut = g(resident, mutant);
    const double self_res = g(resident, resident);

    std::vector<double> partial(static_cast<std::size_t>(population_size));
    partial[0] = 0.0;
    double running = 0.0;
    for (int m = 1; m < population_size; ++m) {
        const double pi_mut = ((m - 1.0) * self_mut + (n - m) * vs_res) / (n - 1.0);
        const double pi_res = (m * vs_mut + (n - m - 1.0) * self_res) / (n - 1.0);
        running -= beta * (pi_mut - pi_res);
        partial[static_cast<std::size_t>(m)] = running;
    }
    const double peak = *std::max_element(partial.begin(), partial.end());
    double scaled = 0.0;
    for (double s : partial) scaled += std::exp(s - peak);
    const double log_norm = peak + std::log(scaled);

    FixationResult out;
    out.log_probability = -log_norm;
    out.probability = std::exp(out.log_probability);
    if (out.probability == 0.0) {
        out.probability = std::numeric_limits<double>::denorm_min();
        out.underflow = true;
    }
    return out;
}

FixationTable::FixationTable(GamePayoffs payoffs, int population_size, double beta)
    : payoffs_(std::move(payoffs)),
      population_size_(population_size),
      beta_(beta),
      cache_(payoffs_.size() * payoffs_.size()) {
    check_population(population_size_);
    check_beta(beta_);
}

const FixationResult& FixationTable::get(std::size_t mutant, std::size_t resident) {
    check_pair(payoffs_, mutant, resident);
    auto& slot = cache_[mutant * payoffs_.size() + resident];
    if (!slot) slot = fixation(payoffs_, mutant, resident, population_size_, beta_);
    return *slot;
}

}  // namespace normdyn
