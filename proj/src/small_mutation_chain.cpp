#include "normdyn/small_mutation_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "normdyn/errors.hpp"
#include "normdyn/finite_population.hpp"

namespace normdyn {

namespace {

// max_j |(v M)_j - v_j|, with the diagonal contribution written as
// -v_j * (off-diagonal row sum) to avoid cancellation.
double left_residual(const std::vector<std::vector<double>>& m, const std::vector<double>& v) {
    const std::size_t n = v.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double inflow = 0.0;
        double exit = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            inflow += v[i] * m[i][j];
            exit += m[j][i];
        }
        worst = std::max(worst, std::abs(inflow - v[j] * exit));
    }
    return worst;
}

}  // namespace

double StationaryResult::frequency(const std::string& strategy) const {
    for (std::size_t i = 0; i < chain.strategy_names.size(); ++i)
        if (chain.strategy_names[i] == strategy) return frequencies[i];
    throw DomainError("unknown strategy label '" + strategy + "'");
}

EmbeddedChain build_chain(const GamePayoffs& payoffs, int population_size, double beta) {
    const std::size_t n = payoffs.size();
    if (n < 2) throw DimensionError("embedded chain needs at least two strategies");
    FixationTable table(payoffs, population_size, beta);

    EmbeddedChain chain;
    chain.strategy_names = payoffs.strategy_names();
    chain.transition_matrix.assign(n, std::vector<double>(n, 0.0));
    const double mutant_share = 1.0 / static_cast<double>(n - 1);
    for (std::size_t resident = 0; resident < n; ++resident) {
        auto& row = chain.transition_matrix[resident];
        double leave = 0.0;
        for (std::size_t mutant = 0; mutant < n; ++mutant) {
            if (mutant == resident) continue;
            const FixationResult& fix = table.get(mutant, resident);
            if (fix.underflow) chain.underflow_pairs.emplace_back(resident, mutant);
            row[mutant] = fix.probability * mutant_share;
            leave += row[mutant];
        }
        row[resident] = 1.0 - leave;
    }
    return chain;
}

StationaryResult stationary_distribution(const EmbeddedChain& chain) {
    const std::size_t n = chain.size();
    if (n == 0) throw DimensionError("empty chain");
    if (chain.transition_matrix.size() != n)
        throw DimensionError("transition matrix row count does not match strategy count");

    std::vector<std::vector<double>> m = chain.transition_matrix;
    double drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw DimensionError("transition matrix is not square");
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(m[i][j]) || m[i][j] < 0.0) {
                std::ostringstream os;
                os << "transition entry (" << i << ", " << j << ") = " << m[i][j]
                   << " is negative or non-finite";
                throw InvalidChain(os.str());
            }
            sum += m[i][j];
        }
        const double off = std::abs(sum - 1.0);
        drift = std::max(drift, off);
        if (off > kRowSumTolerance) {
            std::ostringstream os;
            os << "transition row " << i << " sums to " << sum;
            throw InvalidChain(os.str());
        }
        for (double& x : m[i]) x /= sum;
    }

    // (M^T - I) v = 0 with the last equation replaced by sum v = 1. The
    // diagonal of M - I is formed as minus the off-diagonal row sum, which is
    // exact for tiny exit rates where 1 - sum would cancel.
    std::vector<double> exit_rate(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) exit_rate[i] += m[i][j];
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t r = 0; r + 1 < n; ++r)
        for (std::size_t c = 0; c < n; ++c) a[r][c] = (r == c) ? -exit_rate[r] : m[c][r];
    for (std::size_t c = 0; c < n; ++c) a[n - 1][c] = 1.0;
    a[n - 1][n] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0)
            throw SolverError("stationary system is singular (reducible chain?)",
                              std::numeric_limits<double>::infinity());
        std::swap(a[pivot], a[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> v(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double acc = a[k][n];
        for (std::size_t c = k + 1; c < n; ++c) acc -= a[k][c] * v[c];
        v[k] = acc / a[k][k];
    }

    for (double& x : v) {
        if (!std::isfinite(x) || x < -1e-12)
            throw SolverError("stationary solve produced an invalid probability",
                              left_residual(m, v));
        x = std::max(x, 0.0);
    }
    double total = 0.0;
    for (double x : v) total += x;
    for (double& x : v) x /= total;

    StationaryResult out;
    out.diagnostics.residual = left_residual(m, v);
    out.diagnostics.row_sum_drift = drift;
    out.diagnostics.underflow_pairs = chain.underflow_pairs;
    out.frequencies = std::move(v);
    out.chain = chain;
    out.chain.transition_matrix = std::move(m);
    return out;
}

}  // namespace normdyn
