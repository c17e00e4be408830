#include "normdyn/game_model.hpp"

#include <cmath>
#include <sstream>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "parameter " << name << " must be finite, got " << value;
        throw InvalidParameter(os.str());
    }
}

void require_non_negative(double value, const char* name) {
    if (value < 0.0) {
        std::ostringstream os;
        os << "parameter " << name << " must be >= 0, got " << value;
        throw InvalidParameter(os.str());
    }
}

}  // namespace

void BaselineParams::validate() const {
    require_finite(learning_benefit, "L");
    require_finite(effort_cost, "C");
    require_finite(shortterm_advantage, "S");
    require_finite(legitimacy_cost, "delta");
    require_non_negative(legitimacy_cost, "delta");
}

void ExtendedParams::validate() const {
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(c, "c");
    require_finite(d, "d");
    require_finite(legitimacy_cost, "delta");
    require_finite(reflection_reward, "r");
    require_finite(reflection_effort, "kappa");
    require_finite(superficial_factor, "sigma");
    require_finite(misconduct_cost, "tau");
    if (superficial_factor < 0.0 || superficial_factor > 1.0) {
        std::ostringstream os;
        os << "parameter sigma must lie in [0, 1], got " << superficial_factor;
        throw InvalidParameter(os.str());
    }
    require_non_negative(legitimacy_cost, "delta");
    require_non_negative(reflection_effort, "kappa");
    require_non_negative(misconduct_cost, "tau");
}

ExtendedParams reference_params() { return ExtendedParams{}; }

GamePayoffs::GamePayoffs(std::vector<std::string> strategy_names,
                         const std::vector<std::vector<double>>& rows)
    : names_(std::move(strategy_names)) {
    const std::size_t n = names_.size();
    if (n == 0) throw DimensionError("payoff matrix must have at least one strategy");
    if (rows.size() != n) {
        std::ostringstream os;
        os << "payoff matrix has " << rows.size() << " rows for " << n << " strategies";
        throw DimensionError(os.str());
    }
    entries_.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            std::ostringstream os;
            os << "payoff row " << i << " has " << rows[i].size() << " entries, expected " << n;
            throw DimensionError(os.str());
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(rows[i][j])) {
                std::ostringstream os;
                os << "payoff entry (" << i << ", " << j << ") is not finite";
                throw InvalidParameter(os.str());
            }
            entries_.push_back(rows[i][j]);
        }
    }
}

double GamePayoffs::at(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw DomainError("payoff index out of range");
    return (*this)(i, j);
}

std::vector<double> GamePayoffs::row(std::size_t i) const {
    if (i >= size()) throw DomainError("payoff row index out of range");
    const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(i * size());
    return {first, first + static_cast<std::ptrdiff_t>(size())};
}

std::vector<std::vector<double>> GamePayoffs::rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(row(i));
    return out;
}

std::size_t GamePayoffs::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == label) return i;
    throw DomainError("unknown strategy label '" + label + "'");
}

GamePayoffs GamePayoffs::permuted(const std::vector<std::size_t>& order) const {
    const std::size_t n = size();
    if (order.size() != n) throw DimensionError("permutation length does not match strategy count");
    std::vector<bool> seen(n, false);
    for (std::size_t k : order) {
        if (k >= n || seen[k]) throw DomainError("invalid strategy permutation");
        seen[k] = true;
    }
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(names_[order[i]]);
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = (*this)(order[i], order[j]);
    }
    return GamePayoffs(std::move(names), rows);
}

GamePayoffs baseline_matrix(const BaselineParams& p) {
    p.validate();
    const double responsible = p.learning_benefit - p.effort_cost;
    const double delta = p.legitimacy_cost;
    const double s = p.shortterm_advantage;
    return GamePayoffs({"R", "O"}, {{responsible, responsible - delta}, {s - delta, s}});
}

GamePayoffs extended_matrix(const ExtendedParams& p) {
    p.validate();
    const double r = p.reflection_reward;
    const double kappa = p.reflection_effort;
    const double sigma = p.superficial_factor;
    const double delta = p.legitimacy_cost;
    const double tau = p.misconduct_cost;
    const double rr_bonus = r - kappa;
    const double rs_bonus = sigma * r - sigma * kappa;
    return GamePayoffs(
        {"RR", "RS", "O", "M"},
        {
            {p.a + rr_bonus, p.a + rr_bonus, p.b + rr_bonus, p.b - kappa},
            {p.a + rs_bonus, p.a + rs_bonus, p.b + rs_bonus, p.b - sigma * kappa},
            {p.c - delta, p.c - delta, p.d, p.d},
            {p.c - delta - tau, p.c - delta - tau, p.d - tau, p.d - tau},
        });
}

bool is_coordination(const GamePayoffs& g) {
    if (g.size() != 2) throw DimensionError("is_coordination requires a 2x2 game");
    return g(0, 0) > g(0, 1) && g(1, 1) > g(1, 0);
}

}  // namespace normdyn
