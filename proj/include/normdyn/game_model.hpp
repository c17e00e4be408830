#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace normdyn {

// Parameters of the two-strategy responsible (R) vs opportunistic (O) game.
struct BaselineParams {
    double learning_benefit = 0.0;     // L
    double effort_cost = 0.0;          // C
    double shortterm_advantage = 0.0;  // S
    double legitimacy_cost = 0.0;      // delta, >= 0

    void validate() const;
};

// Parameters of the four-strategy reflective-assessment game (RR, RS, O, M).
struct ExtendedParams {
    double a = 1.0;
    double b = 0.0;
    double c = 1.0;
    double d = 2.0;
    double legitimacy_cost = 1.0;     // delta
    double reflection_reward = 0.0;   // r
    double reflection_effort = 1.0;   // kappa
    double superficial_factor = 0.4;  // sigma, in [0, 1]
    double misconduct_cost = 1.0;     // tau

    void validate() const;
};

// Reference parameter set shared by the reward sweep, the peer-sensitivity sweep
// and the design-space grid: a=1, b=0, c=1, d=2, delta=1, kappa=1, sigma=0.4,
// tau=1, r=0.
ExtendedParams reference_params();

inline constexpr std::size_t kRR = 0;
inline constexpr std::size_t kRS = 1;
inline constexpr std::size_t kO = 2;
inline constexpr std::size_t kM = 3;

// Square payoff matrix over named strategies. Entry (i, j) is the payoff to a
// row-strategy i player meeting a column-strategy j player. Immutable.
class GamePayoffs {
public:
    // Throws DimensionError on shape mismatch and InvalidParameter on
    // non-finite entries. `rows` is given row-major as a list of rows.
    GamePayoffs(std::vector<std::string> strategy_names,
                const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& strategy_names() const noexcept { return names_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        return entries_[i * names_.size() + j];
    }
    double at(std::size_t i, std::size_t j) const;

    std::vector<double> row(std::size_t i) const;
    std::vector<std::vector<double>> rows() const;

    // Index of a strategy label; throws DomainError if absent.
    std::size_t index_of(const std::string& label) const;

    // Same game with strategies relabelled so that new index k holds old
    // strategy order[k].
    GamePayoffs permuted(const std::vector<std::size_t>& order) const;

    friend bool operator==(const GamePayoffs&, const GamePayoffs&) = default;

private:
    std::vector<std::string> names_;
    std::vector<double> entries_;
};

// [[L-C, L-C-delta], [S-delta, S]] over strategies [R, O].
GamePayoffs baseline_matrix(const BaselineParams& params);

// Reflective-assessment matrix over [RR, RS, O, M]. The RR-vs-M cell is
// b - kappa, with no reflection reward.
GamePayoffs extended_matrix(const ExtendedParams& params);

// Strict coordination check on a 2x2 game: pi_11 > pi_12 and pi_22 > pi_21.
bool is_coordination(const GamePayoffs& payoffs);

}  // namespace normdyn
