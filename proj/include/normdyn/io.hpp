#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "normdyn/game_model.hpp"
#include "normdyn/monte_carlo.hpp"
#include "normdyn/small_mutation_chain.hpp"
#include "normdyn/sweeps.hpp"

namespace normdyn {

inline constexpr const char* kSweepCsvHeader = "r,kappa,beta,freq_RR,freq_RS,freq_O,freq_M,residual";

// Shortest decimal text that parses back to the same double ("nan"/"inf" for
// non-finite values).
std::string format_double(double value);

void write_sweep_csv(std::ostream& os, const SweepTable& table);
std::string sweep_csv(const SweepTable& table);

// Header: step,count_<name>... in strategy order.
void write_trace_csv(std::ostream& os, const OccupancyTrace& trace,
                     const std::vector<std::string>& strategy_names);

nlohmann::json to_json(const BaselineParams& params);
nlohmann::json to_json(const ExtendedParams& params);
nlohmann::json to_json(const DynamicsConfig& config);
nlohmann::json to_json(const GamePayoffs& payoffs);
nlohmann::json to_json(const StationaryResult& result);
nlohmann::json to_json(const FrequencyEstimate& estimate);
nlohmann::json to_json(const SweepSpec& spec);
nlohmann::json to_json(const ThresholdResult& threshold);
nlohmann::json to_json(const CrossingInterval& interval);

}  // namespace normdyn
