#include "normdyn/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "normdyn/errors.hpp"

namespace normdyn {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
    os << kSweepCsvHeader << '\n';
    for (const SweepRow& row : table.rows) {
        os << format_double(row.r) << ',' << format_double(row.kappa) << ','
           << format_double(row.beta);
        for (double f : row.frequencies) os << ',' << format_double(f);
        os << ',' << format_double(row.residual) << '\n';
    }
}

std::string sweep_csv(const SweepTable& table) {
    std::ostringstream os;
    write_sweep_csv(os, table);
    return os.str();
}

void write_trace_csv(std::ostream& os, const OccupancyTrace& trace,
                     const std::vector<std::string>& strategy_names) {
    os << "step";
    for (const auto& name : strategy_names) os << ",count_" << name;
    os << '\n';
    for (const TraceRow& row : trace) {
        os << row.step;
        for (int c : row.counts) os << ',' << c;
        os << '\n';
    }
}

nlohmann::json to_json(const BaselineParams& p) {
    return {{"L", p.learning_benefit},
            {"C", p.effort_cost},
            {"S", p.shortterm_advantage},
            {"delta", p.legitimacy_cost}};
}

nlohmann::json to_json(const ExtendedParams& p) {
    return {{"a", p.a},
            {"b", p.b},
            {"c", p.c},
            {"d", p.d},
            {"delta", p.legitimacy_cost},
            {"r", p.reflection_reward},
            {"kappa", p.reflection_effort},
            {"sigma", p.superficial_factor},
            {"tau", p.misconduct_cost}};
}

nlohmann::json to_json(const DynamicsConfig& c) {
    return {{"N", c.population_size}, {"beta", c.selection_intensity}, {"mu", c.mutation_rate}};
}

nlohmann::json to_json(const GamePayoffs& g) {
    return {{"strategies", g.strategy_names()}, {"matrix", g.rows()}};
}

nlohmann::json to_json(const StationaryResult& res) {
    nlohmann::json freq = nlohmann::json::object();
    for (std::size_t i = 0; i < res.frequencies.size(); ++i)
        freq[res.chain.strategy_names[i]] = res.frequencies[i];
    nlohmann::json underflow = nlohmann::json::array();
    for (const auto& [resident, mutant] : res.diagnostics.underflow_pairs)
        underflow.push_back({{"resident", res.chain.strategy_names[resident]},
                             {"mutant", res.chain.strategy_names[mutant]}});
    return {{"strategies", res.chain.strategy_names},
            {"frequencies", freq},
            {"residual", res.diagnostics.residual},
            {"row_sum_drift", res.diagnostics.row_sum_drift},
            {"underflow", underflow},
            {"transition_matrix", res.chain.transition_matrix}};
}

nlohmann::json to_json(const FrequencyEstimate& est) {
    nlohmann::json mean = nlohmann::json::object();
    nlohmann::json se = nlohmann::json::object();
    for (std::size_t i = 0; i < est.strategy_names.size(); ++i) {
        mean[est.strategy_names[i]] = est.mean_frequencies[i];
        se[est.strategy_names[i]] = est.standard_errors[i];
    }
    return {{"strategies", est.strategy_names},
            {"mean_frequencies", mean},
            {"standard_errors", se},
            {"samples", est.samples},
            {"effective_samples", est.effective_samples},
            {"seed", est.seed},
            {"warnings", est.warnings}};
}

nlohmann::json to_json(const SweepSpec& spec) {
    nlohmann::json axes = nlohmann::json::array();
    for (const Axis& axis : spec.axes) {
        nlohmann::json a = {{"param", to_string(axis.param)}, {"values", axis.values}};
        if (axis.min) {
            a["min"] = *axis.min;
            a["max"] = *axis.max;
            a["count"] = axis.values.size();
        }
        axes.push_back(std::move(a));
    }
    nlohmann::json out = {{"params", to_json(spec.base)},
                          {"N", spec.dynamics.population_size},
                          {"beta", spec.dynamics.selection_intensity},
                          {"axes", axes},
                          {"engine", to_string(spec.engine)}};
    if (spec.engine == Engine::monte_carlo) {
        out["mu"] = spec.dynamics.mutation_rate;
        out["steps"] = spec.monte_carlo.steps;
        out["burn_in"] = spec.monte_carlo.burn_in;
        out["seed"] = spec.monte_carlo.seed;
    }
    return out;
}

nlohmann::json to_json(const ThresholdResult& t) {
    nlohmann::json out = {{"level", t.level},
                          {"refined", t.refined},
                          {"non_monotone", t.non_monotone}};
    if (t.coordinate) {
        out["coordinate"] = *t.coordinate;
        out["frequency"] = t.frequency;
    } else {
        out["coordinate"] = nullptr;
    }
    return out;
}

nlohmann::json to_json(const CrossingInterval& c) {
    nlohmann::json out = {{"lower", to_json(c.lower)},
                          {"upper", to_json(c.upper)},
                          {"censored", c.censored},
                          {"width_lower_bound", c.width_lower_bound}};
    out["width"] = c.width ? nlohmann::json(*c.width) : nlohmann::json(nullptr);
    return out;
}

}  // namespace normdyn
