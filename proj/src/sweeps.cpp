#include "normdyn/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "normdyn/errors.hpp"
#include "normdyn/monte_carlo.hpp"
#include "normdyn/small_mutation_chain.hpp"

namespace normdyn {

namespace {

struct GridPoint {
    double r;
    double kappa;
    double beta;
};

GridPoint point_at(const SweepSpec& spec, std::size_t index) {
    GridPoint p{spec.base.reflection_reward, spec.base.reflection_effort,
                spec.dynamics.selection_intensity};
    // Row-major: the last axis varies fastest.
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
        const Axis& axis = spec.axes[a];
        const double v = axis.values[index % axis.size()];
        index /= axis.size();
        switch (axis.param) {
            case SweepParam::reflection_reward: p.r = v; break;
            case SweepParam::reflection_effort: p.kappa = v; break;
            case SweepParam::selection_intensity: p.beta = v; break;
        }
    }
    return p;
}

void set_param(ExtendedParams& params, DynamicsConfig& dyn, SweepParam param, double value) {
    switch (param) {
        case SweepParam::reflection_reward: params.reflection_reward = value; break;
        case SweepParam::reflection_effort: params.reflection_effort = value; break;
        case SweepParam::selection_intensity: dyn.selection_intensity = value; break;
    }
}

}  // namespace

std::string to_string(SweepParam param) {
    switch (param) {
        case SweepParam::reflection_reward: return "r";
        case SweepParam::reflection_effort: return "kappa";
        case SweepParam::selection_intensity: return "beta";
    }
    return "?";
}

std::string to_string(Engine engine) {
    return engine == Engine::analytic ? "analytic" : "mc";
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "r") return SweepParam::reflection_reward;
    if (name == "kappa") return SweepParam::reflection_effort;
    if (name == "beta") return SweepParam::selection_intensity;
    throw InvalidParameter("unknown sweep axis '" + name + "' (expected r, kappa or beta)");
}

Engine parse_engine(const std::string& name) {
    if (name == "analytic") return Engine::analytic;
    if (name == "mc" || name == "monte-carlo") return Engine::monte_carlo;
    throw InvalidParameter("unknown engine '" + name + "' (expected analytic or mc)");
}

Axis Axis::range(SweepParam param, double min, double max, int count) {
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
        std::ostringstream os;
        os << "axis " << to_string(param) << ": need finite min < max, got [" << min << ", "
           << max << "]";
        throw InvalidParameter(os.str());
    }
    if (count < 2) {
        std::ostringstream os;
        os << "axis " << to_string(param) << ": step count must be >= 2, got " << count;
        throw InvalidParameter(os.str());
    }
    Axis axis;
    axis.param = param;
    axis.min = min;
    axis.max = max;
    axis.values.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        axis.values.push_back(i == count - 1 ? max : min + i * (max - min) / (count - 1));
    }
    return axis;
}

Axis Axis::list(SweepParam param, std::vector<double> values) {
    if (values.empty())
        throw InvalidParameter("axis " + to_string(param) + ": value list is empty");
    for (double v : values)
        if (!std::isfinite(v))
            throw InvalidParameter("axis " + to_string(param) + ": values must be finite");
    Axis axis;
    axis.param = param;
    axis.values = std::move(values);
    return axis;
}

void SweepSpec::validate() const {
    if (axes.empty() || axes.size() > 2)
        throw InvalidParameter("a sweep needs one or two axes");
    if (axes.size() == 2 && axes[0].param == axes[1].param)
        throw InvalidParameter("sweep axes must be distinct parameters");
    for (const Axis& axis : axes)
        if (axis.values.empty()) throw InvalidParameter("sweep axis has no values");
    base.validate();
    dynamics.validate();
    if (engine == Engine::monte_carlo) {
        if (!(dynamics.mutation_rate > 0.0))
            throw InvalidParameter("the Monte Carlo engine needs a mutation rate > 0");
        if (monte_carlo.steps <= monte_carlo.burn_in)
            throw InvalidParameter("Monte Carlo steps must exceed burn-in");
    }
}

double SweepRow::coordinate(SweepParam param) const {
    switch (param) {
        case SweepParam::reflection_reward: return r;
        case SweepParam::reflection_effort: return kappa;
        case SweepParam::selection_intensity: return beta;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

bool SweepTable::all_ok() const { return failed_count() == 0; }

std::size_t SweepTable::failed_count() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok; }));
}

std::size_t SweepTable::strategy_index(const std::string& label) const {
    for (std::size_t i = 0; i < strategy_names.size(); ++i)
        if (strategy_names[i] == label) return i;
    throw DomainError("unknown strategy label '" + label + "'");
}

std::size_t grid_size(const SweepSpec& spec) {
    std::size_t total = 1;
    for (const Axis& axis : spec.axes) total *= axis.size();
    return total;
}

SweepRow evaluate_grid_point(const SweepSpec& spec, std::size_t index) {
    const GridPoint p = point_at(spec, index);
    SweepRow row;
    row.index = index;
    row.r = p.r;
    row.kappa = p.kappa;
    row.beta = p.beta;
    try {
        ExtendedParams params = spec.base;
        params.reflection_reward = p.r;
        params.reflection_effort = p.kappa;
        DynamicsConfig dyn = spec.dynamics;
        dyn.selection_intensity = p.beta;
        const GamePayoffs game = extended_matrix(params);
        if (spec.engine == Engine::analytic) {
            const StationaryResult res = stationary(game, dyn.population_size, dyn.selection_intensity);
            std::copy(res.frequencies.begin(), res.frequencies.end(), row.frequencies.begin());
            row.residual = res.diagnostics.residual;
        } else {
            const SimulationRun run{game,
                                    dyn,
                                    spec.monte_carlo.steps,
                                    spec.monte_carlo.burn_in,
                                    derive_seed(spec.monte_carlo.seed, index),
                                    1,
                                    {},
                                    false};
            const FrequencyEstimate est = simulate(run);
            std::copy(est.mean_frequencies.begin(), est.mean_frequencies.end(),
                      row.frequencies.begin());
            row.residual = *std::max_element(est.standard_errors.begin(), est.standard_errors.end());
        }
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
        row.frequencies.fill(std::numeric_limits<double>::quiet_NaN());
        row.residual = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

SweepTable run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t total = grid_size(spec);
    SweepTable table;
    for (const Axis& axis : spec.axes) table.axes.push_back(axis.param);
    table.rows.resize(total);

    unsigned workers = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) table.rows[i] = evaluate_grid_point(spec, i);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < total; i = next++)
                table.rows[i] = evaluate_grid_point(spec, i);
        });
    }
    pool.clear();
    return table;
}

SweepTable design_space_grid(const SweepSpec& spec) {
    const bool has_r_and_kappa =
        spec.axes.size() == 2 &&
        ((spec.axes[0].param == SweepParam::reflection_reward &&
          spec.axes[1].param == SweepParam::reflection_effort) ||
         (spec.axes[0].param == SweepParam::reflection_effort &&
          spec.axes[1].param == SweepParam::reflection_reward));
    if (!has_r_and_kappa)
        throw InvalidParameter("design-space grid needs exactly the axes r and kappa");
    return run_sweep(spec);
}

SweepTable concatenate(const std::vector<SweepTable>& tables) {
    SweepTable out;
    if (tables.empty()) return out;
    out.axes = tables.front().axes;
    out.strategy_names = tables.front().strategy_names;
    std::size_t index = 0;
    for (const SweepTable& t : tables) {
        for (SweepRow row : t.rows) {
            row.index = index++;
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

double analytic_frequency(const SweepSpec& spec, SweepParam param, double value,
                          std::size_t strategy) {
    ExtendedParams params = spec.base;
    DynamicsConfig dyn = spec.dynamics;
    set_param(params, dyn, param, value);
    const StationaryResult res =
        stationary(extended_matrix(params), dyn.population_size, dyn.selection_intensity);
    return res.frequencies.at(strategy);
}

ThresholdResult find_threshold(const SweepTable& table, const std::string& strategy, double level,
                               const SweepSpec* refine) {
    if (table.axes.size() != 1)
        throw InvalidParameter("threshold detection needs a one-dimensional sweep table");
    if (!(level > 0.0 && level < 1.0))
        throw InvalidParameter("threshold level must lie in (0, 1)");
    const std::size_t s = table.strategy_index(strategy);
    const SweepParam axis = table.axes.front();

    ThresholdResult out;
    out.level = level;
    const auto& rows = table.rows;
    std::size_t hit = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].ok && rows[i].frequencies[s] >= level) {
            hit = i;
            break;
        }
    }
    if (hit == rows.size()) return out;
    for (std::size_t i = hit + 1; i < rows.size(); ++i)
        if (rows[i].ok && rows[i].frequencies[s] < level) out.non_monotone = true;

    if (hit == 0 || !rows[hit - 1].ok) {
        out.coordinate = rows[hit].coordinate(axis);
        out.frequency = rows[hit].frequencies[s];
        return out;
    }

    double lo = rows[hit - 1].coordinate(axis);
    double hi = rows[hit].coordinate(axis);
    double f_lo = rows[hit - 1].frequencies[s];
    double f_hi = rows[hit].frequencies[s];

    if (refine && refine->engine == Engine::analytic && refine->axes.size() == 1 &&
        refine->axes.front().param == axis) {
        while (hi - lo > kThresholdTolerance) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = analytic_frequency(*refine, axis, mid, s);
            if (f_mid >= level) {
                hi = mid;
                f_hi = f_mid;
            } else {
                lo = mid;
            }
        }
        out.coordinate = hi;
        out.frequency = f_hi;
        out.refined = true;
        return out;
    }

    const double t = (f_hi == f_lo) ? 1.0 : (level - f_lo) / (f_hi - f_lo);
    out.coordinate = lo + t * (hi - lo);
    out.frequency = level;
    return out;
}

CrossingInterval crossing_interval(const SweepTable& table, const std::string& strategy,
                                   double lower_level, double upper_level,
                                   const SweepSpec* refine) {
    if (!(lower_level < upper_level))
        throw InvalidParameter("crossing interval needs lower level < upper level");
    CrossingInterval out;
    out.lower = find_threshold(table, strategy, lower_level, refine);
    out.upper = find_threshold(table, strategy, upper_level, refine);
    if (!out.lower.coordinate) return out;
    if (out.upper.coordinate) {
        out.width = *out.upper.coordinate - *out.lower.coordinate;
        out.width_lower_bound = *out.width;
    } else {
        out.censored = true;
        const double last = table.rows.back().coordinate(table.axes.front());
        out.width_lower_bound = last - *out.lower.coordinate;
    }
    return out;
}

bool strictly_narrower(const CrossingInterval& narrow, const CrossingInterval& wide) {
    if (!narrow.width || !wide.lower.coordinate) return false;
    if (wide.censored) return *narrow.width < wide.width_lower_bound;
    return wide.width && *narrow.width < *wide.width;
}

}  // namespace normdyn
