#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "normdyn/errors.hpp"
#include "normdyn/finite_population.hpp"
#include "normdyn/game_model.hpp"
#include "normdyn/io.hpp"
#include "normdyn/monte_carlo.hpp"
#include "normdyn/small_mutation_chain.hpp"
#include "normdyn/sweeps.hpp"

namespace py = pybind11;
using namespace normdyn;

namespace {

// Sweep axes come in from Python as (name, min, max, count) or (name, [values]).
Axis axis_from_python(const py::tuple& t) {
    const SweepParam param = parse_sweep_param(t[0].cast<std::string>());
    if (t.size() == 2) return Axis::list(param, t[1].cast<std::vector<double>>());
    if (t.size() == 4)
        return Axis::range(param, t[1].cast<double>(), t[2].cast<double>(), t[3].cast<int>());
    throw InvalidParameter("axis must be (name, min, max, count) or (name, values)");
}

py::dict table_to_dict(const SweepTable& table) {
    py::dict out;
    std::vector<double> r, kappa, beta, residual;
    std::vector<bool> ok;
    std::vector<std::string> errors;
    std::vector<std::vector<double>> freq(kStrategyCount);
    for (const SweepRow& row : table.rows) {
        r.push_back(row.r);
        kappa.push_back(row.kappa);
        beta.push_back(row.beta);
        residual.push_back(row.residual);
        ok.push_back(row.ok);
        errors.push_back(row.error);
        for (std::size_t s = 0; s < kStrategyCount; ++s) freq[s].push_back(row.frequencies[s]);
    }
    out["r"] = r;
    out["kappa"] = kappa;
    out["beta"] = beta;
    for (std::size_t s = 0; s < kStrategyCount; ++s) out[("freq_" + table.strategy_names[s]).c_str()] = freq[s];
    out["residual"] = residual;
    out["ok"] = ok;
    out["error"] = errors;
    out["csv"] = sweep_csv(table);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-population norm dynamics: payoff models, fixation, stationary distributions, "
              "Monte Carlo runs and sweeps";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<InvalidChain>(m, "InvalidChain", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());

    py::class_<BaselineParams>(m, "BaselineParams")
        .def(py::init([](double L, double C, double S, double delta) {
                 BaselineParams p{L, C, S, delta};
                 p.validate();
                 return p;
             }),
             py::arg("L"), py::arg("C"), py::arg("S"), py::arg("delta"))
        .def_readwrite("L", &BaselineParams::learning_benefit)
        .def_readwrite("C", &BaselineParams::effort_cost)
        .def_readwrite("S", &BaselineParams::shortterm_advantage)
        .def_readwrite("delta", &BaselineParams::legitimacy_cost);

    py::class_<ExtendedParams>(m, "ExtendedParams")
        .def(py::init([](double a, double b, double c, double d, double delta, double r, double kappa,
                         double sigma, double tau) {
                 ExtendedParams p{a, b, c, d, delta, r, kappa, sigma, tau};
                 p.validate();
                 return p;
             }),
             py::arg("a") = 1.0, py::arg("b") = 0.0, py::arg("c") = 1.0, py::arg("d") = 2.0,
             py::arg("delta") = 1.0, py::arg("r") = 0.0, py::arg("kappa") = 1.0,
             py::arg("sigma") = 0.4, py::arg("tau") = 1.0)
        .def_readwrite("a", &ExtendedParams::a)
        .def_readwrite("b", &ExtendedParams::b)
        .def_readwrite("c", &ExtendedParams::c)
        .def_readwrite("d", &ExtendedParams::d)
        .def_readwrite("delta", &ExtendedParams::legitimacy_cost)
        .def_readwrite("r", &ExtendedParams::reflection_reward)
        .def_readwrite("kappa", &ExtendedParams::reflection_effort)
        .def_readwrite("sigma", &ExtendedParams::superficial_factor)
        .def_readwrite("tau", &ExtendedParams::misconduct_cost);

    m.def("reference_params", &reference_params);

    py::class_<GamePayoffs>(m, "GamePayoffs")
        .def(py::init<std::vector<std::string>, std::vector<std::vector<double>>>(),
             py::arg("names"), py::arg("rows"))
        .def_property_readonly("strategy_names", &GamePayoffs::strategy_names)
        .def_property_readonly("rows", &GamePayoffs::rows)
        .def("index_of", &GamePayoffs::index_of)
        .def("__len__", &GamePayoffs::size)
        .def("__call__", [](const GamePayoffs& g, std::size_t i, std::size_t j) { return g.at(i, j); })
        .def("__eq__", [](const GamePayoffs& a, const GamePayoffs& b) { return a == b; })
        .def("__repr__", [](const GamePayoffs& g) { return "GamePayoffs(" + to_json(g).dump() + ")"; });

    m.def("baseline_matrix", &baseline_matrix, py::arg("params"));
    m.def("extended_matrix", &extended_matrix, py::arg("params"));
    m.def("is_coordination", &is_coordination, py::arg("payoffs"));

    m.def("fermi_probability", &fermi_probability, py::arg("payoff_from"), py::arg("payoff_to"),
          py::arg("beta"));
    m.def(
        "average_payoffs",
        [](const GamePayoffs& g, std::size_t i, std::size_t j, int k, int N) {
            const PairPayoffs p = average_payoffs(g, i, j, k, N);
            return py::make_tuple(p.first, p.second);
        },
        py::arg("payoffs"), py::arg("i"), py::arg("j"), py::arg("k"), py::arg("N"));
    m.def(
        "transition_rates",
        [](const GamePayoffs& g, std::size_t i, std::size_t j, int k, int N, double beta) {
            const TransitionRates t = transition_rates(g, i, j, k, N, beta);
            return py::make_tuple(t.plus, t.minus);
        },
        py::arg("payoffs"), py::arg("mutant"), py::arg("resident"), py::arg("k"), py::arg("N"),
        py::arg("beta"));
    m.def(
        "fixation_probability",
        [](const GamePayoffs& g, std::size_t mutant, std::size_t resident, int N, double beta) {
            return fixation_probability(g, mutant, resident, N, beta);
        },
        py::arg("payoffs"), py::arg("mutant"), py::arg("resident"), py::arg("N"), py::arg("beta"));
    m.def(
        "log_fixation_probability",
        [](const GamePayoffs& g, std::size_t mutant, std::size_t resident, int N, double beta) {
            return fixation(g, mutant, resident, N, beta).log_probability;
        },
        py::arg("payoffs"), py::arg("mutant"), py::arg("resident"), py::arg("N"), py::arg("beta"));

    m.def(
        "stationary",
        [](const GamePayoffs& g, int N, double beta) {
            const StationaryResult res = stationary(g, N, beta);
            py::dict out;
            py::dict freq;
            for (std::size_t i = 0; i < res.frequencies.size(); ++i)
                freq[res.chain.strategy_names[i].c_str()] = res.frequencies[i];
            out["frequencies"] = freq;
            out["strategies"] = res.chain.strategy_names;
            out["transition_matrix"] = res.chain.transition_matrix;
            out["residual"] = res.diagnostics.residual;
            out["row_sum_drift"] = res.diagnostics.row_sum_drift;
            out["underflow_pairs"] = res.diagnostics.underflow_pairs;
            return out;
        },
        py::arg("payoffs"), py::arg("N"), py::arg("beta"));

    m.def(
        "simulate",
        [](const GamePayoffs& g, int N, double beta, double mu, std::uint64_t steps,
           std::uint64_t burn_in, std::uint64_t seed, std::vector<int> initial_counts,
           std::uint64_t thinning, bool trace, bool explore_excludes_current) {
            const SimulationRun run{g,    DynamicsConfig{N, beta, mu}, steps, burn_in, seed, thinning,
                                    std::move(initial_counts), explore_excludes_current};
            SimulationOutput sim;
            {
                py::gil_scoped_release release;
                if (trace)
                    sim = simulate_with_trace(run);
                else
                    sim.estimate = simulate(run);
            }
            py::dict out;
            py::dict mean, se;
            for (std::size_t s = 0; s < g.size(); ++s) {
                mean[g.name(s).c_str()] = sim.estimate.mean_frequencies[s];
                se[g.name(s).c_str()] = sim.estimate.standard_errors[s];
            }
            out["mean_frequencies"] = mean;
            out["standard_errors"] = se;
            out["samples"] = sim.estimate.samples;
            out["effective_samples"] = sim.estimate.effective_samples;
            out["seed"] = sim.estimate.seed;
            out["warnings"] = sim.estimate.warnings;
            if (trace) {
                std::vector<std::uint64_t> step;
                std::vector<std::vector<int>> counts;
                for (const TraceRow& row : sim.trace) {
                    step.push_back(row.step);
                    counts.push_back(row.counts);
                }
                out["trace_steps"] = step;
                out["trace_counts"] = counts;
            }
            return out;
        },
        py::arg("payoffs"), py::arg("N") = 100, py::arg("beta") = 0.1, py::arg("mu") = 1e-3,
        py::arg("steps") = 1'000'000, py::arg("burn_in") = 0, py::arg("seed") = 1,
        py::arg("initial_counts") = std::vector<int>{}, py::arg("thinning") = 1,
        py::arg("trace") = false, py::arg("explore_excludes_current") = false);

    m.def(
        "run_sweep",
        [](const ExtendedParams& params, const std::vector<py::tuple>& axes, int N, double beta,
           const std::string& engine, double mu, std::uint64_t steps, std::uint64_t burn_in,
           std::uint64_t seed, unsigned threads) {
            SweepSpec spec;
            spec.base = params;
            spec.dynamics = {N, beta, mu};
            for (const auto& a : axes) spec.axes.push_back(axis_from_python(a));
            spec.engine = parse_engine(engine);
            spec.monte_carlo = {steps, burn_in, seed};
            spec.threads = threads;
            SweepTable table;
            {
                py::gil_scoped_release release;
                table = run_sweep(spec);
            }
            return table_to_dict(table);
        },
        py::arg("params"), py::arg("axes"), py::arg("N") = 100, py::arg("beta") = 0.1,
        py::arg("engine") = "analytic", py::arg("mu") = 1e-3, py::arg("steps") = 10'000'000,
        py::arg("burn_in") = 100'000, py::arg("seed") = 1, py::arg("threads") = 0);

    m.def(
        "find_threshold",
        [](const ExtendedParams& params, double r_min, double r_max, int count, int N, double beta,
           const std::string& strategy, double level) -> py::object {
            SweepSpec spec;
            spec.base = params;
            spec.dynamics = {N, beta, 1e-3};
            spec.axes = {Axis::range(SweepParam::reflection_reward, r_min, r_max, count)};
            const ThresholdResult t = find_threshold(run_sweep(spec), strategy, level, &spec);
            if (!t.coordinate) return py::none();
            return py::make_tuple(*t.coordinate, t.frequency, t.non_monotone);
        },
        "Refined r coordinate where `strategy` first reaches `level` on an analytic r-sweep; "
        "returns (r, frequency, non_monotone) or None.",
        py::arg("params"), py::arg("r_min") = 0.0, py::arg("r_max") = 3.0, py::arg("count") = 61,
        py::arg("N") = 100, py::arg("beta") = 0.1, py::arg("strategy") = "RR",
        py::arg("level") = 0.5);

    m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));
    m.attr("SWEEP_CSV_HEADER") = std::string(kSweepCsvHeader);
}
