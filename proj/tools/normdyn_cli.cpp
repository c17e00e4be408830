// normdyn command-line tool: figure reproduction sweeps, generic sweeps,
// single-point stationary analysis and Monte Carlo runs.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "normdyn/config.hpp"
#include "normdyn/errors.hpp"
#include "normdyn/io.hpp"
#include "normdyn/monte_carlo.hpp"
#include "normdyn/small_mutation_chain.hpp"
#include "normdyn/sweeps.hpp"

#ifndef NORMDYN_VERSION
#define NORMDYN_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace normdyn;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 1;
constexpr int kExitGridFailure = 3;

// Raised for invalid parameter combinations detected after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every key a config file may carry; mirrors the long flag names.
const std::set<std::string> kConfigKeys = {
    "a",      "b",         "c",        "d",         "delta",     "r",         "kappa",
    "sigma",  "tau",       "L",        "C",         "S",         "N",         "beta",
    "mu",     "steps",     "burn-in",  "seed",      "thinning",  "r-min",     "r-max",
    "r-steps", "kappa-min", "kappa-max", "kappa-steps", "engine", "out-dir",  "threads",
    "level",  "axes",      "baseline"};

struct Flags {
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<double> a, b, c, d, delta, r, kappa, sigma, tau;
    std::optional<double> L, C, S;
    bool baseline = false;
    std::optional<long long> N;
    std::vector<double> beta;
    std::optional<double> mu;
    std::optional<std::string> engine;
    std::optional<double> r_min, r_max, kappa_min, kappa_max;
    std::optional<int> r_steps, kappa_steps;
    std::optional<std::uint64_t> steps, burn_in, seed, thinning;
    std::optional<unsigned> threads;
    std::optional<double> level;
    std::vector<std::string> axes;
};

// Defaults, then config file, then flags.
class Resolver {
public:
    Resolver(const Flags& flags) : flags_(flags) {
        if (flags.config_path) {
            config_ = KeyValueConfig::load(*flags.config_path);
            for (const auto& [key, value] : config_.entries())
                if (!kConfigKeys.count(key))
                    throw UsageError("unknown key '" + key + "' in config file " + *flags.config_path);
        }
    }

    double real(const std::optional<double>& flag, const std::string& key, double fallback) const {
        if (flag) return *flag;
        if (auto v = config_.get_double(key)) return *v;
        return fallback;
    }

    long long integer(const std::optional<long long>& flag, const std::string& key,
                      long long fallback) const {
        if (flag) return *flag;
        if (auto v = config_.get_integer(key)) return *v;
        return fallback;
    }

    template <class T>
    std::optional<T> maybe_integer(const std::optional<T>& flag, const std::string& key) const {
        if (flag) return flag;
        if (auto v = config_.get_integer(key)) {
            if (*v < 0) throw UsageError("config key '" + key + "' must be non-negative");
            return static_cast<T>(*v);
        }
        return std::nullopt;
    }

    std::string text(const std::optional<std::string>& flag, const std::string& key,
                     const std::string& fallback) const {
        if (flag) return *flag;
        if (auto v = config_.get_string(key)) return *v;
        return fallback;
    }

    std::vector<double> list(const std::vector<double>& flag, const std::string& key,
                             std::vector<double> fallback) const {
        if (!flag.empty()) return flag;
        if (auto v = config_.get_list(key)) return *v;
        return fallback;
    }

    bool has_config(const std::string& key) const { return config_.has(key); }
    const KeyValueConfig& config() const { return config_; }
    const Flags& flags() const { return flags_; }

private:
    const Flags& flags_;
    KeyValueConfig config_;
};

std::string fmt(double v) { return format_double(v); }

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// ---- option registration --------------------------------------------------

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "Key-value config file (flags win over it)");
    cmd->add_option("--out-dir", f.out_dir, "Directory for output files (default .)");
}

void add_payoff_flags(CLI::App* cmd, Flags& f, bool with_r, bool with_kappa) {
    cmd->add_option("--a", f.a, "Base payoff a (default 1)");
    cmd->add_option("--b", f.b, "Base payoff b (default 0)");
    cmd->add_option("--c", f.c, "Base payoff c (default 1)");
    cmd->add_option("--d", f.d, "Base payoff d (default 2)");
    cmd->add_option("--delta", f.delta, "Legitimacy cost (default 1)");
    cmd->add_option("--sigma", f.sigma, "Superficial reflection factor in [0,1] (default 0.4)");
    cmd->add_option("--tau", f.tau, "Misconduct cost (default 1)");
    if (with_r) cmd->add_option("--r", f.r, "Reflection reward (default 0)");
    if (with_kappa) cmd->add_option("--kappa", f.kappa, "Reflection effort cost (default 1)");
}

void add_dynamics_flags(CLI::App* cmd, Flags& f, bool beta_repeatable) {
    cmd->add_option("--N", f.N, "Population size (default 100)");
    cmd->add_option("--beta", f.beta,
                    beta_repeatable ? "Selection intensity (repeatable)" : "Selection intensity");
    cmd->add_option("--mu", f.mu, "Mutation rate (Monte Carlo only)");
}

void add_mc_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--steps", f.steps, "Monte Carlo updates including burn-in");
    cmd->add_option("--burn-in", f.burn_in, "Discarded initial updates");
    cmd->add_option("--seed", f.seed, "Random seed (generated and recorded if omitted)");
}

void add_sweep_flags(CLI::App* cmd, Flags& f, bool r_axis, bool kappa_axis) {
    if (r_axis) {
        cmd->add_option("--r-min", f.r_min, "First reward grid value");
        cmd->add_option("--r-max", f.r_max, "Last reward grid value");
        cmd->add_option("--r-steps", f.r_steps, "Number of reward grid points");
    }
    if (kappa_axis) {
        cmd->add_option("--kappa-min", f.kappa_min, "First effort grid value");
        cmd->add_option("--kappa-max", f.kappa_max, "Last effort grid value");
        cmd->add_option("--kappa-steps", f.kappa_steps, "Number of effort grid points");
    }
    cmd->add_option("--engine", f.engine, "analytic (default) or mc")
        ->check(CLI::IsMember({"analytic", "mc"}));
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--level", f.level, "Threshold level for freq_RR (default 0.5)");
    add_mc_flags(cmd, f);
}

// ---- resolution -------------------------------------------------------------

struct Resolved {
    std::string command;
    std::vector<std::string> args;  // canonical flag list for replay
    json params = json::object();
};

void push(Resolved& res, const std::string& flag, const std::string& value) {
    res.args.push_back("--" + flag);
    res.args.push_back(value);
}

ExtendedParams resolve_extended(const Resolver& rs, Resolved& out, bool with_r, bool with_kappa) {
    const Flags& f = rs.flags();
    ExtendedParams p = reference_params();
    p.a = rs.real(f.a, "a", p.a);
    p.b = rs.real(f.b, "b", p.b);
    p.c = rs.real(f.c, "c", p.c);
    p.d = rs.real(f.d, "d", p.d);
    p.legitimacy_cost = rs.real(f.delta, "delta", p.legitimacy_cost);
    p.superficial_factor = rs.real(f.sigma, "sigma", p.superficial_factor);
    p.misconduct_cost = rs.real(f.tau, "tau", p.misconduct_cost);
    if (with_r) p.reflection_reward = rs.real(f.r, "r", p.reflection_reward);
    if (with_kappa) p.reflection_effort = rs.real(f.kappa, "kappa", p.reflection_effort);
    try {
        p.validate();
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
    push(out, "a", fmt(p.a));
    push(out, "b", fmt(p.b));
    push(out, "c", fmt(p.c));
    push(out, "d", fmt(p.d));
    push(out, "delta", fmt(p.legitimacy_cost));
    push(out, "sigma", fmt(p.superficial_factor));
    push(out, "tau", fmt(p.misconduct_cost));
    if (with_r) push(out, "r", fmt(p.reflection_reward));
    if (with_kappa) push(out, "kappa", fmt(p.reflection_effort));
    out.params["game"] = to_json(p);
    return p;
}

BaselineParams resolve_baseline(const Resolver& rs, Resolved& out) {
    const Flags& f = rs.flags();
    BaselineParams p{rs.real(f.L, "L", 2.0), rs.real(f.C, "C", 1.0), rs.real(f.S, "S", 1.0),
                     rs.real(f.delta, "delta", 0.5)};
    try {
        p.validate();
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
    out.args.push_back("--baseline");
    push(out, "L", fmt(p.learning_benefit));
    push(out, "C", fmt(p.effort_cost));
    push(out, "S", fmt(p.shortterm_advantage));
    push(out, "delta", fmt(p.legitimacy_cost));
    out.params["game"] = to_json(p);
    return p;
}

int resolve_population(const Resolver& rs, Resolved& out) {
    const long long n = rs.integer(rs.flags().N, "N", 100);
    if (n < 2 || n > 1'000'000) throw UsageError("--N must lie in [2, 1000000]");
    push(out, "N", std::to_string(n));
    out.params["N"] = n;
    return static_cast<int>(n);
}

Engine resolve_engine(const Resolver& rs, Resolved& out) {
    const std::string name = rs.text(rs.flags().engine, "engine", "analytic");
    Engine engine;
    try {
        engine = parse_engine(name);
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
    push(out, "engine", to_string(engine));
    out.params["engine"] = to_string(engine);
    return engine;
}

void reject_mu_for_analytic(const Resolver& rs, Engine engine) {
    if (engine == Engine::analytic && rs.flags().mu)
        throw UsageError(
            "--mu applies only to Monte Carlo runs; analytic commands work in the small-mutation "
            "limit (use --engine mc or the simulate command)");
}

struct McResolved {
    double mu;
    std::uint64_t steps;
    std::uint64_t burn_in;
    std::uint64_t seed;
};

McResolved resolve_mc(const Resolver& rs, Resolved& out, std::uint64_t default_steps,
                      std::uint64_t default_burn_in) {
    const Flags& f = rs.flags();
    McResolved mc;
    mc.mu = rs.real(f.mu, "mu", 1e-3);
    if (!(mc.mu > 0.0 && mc.mu <= 1.0)) throw UsageError("--mu must lie in (0, 1]");
    mc.steps = rs.maybe_integer(f.steps, "steps").value_or(default_steps);
    mc.burn_in = rs.maybe_integer(f.burn_in, "burn-in").value_or(default_burn_in);
    if (mc.steps <= mc.burn_in) throw UsageError("--steps must exceed --burn-in");
    mc.seed = rs.maybe_integer(f.seed, "seed").value_or(fresh_seed());
    push(out, "mu", fmt(mc.mu));
    push(out, "steps", std::to_string(mc.steps));
    push(out, "burn-in", std::to_string(mc.burn_in));
    push(out, "seed", std::to_string(mc.seed));
    out.params["mu"] = mc.mu;
    out.params["steps"] = mc.steps;
    out.params["burn_in"] = mc.burn_in;
    out.params["seed"] = mc.seed;
    return mc;
}

Axis resolve_axis(const Resolver& rs, Resolved& out, SweepParam param, double lo, double hi,
                  int count) {
    const Flags& f = rs.flags();
    const bool is_r = param == SweepParam::reflection_reward;
    const std::string stem = is_r ? "r" : "kappa";
    const double min = rs.real(is_r ? f.r_min : f.kappa_min, stem + "-min", lo);
    const double max = rs.real(is_r ? f.r_max : f.kappa_max, stem + "-max", hi);
    const auto steps_flag = is_r ? f.r_steps : f.kappa_steps;
    const long long steps =
        rs.integer(steps_flag ? std::optional<long long>(*steps_flag) : std::nullopt,
                   stem + "-steps", count);
    if (steps > 1'000'000) throw UsageError("--" + stem + "-steps is too large");
    Axis axis;
    try {
        axis = Axis::range(param, min, max, static_cast<int>(steps));
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
    push(out, stem + "-min", fmt(min));
    push(out, stem + "-max", fmt(max));
    push(out, stem + "-steps", std::to_string(steps));
    return axis;
}

std::vector<double> resolve_betas(const Resolver& rs, Resolved& out, std::vector<double> fallback) {
    std::vector<double> betas = rs.list(rs.flags().beta, "beta", std::move(fallback));
    if (betas.empty()) throw UsageError("beta list is empty");
    for (double b : betas) {
        if (!std::isfinite(b) || b < 0.0) throw UsageError("--beta values must be finite and >= 0");
        push(out, "beta", fmt(b));
    }
    out.params["beta"] = betas.size() == 1 ? json(betas.front()) : json(betas);
    return betas;
}

unsigned resolve_threads(const Resolver& rs) {
    return rs.maybe_integer(rs.flags().threads, "threads").value_or(0u);
}

double resolve_level(const Resolver& rs, Resolved& out) {
    const double level = rs.real(rs.flags().level, "level", 0.5);
    if (!(level > 0.0 && level < 1.0)) throw UsageError("--level must lie in (0, 1)");
    push(out, "level", fmt(level));
    return level;
}

fs::path resolve_out_dir(const Resolver& rs) {
    return fs::path(rs.text(rs.flags().out_dir, "out-dir", "."));
}

// ---- outputs ------------------------------------------------------------------

void write_file(const fs::path& path, const std::string& contents) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os << contents;
    os.close();
    if (!os) throw IoError("failed writing " + path.string());
}

void append_manifest(const fs::path& out_dir, const Resolved& res,
                     const std::vector<std::string>& outputs, double seconds, int status) {
    json record = {{"command", res.command},
                   {"args", res.args},
                   {"params", res.params},
                   {"tool_version", NORMDYN_VERSION},
                   {"out_dir", fs::absolute(out_dir).lexically_normal().string()},
                   {"outputs", outputs},
                   {"duration_seconds", seconds},
                   {"exit_status", status}};
    if (res.params.contains("seed")) record["seed"] = res.params["seed"];
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::ofstream os(out_dir / "manifest.jsonl", std::ios::app);
    if (!os) throw IoError("cannot append to " + (out_dir / "manifest.jsonl").string());
    os << record.dump() << '\n';
}

json meta_record(const Resolved& res, const SweepSpec& spec) {
    json meta = {{"tool", "normdyn"},
                 {"tool_version", NORMDYN_VERSION},
                 {"command", res.command},
                 {"engine", to_string(spec.engine)},
                 {"columns", kSweepCsvHeader}};
    if (spec.engine == Engine::monte_carlo) meta["seed"] = spec.monte_carlo.seed;
    return meta;
}

const char* kThresholdCriterion =
    "first grid point where freq_RR >= level, refined by bisection on the analytic engine to "
    "1e-3 in r (linear interpolation for Monte Carlo tables)";

json threshold_block(const SweepTable& table, const SweepSpec& spec, double level) {
    const SweepSpec* refine = spec.engine == Engine::analytic ? &spec : nullptr;
    const ThresholdResult th = find_threshold(table, "RR", level, refine);
    const CrossingInterval ci = crossing_interval(table, "RR", 0.25, 0.75, refine);
    return {{"strategy", "RR"},
            {"criterion", kThresholdCriterion},
            {"threshold", to_json(th)},
            {"rise_0.25_to_0.75", to_json(ci)}};
}

void print_threshold(const std::string& label, const json& block) {
    const json& th = block["threshold"];
    std::cout << label << "RR threshold (level " << th["level"].get<double>() << "): ";
    if (th["coordinate"].is_null()) {
        std::cout << "not reached\n";
    } else {
        std::cout << "r* = " << th["coordinate"].get<double>();
        if (th["non_monotone"].get<bool>()) std::cout << " (non-monotone crossing)";
        std::cout << '\n';
    }
}

struct Outcome {
    std::vector<std::string> outputs;
    int status = 0;
};

int grid_status(const SweepTable& table) {
    if (table.all_ok()) return 0;
    for (const SweepRow& row : table.rows)
        if (!row.ok)
            std::cerr << "grid point " << row.index << " (r=" << row.r << ", kappa=" << row.kappa
                      << ", beta=" << row.beta << ") failed: " << row.error << '\n';
    return kExitGridFailure;
}

SweepSpec base_sweep_spec(const Resolver& rs, Resolved& res, bool r_fixed, bool kappa_fixed) {
    SweepSpec spec;
    spec.base = resolve_extended(rs, res, r_fixed, kappa_fixed);
    spec.dynamics.population_size = resolve_population(rs, res);
    spec.engine = resolve_engine(rs, res);
    reject_mu_for_analytic(rs, spec.engine);
    if (spec.engine == Engine::monte_carlo) {
        const McResolved mc = resolve_mc(rs, res, 10'000'000, 100'000);
        spec.dynamics.mutation_rate = mc.mu;
        spec.monte_carlo = {mc.steps, mc.burn_in, mc.seed};
    }
    spec.threads = resolve_threads(rs);
    return spec;
}

// ---- commands ------------------------------------------------------------------

Outcome cmd_fig1(const Resolver& rs, Resolved& res, const fs::path& out_dir) {
    SweepSpec spec = base_sweep_spec(rs, res, false, true);
    const std::vector<double> betas = resolve_betas(rs, res, {0.1});
    if (betas.size() != 1) throw UsageError("fig1 takes a single --beta (use fig2 for several)");
    spec.dynamics.selection_intensity = betas.front();
    spec.axes = {resolve_axis(rs, res, SweepParam::reflection_reward, 0.0, 3.0, 61)};
    const double level = resolve_level(rs, res);

    const SweepTable table = run_sweep(spec);
    json meta = meta_record(res, spec);
    meta["spec"] = to_json(spec);
    meta["threshold"] = threshold_block(table, spec, level);
    print_threshold("", meta["threshold"]);

    write_file(out_dir / "fig1.csv", sweep_csv(table));
    write_file(out_dir / "fig1.meta.json", meta.dump(2) + "\n");
    return {{"fig1.csv", "fig1.meta.json"}, grid_status(table)};
}

Outcome cmd_fig2(const Resolver& rs, Resolved& res, const fs::path& out_dir) {
    SweepSpec spec = base_sweep_spec(rs, res, false, true);
    const std::vector<double> betas = resolve_betas(rs, res, {0.01, 0.1, 0.5});
    spec.axes = {resolve_axis(rs, res, SweepParam::reflection_reward, 0.0, 3.0, 61)};
    const double level = resolve_level(rs, res);

    std::vector<SweepTable> tables;
    json per_beta = json::array();
    for (double beta : betas) {
        SweepSpec one = spec;
        one.dynamics.selection_intensity = beta;
        tables.push_back(run_sweep(one));
        json block = threshold_block(tables.back(), one, level);
        block["beta"] = beta;
        std::ostringstream label;
        label << "beta=" << beta << ": ";
        print_threshold(label.str(), block);
        per_beta.push_back(std::move(block));
    }
    const SweepTable table = concatenate(tables);
    json meta = meta_record(res, spec);
    meta["spec"] = to_json(spec);
    meta["spec"]["beta"] = betas;
    meta["thresholds"] = per_beta;

    write_file(out_dir / "fig2.csv", sweep_csv(table));
    write_file(out_dir / "fig2.meta.json", meta.dump(2) + "\n");
    return {{"fig2.csv", "fig2.meta.json"}, grid_status(table)};
}

Outcome cmd_fig3(const Resolver& rs, Resolved& res, const fs::path& out_dir) {
    SweepSpec spec = base_sweep_spec(rs, res, false, false);
    const std::vector<double> betas = resolve_betas(rs, res, {0.1});
    if (betas.size() != 1) throw UsageError("fig3 takes a single --beta");
    spec.dynamics.selection_intensity = betas.front();
    Axis kappa = resolve_axis(rs, res, SweepParam::reflection_effort, 0.0, 3.0, 31);
    Axis r = resolve_axis(rs, res, SweepParam::reflection_reward, 0.0, 3.0, 31);
    spec.axes = {kappa, r};

    const SweepTable table = design_space_grid(spec);
    json meta = meta_record(res, spec);
    meta["spec"] = to_json(spec);
    meta["layout"] = "rows ordered by kappa (outer) then r (inner)";
    meta["colour_scale"] = {0.0, 1.0};

    write_file(out_dir / "fig3.csv", sweep_csv(table));
    write_file(out_dir / "fig3.meta.json", meta.dump(2) + "\n");
    return {{"fig3.csv", "fig3.meta.json"}, grid_status(table)};
}

Outcome cmd_sweep(const Resolver& rs, Resolved& res, const fs::path& out_dir) {
    std::vector<std::string> names = rs.flags().axes;
    if (names.empty()) {
        if (auto v = rs.config().get_string("axes")) {
            std::stringstream ss(*v);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) names.push_back(item.substr(item.find_first_not_of(' ')));
        } else {
            names = {"r"};
        }
    }
    if (names.empty() || names.size() > 2) throw UsageError("--axes takes one or two of r, kappa, beta");
    std::vector<SweepParam> params;
    for (const auto& name : names) {
        try {
            params.push_back(parse_sweep_param(name));
        } catch (const InvalidParameter& e) {
            throw UsageError(e.what());
        }
        res.args.push_back("--axes");
        res.args.push_back(name);
    }
    auto swept = [&](SweepParam p) { return std::find(params.begin(), params.end(), p) != params.end(); };

    SweepSpec spec = base_sweep_spec(rs, res, !swept(SweepParam::reflection_reward),
                                     !swept(SweepParam::reflection_effort));
    const std::vector<double> betas = resolve_betas(rs, res, {0.1});
    if (!swept(SweepParam::selection_intensity) && betas.size() != 1)
        throw UsageError("several --beta values need 'beta' among --axes");
    spec.dynamics.selection_intensity = betas.front();
    for (SweepParam p : params) {
        if (p == SweepParam::selection_intensity)
            spec.axes.push_back(Axis::list(p, betas));
        else
            spec.axes.push_back(resolve_axis(rs, res, p, 0.0, 3.0,
                                             p == SweepParam::reflection_reward ? 61 : 31));
    }
    const double level = resolve_level(rs, res);

    const SweepTable table = run_sweep(spec);
    json meta = meta_record(res, spec);
    meta["spec"] = to_json(spec);
    if (spec.axes.size() == 1 && spec.axes.front().param == SweepParam::reflection_reward) {
        meta["threshold"] = threshold_block(table, spec, level);
        print_threshold("", meta["threshold"]);
    }
    write_file(out_dir / "sweep.csv", sweep_csv(table));
    write_file(out_dir / "sweep.meta.json", meta.dump(2) + "\n");
    return {{"sweep.csv", "sweep.meta.json"}, grid_status(table)};
}

GamePayoffs resolve_game(const Resolver& rs, Resolved& res) {
    const bool baseline = rs.flags().baseline ||
                          rs.config().get_string("baseline").value_or("false") == "true";
    if (baseline) return baseline_matrix(resolve_baseline(rs, res));
    return extended_matrix(resolve_extended(rs, res, true, true));
}

Outcome cmd_stationary(const Resolver& rs, Resolved& res, const fs::path& out_dir) {
    const GamePayoffs game = resolve_game(rs, res);
    const int n = resolve_population(rs, res);
    const std::vector<double> betas = resolve_betas(rs, res, {0.1});
    if (betas.size() != 1) throw UsageError("stationary takes a single --beta");
    if (rs.flags().mu) throw UsageError("--mu applies only to Monte Carlo runs");

    const StationaryResult result = stationary(game, n, betas.front());
    json record = {{"params", res.params}, {"payoffs", to_json(game)}};
    record.update(to_json(result));
    const std::string text = record.dump(2) + "\n";
    std::cout << text;
    if (rs.flags().out_dir || rs.has_config("out-dir")) {
        write_file(out_dir / "stationary.json", text);
        return {{"stationary.json"}, 0};
    }
    return {{}, 0};
}

Outcome cmd_simulate(const Resolver& rs, Resolved& res, const fs::path& out_dir) {
    const GamePayoffs game = resolve_game(rs, res);
    const int n = resolve_population(rs, res);
    const std::vector<double> betas = resolve_betas(rs, res, {0.1});
    if (betas.size() != 1) throw UsageError("simulate takes a single --beta");
    const McResolved mc = resolve_mc(rs, res, 10'000'000, 100'000);
    const std::uint64_t thinning = rs.maybe_integer(rs.flags().thinning, "thinning").value_or(1000);
    if (thinning == 0) throw UsageError("--thinning must be >= 1");
    push(res, "thinning", std::to_string(thinning));

    const SimulationRun run{game, DynamicsConfig{n, betas.front(), mc.mu}, mc.steps, mc.burn_in,
                            mc.seed, thinning, {}, false};
    const SimulationOutput sim = simulate_with_trace(run);
    for (const auto& w : sim.estimate.warnings) std::cerr << "warning: " << w << '\n';

    std::ostringstream trace;
    write_trace_csv(trace, sim.trace, game.strategy_names());
    json estimate = {{"params", res.params}, {"payoffs", to_json(game)}, {"thinning", thinning}};
    estimate.update(to_json(sim.estimate));
    write_file(out_dir / "trace.csv", trace.str());
    write_file(out_dir / "estimate.json", estimate.dump(2) + "\n");
    for (std::size_t s = 0; s < game.size(); ++s)
        std::cout << game.name(s) << ": " << sim.estimate.mean_frequencies[s] << " +/- "
                  << sim.estimate.standard_errors[s] << '\n';
    std::cout << "seed: " << mc.seed << '\n';
    return {{"trace.csv", "estimate.json"}, 0};
}

int run(std::vector<std::string> argv_tail, bool allow_replay);

int cmd_replay(const std::string& manifest_path, std::optional<std::size_t> entry,
               const std::string& out_dir) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot read manifest " + manifest_path);
    std::vector<json> records;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) records.push_back(json::parse(line));
    if (records.empty()) throw UsageError("manifest " + manifest_path + " has no records");
    const std::size_t k = entry.value_or(records.size() - 1);
    if (k >= records.size()) throw UsageError("manifest entry out of range");
    const json& rec = records[k];
    std::vector<std::string> args{rec.at("command").get<std::string>()};
    for (const auto& a : rec.at("args")) args.push_back(a.get<std::string>());
    args.push_back("--out-dir");
    args.push_back(out_dir);
    return run(args, false);
}

int run(std::vector<std::string> argv_tail, bool allow_replay) {
    CLI::App app{"Finite-population dynamics of AI-use norms under reflective assessment", "normdyn"};
    app.set_version_flag("--version", NORMDYN_VERSION);
    app.require_subcommand(1);

    Flags f;
    auto* fig1 = app.add_subcommand("fig1", "Reward sweep: stationary frequencies vs r");
    add_common(fig1, f);
    add_payoff_flags(fig1, f, false, true);
    add_dynamics_flags(fig1, f, false);
    add_sweep_flags(fig1, f, true, false);

    auto* fig2 = app.add_subcommand("fig2", "Peer-sensitivity sweep: one r-sweep per beta");
    add_common(fig2, f);
    add_payoff_flags(fig2, f, false, true);
    add_dynamics_flags(fig2, f, true);
    add_sweep_flags(fig2, f, true, false);

    auto* fig3 = app.add_subcommand("fig3", "Design-space grid over (r, kappa)");
    add_common(fig3, f);
    add_payoff_flags(fig3, f, false, false);
    add_dynamics_flags(fig3, f, false);
    add_sweep_flags(fig3, f, true, true);

    auto* sweep = app.add_subcommand("sweep", "Generic sweep over one or two of r, kappa, beta");
    add_common(sweep, f);
    add_payoff_flags(sweep, f, true, true);
    add_dynamics_flags(sweep, f, true);
    add_sweep_flags(sweep, f, true, true);
    sweep->add_option("--axes", f.axes, "Swept parameters, outermost first (r, kappa, beta)");

    auto* stat = app.add_subcommand("stationary", "Stationary distribution at one parameter point");
    add_common(stat, f);
    add_payoff_flags(stat, f, true, true);
    add_dynamics_flags(stat, f, false);
    stat->add_flag("--baseline", f.baseline, "Use the two-strategy R/O game");
    stat->add_option("--L", f.L, "Learning benefit (baseline)");
    stat->add_option("--C", f.C, "Effort cost (baseline)");
    stat->add_option("--S", f.S, "Short-term advantage (baseline)");

    auto* sim = app.add_subcommand("simulate", "Agent-based Monte Carlo run");
    add_common(sim, f);
    add_payoff_flags(sim, f, true, true);
    add_dynamics_flags(sim, f, false);
    add_mc_flags(sim, f);
    sim->add_option("--thinning", f.thinning, "Record every k-th post-burn-in step (default 1000)");
    sim->add_flag("--baseline", f.baseline, "Use the two-strategy R/O game");
    sim->add_option("--L", f.L, "Learning benefit (baseline)");
    sim->add_option("--C", f.C, "Effort cost (baseline)");
    sim->add_option("--S", f.S, "Short-term advantage (baseline)");

    std::string manifest_path;
    std::optional<std::size_t> manifest_entry;
    std::string replay_out;
    CLI::App* replay = nullptr;
    if (allow_replay) {
        replay = app.add_subcommand("replay", "Re-run a command recorded in a manifest");
        replay->add_option("manifest", manifest_path, "manifest.jsonl written by a previous run")
            ->required();
        replay->add_option("--entry", manifest_entry, "Record index (default: last)");
        replay->add_option("--out-dir", replay_out, "Directory for the re-run outputs")->required();
    }

    std::reverse(argv_tail.begin(), argv_tail.end());
    try {
        app.parse(argv_tail);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (replay && replay->parsed()) return cmd_replay(manifest_path, manifest_entry, replay_out);

        const auto start = std::chrono::steady_clock::now();
        Resolver rs(f);
        Resolved res;
        res.command = app.get_subcommands().front()->get_name();
        const fs::path out_dir = resolve_out_dir(rs);
        Outcome outcome;
        if (fig1->parsed()) outcome = cmd_fig1(rs, res, out_dir);
        else if (fig2->parsed()) outcome = cmd_fig2(rs, res, out_dir);
        else if (fig3->parsed()) outcome = cmd_fig3(rs, res, out_dir);
        else if (sweep->parsed()) outcome = cmd_sweep(rs, res, out_dir);
        else if (stat->parsed()) outcome = cmd_stationary(rs, res, out_dir);
        else outcome = cmd_simulate(rs, res, out_dir);

        if (!outcome.outputs.empty()) {
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            append_manifest(out_dir, res, outcome.outputs, seconds, outcome.status);
        }
        return outcome.status;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const normdyn::InvalidParameter& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args), true);
}
