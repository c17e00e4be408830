#include "normdyn/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

// SplitMix64: a counter-based generator whose k-th output is a fixed mix of
// seed + k * golden-ratio increment, so traces depend only on the seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Draws {
public:
    explicit Draws(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), bound >= 1, without modulo bias
    // (multiply-shift with rejection).
    std::uint64_t below(std::uint64_t bound) {
        __extension__ using wide = unsigned __int128;
        wide product = static_cast<wide>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<wide>(engine_()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

private:
    SplitMix64 engine_;
};

std::size_t pick_by_count(const std::vector<int>& counts, std::uint64_t ticket) {
    std::uint64_t cumulative = 0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        cumulative += static_cast<std::uint64_t>(counts[s]);
        if (ticket < cumulative) return s;
    }
    return counts.size() - 1;
}

struct BatchSums {
    std::vector<std::uint64_t> sum;  // per strategy, sum of counts
    std::uint64_t length = 0;
};

template <bool kRecordTrace>
SimulationOutput run_engine(const SimulationRun& run, bool require_samples) {
    run.validate();
    if (require_samples && run.steps <= run.burn_in)
        throw InvalidParameter("simulation needs steps > burn_in to estimate frequencies");

    const GamePayoffs& g = run.payoffs;
    const std::size_t n = g.size();
    const int pop = run.config.population_size;
    const double beta = run.config.selection_intensity;
    const double mu = run.config.mutation_rate;
    const double others = pop - 1.0;

    Draws draws(run.seed);
    std::vector<int> counts = run.initial_counts;
    if (counts.empty()) {
        counts.assign(n, 0);
        for (int agent = 0; agent < pop; ++agent) ++counts[draws.below(n)];
    }

    SimulationOutput out;
    FrequencyEstimate& est = out.estimate;
    est.strategy_names = g.strategy_names();
    est.seed = run.seed;
    const auto occupied = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; });
    if (mu == 0.0 && occupied > 1)
        est.warnings.push_back(
            "mutation rate is 0 with a heterogeneous start: the run absorbs in a homogeneous "
            "state and frequency estimates are not ergodic averages");

    const std::uint64_t samples = run.steps - std::min(run.steps, run.burn_in);
    const std::size_t batch_count =
        static_cast<std::size_t>(std::min<std::uint64_t>(kBatchCount, samples));
    std::vector<BatchSums> batches(batch_count, BatchSums{std::vector<std::uint64_t>(n, 0), 0});
    std::vector<std::uint64_t> total(n, 0);
    std::vector<std::uint64_t> total_sq(n, 0);

    auto payoff_of = [&](std::size_t s) {
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) acc += counts[t] * g(s, t);
        return (acc - g(s, s)) / others;
    };

    // Occupancy is accumulated lazily: `pending` consecutive samples share the
    // current counts and are folded in when the counts change or a batch ends.
    std::size_t batch = 0;
    std::uint64_t batch_end = batch_count ? samples / batch_count : 0;
    std::uint64_t pending = 0;
    auto flush = [&] {
        if (pending == 0) return;
        BatchSums& b = batches[batch];
        for (std::size_t s = 0; s < n; ++s) {
            const auto c = static_cast<std::uint64_t>(counts[s]);
            b.sum[s] += c * pending;
            total[s] += c * pending;
            total_sq[s] += c * c * pending;
        }
        b.length += pending;
        pending = 0;
    };

    for (std::uint64_t step = 1; step <= run.steps; ++step) {
        const std::size_t focal = pick_by_count(counts, draws.below(static_cast<std::uint64_t>(pop)));
        std::size_t next = focal;
        if (mu > 0.0 && draws.unit() < mu) {
            if (run.explore_excludes_current) {
                next = static_cast<std::size_t>(draws.below(n - 1));
                if (next >= focal) ++next;
            } else {
                next = static_cast<std::size_t>(draws.below(n));
            }
        } else {
            // Model is a uniformly chosen agent other than the focal one.
            --counts[focal];
            const std::size_t model =
                pick_by_count(counts, draws.below(static_cast<std::uint64_t>(pop - 1)));
            ++counts[focal];
            if (model != focal &&
                draws.unit() < fermi_probability(payoff_of(focal), payoff_of(model), beta))
                next = model;
        }
        const bool sampled = step > run.burn_in;
        if (next != focal) {
            if (sampled) flush();
            --counts[focal];
            ++counts[next];
        }
        if (!sampled) continue;

        const std::uint64_t k = step - run.burn_in;  // 1-based sample index
        while (batch + 1 < batch_count && k > batch_end) {
            flush();
            ++batch;
            batch_end = samples * (batch + 1) / batch_count;
        }
        ++pending;
        if constexpr (kRecordTrace) {
            if ((k - 1) % run.thinning == 0) out.trace.push_back({step, counts});
        }
    }
    flush();

    est.samples = samples;
    est.mean_frequencies.assign(n, 0.0);
    est.standard_errors.assign(n, 0.0);
    if (samples == 0) return out;

    const long double denom = static_cast<long double>(samples) * pop;
    for (std::size_t s = 0; s < n; ++s)
        est.mean_frequencies[s] = static_cast<double>(total[s] / denom);

    // Integrated autocorrelation time estimated as batch_len * var(batch means) / var(sample).
    double worst_variance_ratio = 0.0;
    if (batch_count >= 2) {
        for (std::size_t s = 0; s < n; ++s) {
            long double mean_of_means = 0.0L;
            std::vector<long double> means(batch_count);
            for (std::size_t bi = 0; bi < batch_count; ++bi) {
                means[bi] = static_cast<long double>(batches[bi].sum[s]) /
                            (static_cast<long double>(batches[bi].length) * pop);
                mean_of_means += means[bi];
            }
            mean_of_means /= batch_count;
            long double ss = 0.0L;
            for (long double m : means) ss += (m - mean_of_means) * (m - mean_of_means);
            const double var_means = static_cast<double>(ss / (batch_count - 1));
            est.standard_errors[s] = std::sqrt(var_means / batch_count);
            const long double mean_sq =
                static_cast<long double>(total_sq[s]) / (static_cast<long double>(samples) * pop * pop);
            const double p = est.mean_frequencies[s];
            const double per_sample = static_cast<double>(mean_sq) - p * p;
            if (per_sample > 0.0 && var_means > 0.0) {
                const double batch_len = static_cast<double>(samples) / batch_count;
                worst_variance_ratio =
                    std::max(worst_variance_ratio, var_means * batch_len / per_sample);
            }
        }
    }
    est.effective_samples =
        worst_variance_ratio > 1.0
            ? static_cast<std::uint64_t>(static_cast<double>(samples) / worst_variance_ratio)
            : samples;
    return out;
}

}  // namespace

void SimulationRun::validate() const {
    config.validate();
    const std::size_t n = payoffs.size();
    if (n < 1) throw DimensionError("simulation needs at least one strategy");
    if (steps < burn_in) throw InvalidParameter("steps must be >= burn_in");
    if (thinning == 0) throw InvalidParameter("thinning must be >= 1");
    if (explore_excludes_current && n < 2)
        throw InvalidParameter("exploring other strategies needs at least two of them");
    if (!initial_counts.empty()) {
        if (initial_counts.size() != n)
            throw DimensionError("initial counts must have one entry per strategy");
        long long sum = 0;
        for (int c : initial_counts) {
            if (c < 0) throw InvalidParameter("initial counts must be non-negative");
            sum += c;
        }
        if (sum != config.population_size) {
            std::ostringstream os;
            os << "initial counts sum to " << sum << ", population size is "
               << config.population_size;
            throw InvalidParameter(os.str());
        }
    }
}

FrequencyEstimate simulate(const SimulationRun& run) {
    return run_engine<false>(run, true).estimate;
}

OccupancyTrace occupancy_trace(const SimulationRun& run) {
    return run_engine<true>(run, false).trace;
}

SimulationOutput simulate_with_trace(const SimulationRun& run) {
    return run_engine<true>(run, true);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return SplitMix64::mix(SplitMix64::mix(base) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

}  // namespace normdyn
