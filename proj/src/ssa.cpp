#include "sgf/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgf/errors.hpp"

namespace sgf {

namespace {

// Stoichiometric change (ds, dg, df) of each reaction.
constexpr std::array<std::array<int, 3>, 7> kStoichiometry{{
    {-2, +2, 0},   // 2S -> 2G
    {-1, +1, 0},   // S+G -> 2G
    {-1, +1, 0},   // S+F -> G+F
    {+1, -1, 0},   // G -> S
    {0, -2, +2},   // 2G -> 2F
    {0, -1, +1},   // G+F -> 2F
    {0, +1, -1},   // F -> G
}};

void validate_state(const DiscreteState& st) {
    if (st.s < 0 || st.g < 0 || st.f < 0) throw InvalidInput("populations must be non-negative");
}

}  // namespace

void SsaSettings::validate() const {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidInput("t_end must be positive");
    if (!(record_interval > 0.0) || !std::isfinite(record_interval))
        throw InvalidInput("record_interval must be positive");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index));
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::array<double, 7> propensities(const DiscreteState& st, const Rates& k) {
    const auto s = static_cast<double>(st.s);
    const auto g = static_cast<double>(st.g);
    const auto f = static_cast<double>(st.f);
    return {
        k.k1 * s * (s - 1.0),
        k.k2 * s * g,
        k.k3 * s * f,
        k.k4 * g,
        k.k5 * g * (g - 1.0),
        k.k6 * g * f,
        k.k7 * f,
    };
}

StepOutcome step(const DiscreteState& state, const Rates& rates, Rng& rng) {
    validate_state(state);
    const auto a = propensities(state, rates);
    double total = 0.0;
    for (double ai : a) total += ai;

    if (!(total > 0.0)) {
        return StepOutcome{state, std::numeric_limits<double>::infinity(), std::nullopt};
    }

    const double wait = -std::log1p(-uniform01(rng)) / total;
    const double pick = uniform01(rng) * total;

    int j = 0;
    double cumulative = a[0];
    while (j < 6 && (pick >= cumulative || a[j] == 0.0)) {
        ++j;
        cumulative += a[j];
    }

    DiscreteState next = state;
    next.s += kStoichiometry[j][0];
    next.g += kStoichiometry[j][1];
    next.f += kStoichiometry[j][2];
    next.t = state.t + wait;
    return StepOutcome{next, wait, j};
}

Trajectory simulate(std::int64_t n, const Rates& rates, const SsaSettings& settings, Rng& rng,
                    const EventObserver& on_event) {
    if (n < 1) throw InvalidInput("system size must be >= 1");
    rates.validate();
    settings.validate();

    Trajectory traj;
    const auto n_samples =
        static_cast<std::size_t>(std::floor(settings.t_end / settings.record_interval + 1e-9)) + 1;
    traj.samples.reserve(n_samples);

    DiscreteState state{n, 0, 0, 0.0};
    std::size_t next_sample = 0;
    auto sample_time = [&](std::size_t i) { return static_cast<double>(i) * settings.record_interval; };

    while (next_sample < n_samples) {
        const StepOutcome out = step(state, rates, rng);
        // Record every sample time that falls before the next event.
        while (next_sample < n_samples &&
               (out.absorbed() || sample_time(next_sample) < out.state.t)) {
            DiscreteState snap = state;
            snap.t = sample_time(next_sample);
            traj.samples.push_back(snap);
            ++next_sample;
        }
        if (out.absorbed()) break;
        state = out.state;
        ++traj.events;
        if (on_event) on_event(state);
    }
    return traj;
}

EnsembleStats run_ensemble(std::int64_t n, const Rates& rates, const SsaSettings& settings,
                           std::size_t runs, const EventObserver& on_event) {
    if (runs < 1) throw InvalidInput("runs must be >= 1");

    EnsembleStats stats;
    stats.runs = runs;
    std::vector<std::array<double, 3>> mean;
    std::vector<std::array<double, 3>> m2;

    // Welford accumulation in run order keeps the result independent of how
    // runs might be scheduled.
    for (std::size_t r = 0; r < runs; ++r) {
        Rng rng(derive_seed(settings.seed, r));
        const Trajectory traj = simulate(n, rates, settings, rng, on_event);
        stats.total_events += traj.events;
        if (r == 0) {
            mean.assign(traj.samples.size(), {0.0, 0.0, 0.0});
            m2.assign(traj.samples.size(), {0.0, 0.0, 0.0});
            stats.samples.resize(traj.samples.size());
            for (std::size_t i = 0; i < traj.samples.size(); ++i) stats.samples[i].t = traj.samples[i].t;
        }
        const double count = static_cast<double>(r + 1);
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            const DiscreteState& st = traj.samples[i];
            const std::array<double, 3> x{static_cast<double>(st.s), static_cast<double>(st.g),
                                          static_cast<double>(st.f)};
            for (std::size_t c = 0; c < 3; ++c) {
                const double delta = x[c] - mean[i][c];
                mean[i][c] += delta / count;
                m2[i][c] += delta * (x[c] - mean[i][c]);
            }
        }
    }

    for (std::size_t i = 0; i < stats.samples.size(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            stats.samples[i].mean[c] = mean[i][c];
            stats.samples[i].variance[c] =
                runs > 1 ? std::max(0.0, m2[i][c] / static_cast<double>(runs - 1)) : 0.0;
        }
    }
    return stats;
}

std::array<double, 3> time_averaged_mean(const EnsembleStats& stats, double t_from) {
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    std::size_t count = 0;
    for (const auto& sm : stats.samples) {
        if (sm.t < t_from) continue;
        for (std::size_t c = 0; c < 3; ++c) acc[c] += sm.mean[c];
        ++count;
    }
    if (count == 0) throw InvalidInput("no samples after the requested time");
    for (double& v : acc) v /= static_cast<double>(count);
    return acc;
}

}  // namespace sgf
