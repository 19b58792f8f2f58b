#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "sgf/model.hpp"

namespace sgf {

struct DiscreteState {
    std::int64_t s = 0;
    std::int64_t g = 0;
    std::int64_t f = 0;
    double t = 0.0;

    std::int64_t total() const { return s + g + f; }
    friend bool operator==(const DiscreteState&, const DiscreteState&) = default;
};

struct SsaSettings {
    double t_end = 10.0;
    std::uint64_t seed = 1;
    double record_interval = 0.1;

    void validate() const;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of run `index` in an ensemble driven by `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);

// Reaction propensities a1..a7. Same-species pairs use x(x-1).
std::array<double, 7> propensities(const DiscreteState& state, const Rates& rates);

struct StepOutcome {
    DiscreteState state;
    // +inf when absorbed
    double waiting_time = 0.0;
    // 0-based reaction index, empty when absorbed
    std::optional<int> reaction;

    bool absorbed() const { return !reaction.has_value(); }
};

// One event of the direct method. When the total propensity is zero the state
// is returned unchanged with an infinite waiting time.
StepOutcome step(const DiscreteState& state, const Rates& rates, Rng& rng);

struct Trajectory {
    // state at t = 0, record_interval, 2 record_interval, ... <= t_end
    std::vector<DiscreteState> samples;
    std::uint64_t events = 0;
};

using EventObserver = std::function<void(const DiscreteState&)>;

// Single run from (n, 0, 0). The observer, if set, sees every post-event state.
Trajectory simulate(std::int64_t n, const Rates& rates, const SsaSettings& settings,
                    Rng& rng, const EventObserver& on_event = {});

struct SampleMoments {
    double t = 0.0;
    std::array<double, 3> mean{};      // s, g, f
    std::array<double, 3> variance{};  // unbiased; 0 for a single run
};

struct EnsembleStats {
    std::vector<SampleMoments> samples;
    std::size_t runs = 0;
    std::uint64_t total_events = 0;
};

// `runs` independent trajectories; run i uses derive_seed(settings.seed, i).
// Moments are accumulated in run order.
EnsembleStats run_ensemble(std::int64_t n, const Rates& rates, const SsaSettings& settings,
                           std::size_t runs, const EventObserver& on_event = {});

// Mean over samples with t >= t_from of the ensemble-mean populations.
std::array<double, 3> time_averaged_mean(const EnsembleStats& stats, double t_from);

}  // namespace sgf
