#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgf/model.hpp"
#include "sgf/steady_state.hpp"

namespace sgf {

struct DataPoint {
    double n = 0.0;
    double x = 0.0;

    friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

struct Dataset {
    std::vector<DataPoint> points;
    std::string label;

    // >= 2 points, n strictly increasing and positive, all values finite.
    void validate() const;
    double max_x() const;
};

struct Bounds {
    double low = 0.0;
    double high = 1.0;
};

// Parameter vector layout used by the fitter: k1..k7 then c_s.
enum class Param : std::size_t { K1 = 0, K2, K3, K4, K5, K6, K7, Cs };
inline constexpr std::size_t kParamCount = 8;

std::string param_name(Param p);
std::optional<Param> param_from_name(const std::string& name);

using ParamVector = std::array<double, kParamCount>;

struct DeSettings {
    // 0 means 15 x number of free parameters
    std::size_t population = 0;
    double f_min = 0.5;
    double f_max = 1.0;
    double crossover = 0.7;
    std::size_t max_generations = 300;
    double tolerance = 1e-8;
    double atol = 0.0;
    std::uint64_t seed = 12345;
};

struct DeResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t generations = 0;
    bool converged = false;
    std::size_t evaluations = 0;
    // best value after initialization and after each generation
    std::vector<double> best_history;
};

using Objective = std::function<double(std::span<const double>)>;

// DE/rand/1/bin with dithered F, one forced crossover coordinate, greedy
// generation-synchronous selection and uniform resampling of out-of-bounds
// mutant coordinates. Stops when std(values) <= atol + tolerance * |mean|.
DeResult differential_evolution(std::span<const Bounds> bounds, const Objective& objective,
                                const DeSettings& settings);

struct FitSpec {
    std::array<Bounds, kParamCount> bounds;
    std::array<std::optional<double>, kParamCount> fixed;
    double c_g = 0.0;
    // pin c_s to the throughput of the first data point
    bool pin_cs_first = false;
    DeSettings de;
    // integration failures score penalty_factor * (max x)^2
    double penalty_factor = 1e6;

    FitSpec();

    void validate() const;
    std::size_t free_count() const;
    double penalty(const Dataset& data) const;
};

struct FitResult {
    Rates rates;
    Contribution contribution;
    double mse = 0.0;
    std::size_t generations_used = 0;
    bool converged = false;
    std::size_t objective_evaluations = 0;
};

Rates rates_of(const ParamVector& params);

// Mean squared error of X(n_i) = c_s s*(n_i) + c_g g*(n_i) against the data.
// Integration failures score spec.penalty(data) instead of throwing.
double objective_mse(const ParamVector& params, const Dataset& data, const FitSpec& spec,
                     const IntegrationSettings& settings = {});

FitResult fit_dataset(const Dataset& data, const FitSpec& spec,
                      const IntegrationSettings& settings = {});

}  // namespace sgf
