#include "sgf/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sgf/errors.hpp"
#include "sgf/laws.hpp"
#include "sgf/ssa.hpp"

namespace sgf {

namespace {

constexpr std::array<const char*, kParamCount> kParamNames{"k1", "k2", "k3", "k4",
                                                          "k5", "k6", "k7", "c_s"};

double sample_in(const Bounds& b, Rng& rng) { return b.low + uniform01(rng) * (b.high - b.low); }

double sanitize(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

void Dataset::validate() const {
    if (points.size() < 2) throw InvalidInput("dataset needs at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!std::isfinite(p.n) || !std::isfinite(p.x))
            throw InvalidInput("dataset values must be finite");
        if (!(p.n > 0.0)) throw InvalidInput("dataset sizes must be positive");
        if (i > 0 && !(p.n > points[i - 1].n))
            throw InvalidInput("dataset sizes must be strictly increasing");
    }
}

double Dataset::max_x() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, std::abs(p.x));
    return m;
}

std::string param_name(Param p) { return kParamNames[static_cast<std::size_t>(p)]; }

std::optional<Param> param_from_name(const std::string& name) {
    for (std::size_t i = 0; i < kParamCount; ++i) {
        if (name == kParamNames[i]) return static_cast<Param>(i);
    }
    if (name == "cs") return Param::Cs;
    return std::nullopt;
}

DeResult differential_evolution(std::span<const Bounds> bounds, const Objective& objective,
                                const DeSettings& settings) {
    const std::size_t dim = bounds.size();
    if (dim == 0) throw InvalidInput("differential evolution needs at least one parameter");
    for (const auto& b : bounds) {
        if (!std::isfinite(b.low) || !std::isfinite(b.high) || b.low > b.high)
            throw InvalidInput("bounds must be finite with low <= high");
    }
    const std::size_t np = settings.population != 0 ? settings.population : 15 * dim;
    if (np < 4) throw InvalidInput("population must hold at least 4 members");
    if (!(settings.crossover >= 0.0 && settings.crossover <= 1.0))
        throw InvalidInput("crossover probability must lie in [0, 1]");
    if (!(settings.f_min >= 0.0 && settings.f_min <= settings.f_max && settings.f_max <= 2.0))
        throw InvalidInput("mutation factor range must satisfy 0 <= f_min <= f_max <= 2");

    Rng rng(settings.seed);
    auto pick_index = [&](std::size_t n) {
        return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    };

    DeResult result;
    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    std::vector<double> values(np);
    for (auto& member : pop) {
        for (std::size_t j = 0; j < dim; ++j) member[j] = sample_in(bounds[j], rng);
    }
    for (std::size_t i = 0; i < np; ++i) {
        values[i] = sanitize(objective(pop[i]));
        ++result.evaluations;
    }

    std::size_t best = static_cast<std::size_t>(
        std::distance(values.begin(), std::min_element(values.begin(), values.end())));
    result.best_history.push_back(values[best]);

    auto spread_small = [&] {
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(np);
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(np));
        return std::isfinite(sd) && sd <= settings.atol + settings.tolerance * std::abs(mean);
    };

    std::vector<std::vector<double>> trials(np, std::vector<double>(dim));
    std::vector<double> trial_values(np);

    for (std::size_t gen = 0; gen < settings.max_generations; ++gen) {
        // All random draws for the generation happen before any evaluation.
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do { r1 = pick_index(np); } while (r1 == i);
            do { r2 = pick_index(np); } while (r2 == i || r2 == r1);
            do { r3 = pick_index(np); } while (r3 == i || r3 == r1 || r3 == r2);
            const double f = settings.f_min + uniform01(rng) * (settings.f_max - settings.f_min);
            const std::size_t forced = pick_index(dim);

            auto& trial = trials[i];
            for (std::size_t j = 0; j < dim; ++j) {
                if (j == forced || uniform01(rng) < settings.crossover) {
                    double v = pop[r1][j] + f * (pop[r2][j] - pop[r3][j]);
                    if (v < bounds[j].low || v > bounds[j].high) v = sample_in(bounds[j], rng);
                    trial[j] = v;
                } else {
                    trial[j] = pop[i][j];
                }
            }
        }

        for (std::size_t i = 0; i < np; ++i) {
            trial_values[i] = sanitize(objective(trials[i]));
            ++result.evaluations;
        }

        for (std::size_t i = 0; i < np; ++i) {
            if (trial_values[i] <= values[i]) {
                pop[i].swap(trials[i]);
                values[i] = trial_values[i];
                if (values[i] < values[best]) best = i;
            }
        }
        result.best_history.push_back(values[best]);
        result.generations = gen + 1;

        if (spread_small()) {
            result.converged = true;
            break;
        }
    }

    result.x = pop[best];
    result.value = values[best];
    return result;
}

FitSpec::FitSpec() {
    for (std::size_t i = 0; i < 7; ++i) bounds[i] = Bounds{0.0, 10.0};
    // c_s must stay positive
    bounds[static_cast<std::size_t>(Param::Cs)] = Bounds{1e-9, 10.0};
}

void FitSpec::validate() const {
    for (std::size_t i = 0; i < kParamCount; ++i) {
        const auto& b = bounds[i];
        if (!std::isfinite(b.low) || !std::isfinite(b.high) || b.low > b.high || b.low < 0.0)
            throw InvalidInput("bounds of " + std::string(kParamNames[i]) +
                               " must be finite, non-negative and ordered");
        if (fixed[i] && (!std::isfinite(*fixed[i]) || *fixed[i] < 0.0))
            throw InvalidInput("fixed value of " + std::string(kParamNames[i]) +
                               " must be finite and non-negative");
    }
    if (!std::isfinite(c_g) || c_g < 0.0) throw InvalidInput("c_g must be finite and non-negative");
    if (!(penalty_factor > 0.0)) throw InvalidInput("penalty factor must be positive");
    if (free_count() == 0) throw InvalidInput("at least one parameter must be free");
}

std::size_t FitSpec::free_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < kParamCount; ++i) {
        if (fixed[i]) continue;
        if (pin_cs_first && i == static_cast<std::size_t>(Param::Cs)) continue;
        ++count;
    }
    return count;
}

double FitSpec::penalty(const Dataset& data) const {
    const double m = data.max_x();
    return penalty_factor * (m > 0.0 ? m * m : 1.0);
}

Rates rates_of(const ParamVector& p) {
    return Rates{p[0], p[1], p[2], p[3], p[4], p[5], p[6]};
}

double objective_mse(const ParamVector& params, const Dataset& data, const FitSpec& spec,
                     const IntegrationSettings& settings) {
    for (std::size_t i = 0; i < kParamCount; ++i) {
        const bool pinned = spec.fixed[i] || (spec.pin_cs_first && i == static_cast<std::size_t>(Param::Cs));
        if (pinned) continue;
        if (!(params[i] >= spec.bounds[i].low && params[i] <= spec.bounds[i].high))
            throw InvalidInput(std::string(kParamNames[i]) + " lies outside its bounds");
    }
    const Rates rates = rates_of(params);
    const Contribution contribution{params[static_cast<std::size_t>(Param::Cs)], spec.c_g};
    rates.validate();
    contribution.validate();

    double sum = 0.0;
    for (const auto& p : data.points) {
        double x = 0.0;
        try {
            x = throughput(integrate_to_steady(SystemConfig{rates, contribution, p.n}, settings),
                           contribution);
        } catch (const Error&) {
            return spec.penalty(data);
        }
        sum += (x - p.x) * (x - p.x);
    }
    const double mse = sum / static_cast<double>(data.points.size());
    return std::isfinite(mse) ? mse : spec.penalty(data);
}

FitResult fit_dataset(const Dataset& data, const FitSpec& spec, const IntegrationSettings& settings) {
    data.validate();
    spec.validate();
    settings.validate();

    constexpr auto cs_index = static_cast<std::size_t>(Param::Cs);
    ParamVector base{};
    std::vector<std::size_t> free_idx;
    std::vector<Bounds> free_bounds;
    for (std::size_t i = 0; i < kParamCount; ++i) {
        if (spec.fixed[i]) {
            base[i] = *spec.fixed[i];
        } else if (spec.pin_cs_first && i == cs_index) {
            base[i] = data.points.front().x;
            if (!(base[i] > 0.0)) throw InvalidInput("pinning c_s needs a positive first throughput");
        } else {
            free_idx.push_back(i);
            free_bounds.push_back(spec.bounds[i]);
        }
    }

    auto assemble = [&](std::span<const double> x) {
        ParamVector full = base;
        for (std::size_t j = 0; j < free_idx.size(); ++j) full[free_idx[j]] = x[j];
        return full;
    };
    const Objective objective = [&](std::span<const double> x) {
        return objective_mse(assemble(x), data, spec, settings);
    };

    const DeResult de = differential_evolution(free_bounds, objective, spec.de);
    const ParamVector best = assemble(de.x);

    FitResult fit;
    fit.rates = rates_of(best);
    fit.contribution = Contribution{best[cs_index], spec.c_g};
    fit.mse = de.value;
    fit.generations_used = de.generations;
    fit.converged = de.converged;
    fit.objective_evaluations = de.evaluations;
    return fit;
}

}  // namespace sgf
