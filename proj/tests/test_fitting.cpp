#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sgf/errors.hpp"
#include "sgf/fitting.hpp"
#include "sgf/laws.hpp"
#include "sgf/presets.hpp"

using namespace sgf;

namespace {

double parabola(std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); }

double rosenbrock(std::span<const double> x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
}

Dataset ideal_line(int n_max) {
    Dataset d;
    for (int n = 1; n <= n_max; ++n) d.points.push_back({double(n), double(n)});
    return d;
}

ParamVector params_from(const Rates& k, double c_s) {
    ParamVector p{};
    const auto a = k.as_array();
    for (std::size_t i = 0; i < 7; ++i) p[i] = a[i];
    p[static_cast<std::size_t>(Param::Cs)] = c_s;
    return p;
}

Dataset model_data(const Rates& k, double c_s, const std::vector<double>& sizes) {
    Dataset d;
    for (double n : sizes) {
        const auto fp = integrate_to_steady(SystemConfig{k, {c_s, 0.0}, n});
        d.points.push_back({n, c_s * fp.s_star});
    }
    return d;
}

}  // namespace

TEST_CASE("differential evolution finds the parabola minimum") {
    const std::vector<Bounds> b{{0.0, 10.0}};
    DeSettings st;
    st.population = 20;
    st.max_generations = 200;
    const auto r = differential_evolution(b, parabola, st);
    CHECK(std::abs(r.x[0] - 3.0) < 1e-3);
    CHECK(r.value == (r.x[0] - 3.0) * (r.x[0] - 3.0));
    CHECK(r.generations <= 200);
}

TEST_CASE("differential evolution on a Rosenbrock bowl") {
    const std::vector<Bounds> b{{-2.0, 2.0}, {-2.0, 2.0}};
    DeSettings st;
    st.population = 40;
    st.max_generations = 600;
    st.seed = 7;
    const auto r = differential_evolution(b, rosenbrock, st);
    CHECK(r.value < 1e-4);
}

TEST_CASE("differential evolution is deterministic under a fixed seed") {
    const std::vector<Bounds> b{{-2.0, 2.0}, {-2.0, 2.0}};
    DeSettings st;
    st.population = 16;
    st.max_generations = 50;
    st.seed = 99;
    const auto a = differential_evolution(b, rosenbrock, st);
    const auto c = differential_evolution(b, rosenbrock, st);
    CHECK(a.x == c.x);
    CHECK(a.value == c.value);
    CHECK(a.best_history == c.best_history);
    CHECK(a.evaluations == c.evaluations);
    st.seed = 100;
    CHECK(differential_evolution(b, rosenbrock, st).best_history != a.best_history);
}

TEST_CASE("best value never increases and candidates stay in bounds") {
    const std::vector<Bounds> b{{-1.0, 0.5}, {2.0, 3.0}, {0.0, 0.0}};
    std::size_t outside = 0, calls = 0;
    const Objective obj = [&](std::span<const double> x) {
        ++calls;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (x[j] < b[j].low || x[j] > b[j].high) ++outside;
        }
        return std::sin(5 * x[0]) + (x[1] - 2.2) * (x[1] - 2.2);
    };
    DeSettings st;
    st.population = 12;
    st.max_generations = 80;
    st.seed = GENERATE(1, 2, 3);
    const auto r = differential_evolution(b, obj, st);
    CHECK(outside == 0);
    CHECK(calls == r.evaluations);
    CHECK(r.best_history.size() == r.generations + 1);
    for (std::size_t i = 1; i < r.best_history.size(); ++i)
        CHECK(r.best_history[i] <= r.best_history[i - 1]);
    CHECK(r.value == r.best_history.back());
}

TEST_CASE("non-finite objective values are never selected") {
    const std::vector<Bounds> b{{0.0, 10.0}};
    const Objective obj = [](std::span<const double> x) {
        return x[0] < 5.0 ? std::nan("") : (x[0] - 6.0) * (x[0] - 6.0);
    };
    DeSettings st;
    st.population = 10;
    st.max_generations = 100;
    const auto r = differential_evolution(b, obj, st);
    CHECK(std::isfinite(r.value));
    CHECK(std::abs(r.x[0] - 6.0) < 1e-3);
}

TEST_CASE("converged flag follows the spread criterion") {
    const std::vector<Bounds> b{{0.0, 10.0}};
    DeSettings st;
    st.population = 10;
    st.max_generations = 1000;
    st.atol = 1e-12;
    const auto r = differential_evolution(b, parabola, st);
    CHECK(r.converged);
    CHECK(r.generations < 1000);

    st.max_generations = 1;
    st.atol = 0.0;
    CHECK_FALSE(differential_evolution(b, parabola, st).converged);
}

TEST_CASE("differential evolution input validation") {
    const std::vector<Bounds> empty;
    CHECK_THROWS_AS(differential_evolution(empty, parabola, DeSettings{}), InvalidInput);
    const std::vector<Bounds> bad{{1.0, 0.0}};
    CHECK_THROWS_AS(differential_evolution(bad, parabola, DeSettings{}), InvalidInput);
    const std::vector<Bounds> ok{{0.0, 1.0}};
    DeSettings st;
    st.population = 3;
    CHECK_THROWS_AS(differential_evolution(ok, parabola, st), InvalidInput);
    st.population = 10;
    st.crossover = 1.5;
    CHECK_THROWS_AS(differential_evolution(ok, parabola, st), InvalidInput);
}

TEST_CASE("parameter names") {
    for (std::size_t i = 0; i < kParamCount; ++i) {
        const auto p = static_cast<Param>(i);
        CHECK(param_from_name(param_name(p)) == p);
    }
    CHECK(param_name(Param::Cs) == "c_s");
    CHECK(param_from_name("cs") == Param::Cs);
    CHECK_FALSE(param_from_name("k8").has_value());
}

TEST_CASE("objective on ideal-line data") {
    const Dataset d = ideal_line(12);
    FitSpec spec;
    ParamVector p{};
    p[static_cast<std::size_t>(Param::Cs)] = 1.0;
    CHECK(objective_mse(p, d, spec) == 0.0);

    double mean_n2 = 0.0;
    for (const auto& pt : d.points) mean_n2 += pt.n * pt.n;
    mean_n2 /= double(d.points.size());
    for (double delta : {0.5, -0.25, 1e-3}) {
        p[static_cast<std::size_t>(Param::Cs)] = 1.0 + delta;
        CHECK(objective_mse(p, d, spec) ==
              Catch::Approx(delta * delta * mean_n2).epsilon(1e-12));
    }
}

TEST_CASE("objective is self-consistent on model data") {
    const Rates k = preset_table1().rates;
    const Dataset d = model_data(k, 1.0, {1, 5, 10, 20, 40, 80});
    const double m = d.max_x();
    CHECK(objective_mse(params_from(k, 1.0), d, FitSpec{}) <= 1e-12 * m * m);
}

TEST_CASE("integration failure scores the penalty") {
    const Dataset d = ideal_line(5);
    FitSpec spec;
    IntegrationSettings tight;
    tight.max_steps = 2;
    const ParamVector p = params_from(preset_table1().rates, 1.0);
    const double pen = objective_mse(p, d, spec, tight);
    CHECK(pen == spec.penalty(d));
    CHECK(pen == 1e6 * 25.0);
    // larger than any genuine mse a bounded candidate can reach here
    ParamVector worst{};
    worst[static_cast<std::size_t>(Param::Cs)] = 10.0;
    CHECK(objective_mse(worst, d, spec) < pen);

    spec.penalty_factor = 3.0;
    CHECK(objective_mse(p, d, spec, tight) == 75.0);
}

TEST_CASE("objective rejects out-of-bounds candidates") {
    const Dataset d = ideal_line(3);
    FitSpec spec;
    ParamVector p{};
    p[0] = 11.0;
    p[static_cast<std::size_t>(Param::Cs)] = 1.0;
    CHECK_THROWS_AS(objective_mse(p, d, spec), InvalidInput);
    spec.fixed[0] = 11.0;
    CHECK_NOTHROW(objective_mse(p, d, spec));
}

TEST_CASE("fit spec bookkeeping") {
    FitSpec spec;
    CHECK(spec.free_count() == 8);
    spec.fixed[4] = 0.0;
    spec.fixed[5] = 0.0;
    CHECK(spec.free_count() == 6);
    spec.pin_cs_first = true;
    CHECK(spec.free_count() == 5);
    CHECK(spec.bounds[7].low > 0.0);
    CHECK_NOTHROW(spec.validate());
    for (std::size_t i = 0; i < kParamCount; ++i) spec.fixed[i] = 1.0;
    CHECK_THROWS_AS(spec.validate(), InvalidInput);
    FitSpec neg;
    neg.c_g = -1.0;
    CHECK_THROWS_AS(neg.validate(), InvalidInput);
}

TEST_CASE("fit recovers a two-parameter curve") {
    const Rates truth{.k1 = 0.01, .k4 = 1.0};
    const Dataset d = model_data(truth, 1.0, {1, 2, 4, 8, 16, 32, 64});
    FitSpec spec;
    for (std::size_t i : {1, 2, 3, 4, 5, 6}) spec.fixed[i] = truth.as_array()[i];
    spec.bounds[0] = {0.0, 0.1};
    spec.bounds[7] = {0.5, 2.0};
    spec.de.max_generations = 60;
    const auto fit = fit_dataset(d, spec);
    const double m = d.max_x();
    CHECK(fit.mse <= 1e-6 * m * m);
    CHECK(fit.rates.k4 == 1.0);
    CHECK(fit.contribution.c_g == 0.0);
    CHECK(fit.objective_evaluations == 30 * (fit.generations_used + 1));

    const auto again = fit_dataset(d, spec);
    CHECK(again.mse == fit.mse);
    CHECK(again.rates == fit.rates);
}

TEST_CASE("pinning c_s uses the first throughput") {
    Dataset d = ideal_line(4);
    for (auto& p : d.points) p.x *= 2.5;
    FitSpec spec;
    for (std::size_t i = 0; i < 7; ++i) spec.fixed[i] = 0.0;
    spec.pin_cs_first = true;
    spec.fixed[0].reset();
    spec.de.max_generations = 5;
    const auto fit = fit_dataset(d, spec);
    CHECK(fit.contribution.c_s == 2.5);
}

TEST_CASE("a flat dataset still fits") {
    Dataset d;
    for (int n = 1; n <= 6; ++n) d.points.push_back({double(n), 2.0});
    FitSpec spec;
    spec.fixed[2] = 0.0;
    spec.fixed[4] = 0.0;
    spec.fixed[5] = 0.0;
    spec.fixed[6] = 0.0;
    spec.de.max_generations = 20;
    const auto fit = fit_dataset(d, spec);
    CHECK(std::isfinite(fit.mse));
    CHECK(fit.mse >= 0.0);
}

TEST_CASE("SQL preset rises for small N and declines for large N") {
    const auto p = preset_table2("sql");
    auto x = [&](double n) {
        return throughput(integrate_to_steady(SystemConfig{p.rates, p.contribution, n}), p.contribution);
    };
    for (int n = 1; n < 7; ++n) CHECK(x(n + 1) > x(n));
    CHECK(x(200) < x(50));
    CHECK(x(400) < x(200));
}
