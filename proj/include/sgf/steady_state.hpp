#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgf/errors.hpp"
#include "sgf/model.hpp"

namespace sgf {

enum class Stability { Stable, Unstable, Marginal };

std::string to_string(Stability s);

// Bookkeeping gathered over the accepted steps of one integration.
struct IntegrationDiagnostics {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double t_final = 0.0;
    // max |s+g+f - N| over accepted steps
    double max_conservation_defect = 0.0;
    // smallest raw population seen over accepted steps (before clamping)
    double min_population = 0.0;
};

struct FixedPoint {
    double n = 0.0;
    double s_star = 0.0;
    double g_star = 0.0;
    double f_star = 0.0;
    Stability stability = Stability::Marginal;
    double residual = 0.0;
    IntegrationDiagnostics diagnostics;
};

struct IntegrationSettings {
    double dt_initial = 1e-3;
    double t_max = 1e6;
    double steady_tol = 1e-9;
    std::size_t max_steps = 10'000'000;
    double rtol = 1e-8;
    double atol = 1e-10;

    void validate() const;
};

// Thrown when the steady-state threshold is not reached within t_max or
// max_steps. Carries the last accepted state.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, PopulationState last, double residual)
        : Error("convergence", what), last_(last), residual_(residual) {}

    const PopulationState& last_state() const noexcept { return last_; }
    double residual() const noexcept { return residual_; }

private:
    PopulationState last_;
    double residual_;
};

// Thrown when the integrated state leaves the simplex or turns non-finite.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, PopulationState last)
        : Error("numerical-failure", what), last_(last) {}

    const PopulationState& last_state() const noexcept { return last_; }

private:
    PopulationState last_;
};

// Stability of the point (s, f) from the eigenvalues of the reduced Jacobian.
// Stable iff both real parts < -tol, Unstable iff one exceeds +tol.
Stability classify_stability(double s, double f, const SystemConfig& cfg, double tol);

// Integrates the full system from (N, 0, 0) with an embedded Dormand-Prince
// 5(4) pair until max|rhs| < steady_tol * max(1, N) holds on two consecutive
// accepted steps.
FixedPoint integrate_to_steady(const SystemConfig& cfg,
                               const IntegrationSettings& settings = {});

struct SweepRow {
    double n = 0.0;
    double s_star = 0.0;
    double g_star = 0.0;
    double f_star = 0.0;
    double throughput = 0.0;
    // empty when c_s == 0
    std::optional<double> speedup;
    Stability stability = Stability::Marginal;
    IntegrationDiagnostics diagnostics;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

FixedPoint fixed_point_of(const SweepRow& row);

// Thrown by sweep() when a row fails; names the failing size.
class SweepError : public Error {
public:
    SweepError(double n, const Error& cause);

    double n() const noexcept { return n_; }
    const std::string& cause_kind() const noexcept { return cause_kind_; }

private:
    double n_;
    std::string cause_kind_;
};

SweepResult sweep(const Rates& rates, const Contribution& contribution,
                  std::span<const double> n_values,
                  const IntegrationSettings& settings = {});

struct CriticalPoint {
    double n_c = 0.0;
    double x_max = 0.0;
};

// Row of maximal throughput (ties to the smallest size) when it is not the
// first row and some later row has strictly smaller throughput.
std::optional<CriticalPoint> find_critical_n(const SweepResult& sweep);

// Evenly spaced sizes in [lo, hi]; with steps == 0 the integer grid lo, lo+1, ...
std::vector<double> size_grid(double lo, double hi, std::size_t steps = 0);

}  // namespace sgf
