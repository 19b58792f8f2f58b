#pragma once

#include <array>

namespace sgf {

// Transition rates of the seven reactions
//   2S -k1-> 2G,  S+G -k2-> 2G,  S+F -k3-> G+F,  G -k4-> S,
//   2G -k5-> 2F,  G+F -k6-> 2F,  F -k7-> G
// Volume is fixed to 1, so bimolecular rates act directly on counts.
struct Rates {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double k4 = 0.0;
    double k5 = 0.0;
    double k6 = 0.0;
    double k7 = 0.0;

    std::array<double, 7> as_array() const { return {k1, k2, k3, k4, k5, k6, k7}; }
    static Rates from_array(const std::array<double, 7>& k);

    bool all_zero() const;

    // Throws InvalidInput unless every rate is finite and non-negative.
    void validate() const;

    friend bool operator==(const Rates&, const Rates&) = default;
};

// Per-unit throughput of solo and grupo units; fermo units contribute nothing.
struct Contribution {
    double c_s = 1.0;
    double c_g = 0.0;

    void validate() const;

    friend bool operator==(const Contribution&, const Contribution&) = default;
};

struct PopulationState {
    double s = 0.0;
    double g = 0.0;
    double f = 0.0;
    double t = 0.0;

    double total() const { return s + g + f; }
};

struct SystemConfig {
    Rates rates;
    Contribution contribution;
    double n = 1.0;

    void validate() const;
};

struct Derivative3 {
    double ds = 0.0;
    double dg = 0.0;
    double df = 0.0;
};

struct Derivative2 {
    double ds = 0.0;
    double df = 0.0;
};

// Row-major 2x2 matrix of partials of (ds/dt, df/dt) with respect to (s, f).
struct Jacobian2 {
    double ds_ds = 0.0;
    double ds_df = 0.0;
    double df_ds = 0.0;
    double df_df = 0.0;
};

// Mean-field right-hand side of the three-state system. The components sum
// to zero for every input.
Derivative3 rhs_full(const PopulationState& state, const SystemConfig& cfg);

// Two-equation form with g = N - s - f substituted.
Derivative2 rhs_reduced(double s, double f, const SystemConfig& cfg);

Jacobian2 jacobian_reduced(double s, double f, const SystemConfig& cfg);

namespace detail {
// rhs_full without input validation, for inner integration loops.
Derivative3 rhs_full_unchecked(double s, double g, double f, const Rates& k) noexcept;
Jacobian2 jacobian_reduced_unchecked(double s, double f, double n, const Rates& k) noexcept;
}  // namespace detail

}  // namespace sgf
