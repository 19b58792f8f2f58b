#pragma once

#include "sgf/model.hpp"
#include "sgf/steady_state.hpp"

namespace sgf {

// Classical scalability laws and the closed-form fixed points of the model.

class AmdahlParams {
public:
    explicit AmdahlParams(double sigma);
    double sigma() const { return sigma_; }

private:
    double sigma_;
};

class GustafsonParams {
public:
    explicit GustafsonParams(double sigma);
    double sigma() const { return sigma_; }

private:
    double sigma_;
};

// sigma may be negative (superlinear speedup); kappa >= 0.
class UslParams {
public:
    UslParams(double sigma, double kappa);
    double sigma() const { return sigma_; }
    double kappa() const { return kappa_; }

private:
    double sigma_;
    double kappa_;
};

// a * N^b * exp(c N) with a > 0, b > 0, c < 0.
class SwarmParams {
public:
    SwarmParams(double a, double b, double c);
    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }

private:
    double a_;
    double b_;
    double c_;
};

double amdahl_speedup(const AmdahlParams& p, double n);
double gustafson_speedup(const GustafsonParams& p, double n);
// Throws DomainError when the denominator is not positive.
double usl_speedup(const UslParams& p, double n);
double swarm_performance(const SwarmParams& p, double n);

// X = c_s s* + c_g g*
double throughput(const FixedPoint& fp, const Contribution& c);
// s* + (c_g / c_s) g*; throws UndefinedSpeedup for c_s == 0.
double speedup(const FixedPoint& fp, const Contribution& c);

// Only k1 and k4 non-zero. k1 == 0 yields the trivial point (N, 0, 0).
FixedPoint fp_ideal_concurrency(double k1, double k4, double n);

// Relative gap |k2 - 2 k1| / (2 k1) below which fp_amdahl uses the singular form.
inline constexpr double kAmdahlSingularSwitch = 1e-9;

// Only k1, k2 and k4 non-zero.
FixedPoint fp_amdahl(double k1, double k2, double k4, double n);

// Relative gap |k4 - 2 k1 N| / k4 below which the fermo formula of
// fp_diminishing is treated as singular.
inline constexpr double kDiminishingSingularBand = 1e-6;

// Rates constrained to k2 = k3 = k5 = k6 = 2 k1 and k7 = k4.
Rates diminishing_rates(double k1, double k4);

// Solo population of the constrained diminishing-returns fixed point; this
// part of the closed form has no singularity.
double fp_diminishing_solo(double k1, double k4, double n);

// Full fixed point of the constrained diminishing-returns system. Throws
// SingularFormula when k4 == 2 k1 N within kDiminishingSingularBand.
FixedPoint fp_diminishing(double k1, double k4, double n);

// N / ((k2/k4)^2 N^2 + (k2/k4) N + 1)
double usl_approx_speedup(double k2, double k4, double n);

}  // namespace sgf
