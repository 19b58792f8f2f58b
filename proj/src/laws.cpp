#include "sgf/laws.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgf/errors.hpp"

namespace sgf {

namespace {

void require_size(double n) {
    if (!std::isfinite(n) || n < 1.0) throw InvalidInput("system size must be >= 1");
}

void require_positive_size(double n) {
    if (!std::isfinite(n) || n <= 0.0) throw InvalidInput("system size must be positive");
}

void require_rate(double k, const char* name, bool strictly_positive) {
    if (!std::isfinite(k) || k < 0.0 || (strictly_positive && k == 0.0)) {
        throw InvalidInput(std::string(name) + (strictly_positive ? " must be positive"
                                                                  : " must be non-negative"));
    }
}

FixedPoint closed_form_point(const Rates& rates, double n, double s, double f) {
    FixedPoint fp;
    fp.n = n;
    fp.s_star = s;
    fp.f_star = f;
    fp.g_star = n - s - f;
    const SystemConfig cfg{rates, Contribution{}, n};
    const Derivative3 d = detail::rhs_full_unchecked(s, fp.g_star, f, rates);
    fp.residual = std::max({std::abs(d.ds), std::abs(d.dg), std::abs(d.df)});
    fp.stability = rates.all_zero() ? Stability::Stable
                                    : classify_stability(s, f, cfg, IntegrationSettings{}.steady_tol);
    return fp;
}

}  // namespace

AmdahlParams::AmdahlParams(double sigma) : sigma_(sigma) {
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw InvalidInput("Amdahl sigma must lie in [0, 1]");
}

GustafsonParams::GustafsonParams(double sigma) : sigma_(sigma) {
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw InvalidInput("Gustafson sigma must lie in [0, 1]");
}

UslParams::UslParams(double sigma, double kappa) : sigma_(sigma), kappa_(kappa) {
    if (!std::isfinite(sigma)) throw InvalidInput("USL sigma must be finite");
    if (!std::isfinite(kappa) || kappa < 0.0) throw InvalidInput("USL kappa must be >= 0");
}

SwarmParams::SwarmParams(double a, double b, double c) : a_(a), b_(b), c_(c) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("swarm a must be positive");
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("swarm b must be positive");
    if (!(c < 0.0) || !std::isfinite(c)) throw InvalidInput("swarm c must be negative");
}

double amdahl_speedup(const AmdahlParams& p, double n) {
    require_size(n);
    return n / (1.0 + p.sigma() * (n - 1.0));
}

double gustafson_speedup(const GustafsonParams& p, double n) {
    require_size(n);
    return n + (1.0 - n) * p.sigma();
}

double usl_speedup(const UslParams& p, double n) {
    require_size(n);
    const double denom = 1.0 + p.sigma() * (n - 1.0) + p.kappa() * n * (n - 1.0);
    if (!(denom > 0.0)) throw DomainError("USL denominator is not positive");
    return n / denom;
}

double swarm_performance(const SwarmParams& p, double n) {
    require_size(n);
    return p.a() * std::pow(n, p.b()) * std::exp(p.c() * n);
}

double throughput(const FixedPoint& fp, const Contribution& c) {
    return c.c_s * fp.s_star + c.c_g * fp.g_star;
}

double speedup(const FixedPoint& fp, const Contribution& c) {
    if (c.c_s == 0.0) {
        throw UndefinedSpeedup("speedup is undefined for c_s = 0 (X(1) = 0)");
    }
    return fp.s_star + (c.c_g / c.c_s) * fp.g_star;
}

FixedPoint fp_ideal_concurrency(double k1, double k4, double n) {
    require_rate(k1, "k1", false);
    require_rate(k4, "k4", true);
    require_positive_size(n);
    const Rates rates{.k1 = k1, .k4 = k4};
    if (k1 == 0.0) return closed_form_point(rates, n, n, 0.0);

    // (sqrt(k4^2 + 8 k1 k4 N) - k4) / (4 k1), rationalized to avoid
    // cancellation for small k1 N / k4.
    const double s = 2.0 * k4 * n / (k4 + std::sqrt(k4 * (k4 + 8.0 * k1 * n)));
    return closed_form_point(rates, n, s, 0.0);
}

FixedPoint fp_amdahl(double k1, double k2, double k4, double n) {
    require_rate(k1, "k1", true);
    require_rate(k2, "k2", true);
    require_rate(k4, "k4", true);
    require_positive_size(n);
    const Rates rates{.k1 = k1, .k2 = k2, .k4 = k4};

    double s = 0.0;
    if (std::abs(k2 - 2.0 * k1) < kAmdahlSingularSwitch * 2.0 * k1) {
        s = k4 * n / (k4 + k2 * n);
    } else {
        const double disc = k4 * k4 + 8.0 * k1 * k4 * n - 2.0 * k2 * k4 * n + k2 * k2 * n * n;
        s = (k4 + k2 * n - std::sqrt(disc)) / (2.0 * (k2 - 2.0 * k1));
    }
    return closed_form_point(rates, n, s, 0.0);
}

Rates diminishing_rates(double k1, double k4) {
    return Rates{k1, 2.0 * k1, 2.0 * k1, k4, 2.0 * k1, 2.0 * k1, k4};
}

namespace {

double diminishing_root(double k1, double k4, double n) {
    const double k1n = k1 * n;
    return std::sqrt(16.0 * std::pow(k1n, 4) + 48.0 * k4 * std::pow(k1n, 3) -
                     4.0 * k4 * k4 * k1n * k1n + 4.0 * std::pow(k4, 3) * k1n + std::pow(k4, 4));
}

}  // namespace

double fp_diminishing_solo(double k1, double k4, double n) {
    require_rate(k1, "k1", true);
    require_rate(k4, "k4", true);
    require_positive_size(n);
    const double k1n = k1 * n;
    const double root = diminishing_root(k1, k4, n);
    return 2.0 * k4 * k4 * n / (4.0 * k1n * k1n + root + 2.0 * k4 * k1n + k4 * k4);
}

FixedPoint fp_diminishing(double k1, double k4, double n) {
    const double s = fp_diminishing_solo(k1, k4, n);
    if (std::abs(k4 - 2.0 * k1 * n) < kDiminishingSingularBand * k4) {
        throw SingularFormula("fermo closed form is singular for k4 = 2 k1 N");
    }
    const double k1n = k1 * n;
    const double root = diminishing_root(k1, k4, n);
    const double num = 24.0 * std::pow(k1n, 3) - (2.0 * k1n + k4) * root +
                       4.0 * k4 * k4 * k1n + std::pow(k4, 3);
    const double den = 8.0 * k1 * k1 * k4 * n - 16.0 * std::pow(k1, 3) * n * n;
    const double f = -num / den;
    return closed_form_point(diminishing_rates(k1, k4), n, s, f);
}

double usl_approx_speedup(double k2, double k4, double n) {
    require_rate(k2, "k2", false);
    require_rate(k4, "k4", true);
    require_size(n);
    const double r = k2 / k4;
    return n / (r * r * n * n + r * n + 1.0);
}

}  // namespace sgf
