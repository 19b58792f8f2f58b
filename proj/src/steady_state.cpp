#include "sgf/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sgf/laws.hpp"

namespace sgf {

namespace {

struct Vec3 {
    double s = 0.0;
    double g = 0.0;
    double f = 0.0;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.s + b.s, a.g + b.g, a.f + b.f}; }
Vec3 operator*(double h, Vec3 a) { return {h * a.s, h * a.g, h * a.f}; }

Vec3 eval(const Vec3& y, const Rates& k) {
    const Derivative3 d = detail::rhs_full_unchecked(y.s, y.g, y.f, k);
    return {d.ds, d.dg, d.df};
}

double max_abs(const Vec3& v) {
    return std::max({std::abs(v.s), std::abs(v.g), std::abs(v.f)});
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// difference between the 5th and embedded 4th order weights
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
// Fraction of the real-axis stability limit (about 3.3) of the pair that a
// step may use; past it stiff components stop decaying and the residual stalls.
constexpr double kStableStep = 2.5;
// Populations below -kSimplexSlack * max(1, N) are a numerical failure.
constexpr double kSimplexSlack = 1e-6;

// Largest step that keeps h * |lambda| <= kStableStep for the reduced Jacobian.
double stable_step_cap(const Vec3& y, double n, const Rates& k) {
    const double s = std::clamp(y.s, 0.0, n);
    const double f = std::clamp(y.f, 0.0, n - s);
    const Jacobian2 j = detail::jacobian_reduced_unchecked(s, f, n, k);
    const double half_trace = 0.5 * (j.ds_ds + j.df_df);
    const double det = j.ds_ds * j.df_df - j.ds_df * j.df_ds;
    const double disc = half_trace * half_trace - det;
    const double radius = disc >= 0.0 ? std::abs(half_trace) + std::sqrt(disc)
                                      : std::sqrt(std::max(det, 0.0));
    return radius > 0.0 ? kStableStep / radius : std::numeric_limits<double>::infinity();
}

PopulationState as_state(const Vec3& y, double t) { return {y.s, y.g, y.f, t}; }

FixedPoint make_fixed_point(const SystemConfig& cfg, const Vec3& y, double residual,
                            Stability stability, const IntegrationDiagnostics& diag) {
    FixedPoint fp;
    fp.n = cfg.n;
    fp.s_star = std::max(0.0, y.s);
    fp.g_star = std::max(0.0, y.g);
    fp.f_star = std::max(0.0, y.f);
    fp.stability = stability;
    fp.residual = residual;
    fp.diagnostics = diag;
    return fp;
}

std::string describe_n(double n) {
    std::ostringstream os;
    os << n;
    return os.str();
}

}  // namespace

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
    }
    return "unknown";
}

void IntegrationSettings::validate() const {
    if (!(dt_initial > 0.0) || !std::isfinite(dt_initial))
        throw InvalidInput("dt_initial must be positive");
    if (!(t_max > 0.0)) throw InvalidInput("t_max must be positive");
    if (!(steady_tol > 0.0)) throw InvalidInput("steady_tol must be positive");
    if (max_steps == 0) throw InvalidInput("max_steps must be positive");
    if (!(rtol > 0.0) || !(atol >= 0.0)) throw InvalidInput("rtol must be positive, atol non-negative");
}

Stability classify_stability(double s, double f, const SystemConfig& cfg, double tol) {
    s = std::clamp(s, 0.0, cfg.n);
    f = std::clamp(f, 0.0, cfg.n - s);
    const Jacobian2 j = jacobian_reduced(s, f, cfg);

    const double half_trace = 0.5 * (j.ds_ds + j.df_df);
    const double det = j.ds_ds * j.df_df - j.ds_df * j.df_ds;
    const double disc = half_trace * half_trace - det;
    // largest real part of the two eigenvalues
    const double max_re = disc >= 0.0 ? half_trace + std::sqrt(disc) : half_trace;

    if (max_re < -tol) return Stability::Stable;
    if (max_re > tol) return Stability::Unstable;
    return Stability::Marginal;
}

FixedPoint integrate_to_steady(const SystemConfig& cfg, const IntegrationSettings& settings) {
    cfg.validate();
    settings.validate();

    const Rates& k = cfg.rates;
    const double n = cfg.n;
    const double threshold = settings.steady_tol * std::max(1.0, n);
    const double floor = -kSimplexSlack * std::max(1.0, n);

    Vec3 y{n, 0.0, 0.0};
    double t = 0.0;
    IntegrationDiagnostics diag;

    // No reactions: every point is an equilibrium. Stable by convention.
    if (k.all_zero()) {
        return make_fixed_point(cfg, y, 0.0, Stability::Stable, diag);
    }

    Vec3 k1 = eval(y, k);
    double residual = max_abs(k1);
    double h = std::min(settings.dt_initial, settings.t_max);
    int consecutive = 0;
    std::size_t attempts = 0;

    while (true) {
        if (attempts >= settings.max_steps || t >= settings.t_max) {
            throw ConvergenceError("no steady state for N=" + describe_n(n) + " within " +
                                       (attempts >= settings.max_steps ? "max_steps" : "t_max"),
                                   as_state(y, t), residual);
        }
        ++attempts;
        h = std::min({h, settings.t_max - t, stable_step_cap(y, n, k)});

        const Vec3 k2 = eval(y + (h * a21) * k1, k);
        const Vec3 k3 = eval(y + h * (a31 * k1 + a32 * k2), k);
        const Vec3 k4 = eval(y + h * (a41 * k1 + a42 * k2 + a43 * k3), k);
        const Vec3 k5 = eval(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k);
        const Vec3 k6 = eval(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k);
        const Vec3 y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec3 k7 = eval(y_new, k);
        const Vec3 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        auto scaled = [&](double e, double a, double b) {
            const double sc = settings.atol + settings.rtol * std::max(std::abs(a), std::abs(b));
            return e / sc;
        };
        const double es = scaled(err.s, y.s, y_new.s);
        const double eg = scaled(err.g, y.g, y_new.g);
        const double ef = scaled(err.f, y.f, y_new.f);
        const double err_norm = std::sqrt((es * es + eg * eg + ef * ef) / 3.0);

        if (!std::isfinite(err_norm)) {
            throw NumericalFailure("non-finite error estimate at N=" + describe_n(n),
                                   as_state(y, t));
        }

        if (err_norm <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;
            ++diag.accepted_steps;
            diag.t_final = t;
            diag.max_conservation_defect =
                std::max(diag.max_conservation_defect, std::abs(y.s + y.g + y.f - n));
            diag.min_population = std::min({diag.min_population, y.s, y.g, y.f});

            if (!std::isfinite(y.s) || !std::isfinite(y.g) || !std::isfinite(y.f)) {
                throw NumericalFailure("non-finite state at N=" + describe_n(n), as_state(y, t));
            }
            if (y.s < floor || y.g < floor || y.f < floor) {
                throw NumericalFailure("state left the simplex at N=" + describe_n(n),
                                       as_state(y, t));
            }

            residual = max_abs(k1);
            if (residual < threshold) {
                if (++consecutive >= 2) break;
            } else {
                consecutive = 0;
            }
            const double factor =
                err_norm == 0.0 ? kMaxFactor
                                : std::clamp(kSafety * std::pow(err_norm, -0.2), kMinFactor, kMaxFactor);
            h *= factor;
        } else {
            ++diag.rejected_steps;
            h *= std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2));
            if (h <= 1e-14 * std::max(1.0, t)) {
                throw NumericalFailure("step size underflow at N=" + describe_n(n),
                                       as_state(y, t));
            }
        }
    }

    const Stability stability = classify_stability(y.s, y.f, cfg, settings.steady_tol);
    return make_fixed_point(cfg, y, residual, stability, diag);
}

FixedPoint fixed_point_of(const SweepRow& row) {
    FixedPoint fp;
    fp.n = row.n;
    fp.s_star = row.s_star;
    fp.g_star = row.g_star;
    fp.f_star = row.f_star;
    fp.stability = row.stability;
    fp.diagnostics = row.diagnostics;
    return fp;
}

SweepError::SweepError(double n, const Error& cause)
    : Error("sweep", "at N=" + describe_n(n) + ": " + cause.kind() + ": " + cause.what()),
      n_(n),
      cause_kind_(cause.kind()) {}

SweepResult sweep(const Rates& rates, const Contribution& contribution,
                  std::span<const double> n_values, const IntegrationSettings& settings) {
    if (n_values.empty()) throw InvalidInput("sweep needs at least one system size");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (!(n_values[i] > 0.0) || !std::isfinite(n_values[i]))
            throw InvalidInput("system sizes must be positive and finite");
        if (i > 0 && !(n_values[i] > n_values[i - 1]))
            throw InvalidInput("system sizes must be strictly increasing");
    }
    rates.validate();
    contribution.validate();

    SweepResult result;
    result.rows.reserve(n_values.size());
    for (double n : n_values) {
        const SystemConfig cfg{rates, contribution, n};
        FixedPoint fp;
        try {
            fp = integrate_to_steady(cfg, settings);
        } catch (const Error& e) {
            throw SweepError(n, e);
        }
        SweepRow row;
        row.n = n;
        row.s_star = fp.s_star;
        row.g_star = fp.g_star;
        row.f_star = fp.f_star;
        row.throughput = throughput(fp, contribution);
        if (contribution.c_s > 0.0) row.speedup = speedup(fp, contribution);
        row.stability = fp.stability;
        row.diagnostics = fp.diagnostics;
        result.rows.push_back(row);
    }
    return result;
}

std::optional<CriticalPoint> find_critical_n(const SweepResult& sweep) {
    const auto& rows = sweep.rows;
    if (rows.empty()) throw InvalidInput("sweep has no rows");
    if (rows.size() < 3) return std::nullopt;

    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].throughput > rows[best].throughput) best = i;
    }
    if (best == 0) return std::nullopt;
    const bool drops = std::any_of(rows.begin() + static_cast<std::ptrdiff_t>(best) + 1, rows.end(),
                                   [&](const SweepRow& r) { return r.throughput < rows[best].throughput; });
    if (!drops) return std::nullopt;
    return CriticalPoint{rows[best].n, rows[best].throughput};
}

std::vector<double> size_grid(double lo, double hi, std::size_t steps) {
    if (!(lo > 0.0) || !std::isfinite(hi) || hi < lo)
        throw InvalidInput("size range must satisfy 0 < min <= max");
    std::vector<double> out;
    if (steps == 0) {
        for (std::size_t i = 0;; ++i) {
            const double v = lo + static_cast<double>(i);
            if (v > hi + 1e-9) break;
            out.push_back(v);
        }
    } else if (steps == 1) {
        out.push_back(lo);
    } else {
        for (std::size_t i = 0; i < steps; ++i) {
            out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
        }
        out.back() = hi;
        if (out.size() > 1 && !(out[1] > out[0])) throw InvalidInput("degenerate size range");
    }
    return out;
}

}  // namespace sgf
