#include "sgf/model.hpp"

#include <cmath>
#include <string>

#include "sgf/errors.hpp"

namespace sgf {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw InvalidInput(std::string(what) + " must be finite");
    }
}

}  // namespace

Rates Rates::from_array(const std::array<double, 7>& k) {
    return Rates{k[0], k[1], k[2], k[3], k[4], k[5], k[6]};
}

bool Rates::all_zero() const {
    for (double k : as_array()) {
        if (k != 0.0) return false;
    }
    return true;
}

void Rates::validate() const {
    const auto k = as_array();
    for (std::size_t i = 0; i < k.size(); ++i) {
        const std::string name = "k" + std::to_string(i + 1);
        if (!std::isfinite(k[i])) throw InvalidInput(name + " must be finite");
        if (k[i] < 0.0) throw InvalidInput(name + " must be non-negative");
    }
}

void Contribution::validate() const {
    require_finite(c_s, "c_s");
    require_finite(c_g, "c_g");
    if (c_s < 0.0) throw InvalidInput("c_s must be non-negative");
    if (c_g < 0.0) throw InvalidInput("c_g must be non-negative");
}

void SystemConfig::validate() const {
    rates.validate();
    contribution.validate();
    require_finite(n, "system size N");
    if (n <= 0.0) throw InvalidInput("system size N must be positive");
}

namespace detail {

Derivative3 rhs_full_unchecked(double s, double g, double f, const Rates& k) noexcept {
    // Reaction fluxes; each appears with opposite signs in two equations.
    const double r1 = 2.0 * k.k1 * s * s;  // S -> G
    const double r2 = k.k2 * s * g;        // S -> G
    const double r3 = k.k3 * s * f;        // S -> G
    const double r4 = k.k4 * g;            // G -> S
    const double r5 = 2.0 * k.k5 * g * g;  // G -> F
    const double r6 = k.k6 * g * f;        // G -> F
    const double r7 = k.k7 * f;            // F -> G

    const double s_to_g = r1 + r2 + r3;
    const double g_to_f = r5 + r6;
    return Derivative3{
        -s_to_g + r4,
        s_to_g - r4 - g_to_f + r7,
        g_to_f - r7,
    };
}

Jacobian2 jacobian_reduced_unchecked(double s, double f, double n, const Rates& k) noexcept {
    const double g = n - s - f;
    // dg/ds = dg/df = -1
    return Jacobian2{
        -4.0 * k.k1 * s - k.k2 * (g - s) - k.k3 * f - k.k4,
        k.k2 * s - k.k3 * s - k.k4,
        -4.0 * k.k5 * g - k.k6 * f,
        -4.0 * k.k5 * g + k.k6 * (g - f) - k.k7,
    };
}

}  // namespace detail

Derivative3 rhs_full(const PopulationState& state, const SystemConfig& cfg) {
    require_finite(state.s, "s");
    require_finite(state.g, "g");
    require_finite(state.f, "f");
    cfg.rates.validate();
    return detail::rhs_full_unchecked(state.s, state.g, state.f, cfg.rates);
}

Derivative2 rhs_reduced(double s, double f, const SystemConfig& cfg) {
    require_finite(s, "s");
    require_finite(f, "f");
    cfg.validate();
    if (s < 0.0 || f < 0.0) throw DomainError("populations must be non-negative");
    if (s + f > cfg.n * (1.0 + 1e-12)) throw DomainError("s + f exceeds N");

    const Rates& k = cfg.rates;
    const double g = cfg.n - s - f;
    return Derivative2{
        -2.0 * k.k1 * s * s - k.k2 * s * g - k.k3 * s * f + k.k4 * g,
        2.0 * k.k5 * g * g + k.k6 * f * g - k.k7 * f,
    };
}

Jacobian2 jacobian_reduced(double s, double f, const SystemConfig& cfg) {
    require_finite(s, "s");
    require_finite(f, "f");
    cfg.validate();
    if (s < 0.0 || f < 0.0) throw DomainError("populations must be non-negative");
    if (s + f > cfg.n * (1.0 + 1e-12)) throw DomainError("s + f exceeds N");
    return detail::jacobian_reduced_unchecked(s, f, cfg.n, cfg.rates);
}

}  // namespace sgf
