#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace obisim {

// Closed-form pieces of the mean-reverting value process shared by the
// fundamental generator and the traders' Bayesian belief updates.
//
// The process reverts toward a long-run mean at per-step rate kappa; over a
// gap of delta steps the old value decays by (1 - kappa)^delta and per-step
// shocks of variance sigma_s_sq accumulate geometrically.

// (1 - kappa)^delta, stable for tiny kappa and huge delta.
inline double reversion_decay(double kappa, std::uint64_t delta) {
    if (kappa <= 0.0 || kappa > 1.0)
        throw std::invalid_argument("reversion_decay: kappa must be in (0, 1]");
    if (delta == 0) return 1.0;
    if (kappa == 1.0) return 0.0;
    return std::exp(static_cast<double>(delta) * std::log1p(-kappa));
}

// 1 - (1 - kappa)^delta, computed without cancellation.
inline double reversion_pull(double kappa, std::uint64_t delta) {
    if (kappa <= 0.0 || kappa > 1.0)
        throw std::invalid_argument("reversion_pull: kappa must be in (0, 1]");
    if (delta == 0) return 0.0;
    if (kappa == 1.0) return 1.0;
    return -std::expm1(static_cast<double>(delta) * std::log1p(-kappa));
}

// Shock variance accumulated over delta steps:
//   sigma_s_sq * (1 - (1-kappa)^(2*delta)) / (1 - (1-kappa)^2)
// which equals sigma_s_sq * sum_{i=0}^{delta-1} (1-kappa)^(2i).
inline double accumulated_shock_variance(double kappa, std::uint64_t delta,
                                         double sigma_s_sq) {
    if (delta == 0) return 0.0;
    if (kappa == 1.0) return sigma_s_sq;
    const double one_minus_decay2 =
        -std::expm1(2.0 * static_cast<double>(delta) * std::log1p(-kappa));
    const double denom = kappa * (2.0 - kappa); // 1 - (1-kappa)^2
    return sigma_s_sq * one_minus_decay2 / denom;
}

// Stationary variance of the process, the delta -> infinity limit above.
inline double stationary_variance(double kappa, double sigma_s_sq) {
    return sigma_s_sq / (kappa * (2.0 - kappa));
}

} // namespace obisim
