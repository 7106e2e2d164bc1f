#pragma once

#include <cmath>
#include <stdexcept>

#include "obisim/mean_reversion.hpp"
#include "obisim/time.hpp"

namespace obisim {

// A background trader's running Bayesian estimate of the fundamental value.
// r_tilde is the posterior mean (cents), sigma_tilde_sq its variance, and
// obs_noise_var the agent's own observation noise sigma_n^2.
struct ValueBelief {
    double r_tilde = 0.0;
    double sigma_tilde_sq = 0.0;
    double obs_noise_var = 0.0;
    SimTime last_wake = 0;
};

struct DegeneratePrecision : std::domain_error {
    using std::domain_error::domain_error;
};

// Propagates the belief across the time elapsed since the agent last woke:
// the mean decays toward r_bar and the variance accumulates process shocks.
inline ValueBelief belief_advance(const ValueBelief& b, SimTime now,
                                  double kappa, double r_bar, double sigma_s_sq) {
    if (now < b.last_wake)
        throw std::invalid_argument("belief_advance: time ran backwards");
    const std::uint64_t delta = now - b.last_wake;
    const double decay = reversion_decay(kappa, delta);
    ValueBelief out = b;
    out.r_tilde = reversion_pull(kappa, delta) * r_bar + decay * b.r_tilde;
    out.sigma_tilde_sq = decay * decay * b.sigma_tilde_sq +
                         accumulated_shock_variance(kappa, delta, sigma_s_sq);
    out.last_wake = now;
    return out;
}

// Folds a fresh noisy observation into the (already advanced) belief:
// precision-weighted average of prior mean and observation.
inline ValueBelief belief_update(const ValueBelief& b, double observation) {
    const double total = b.obs_noise_var + b.sigma_tilde_sq;
    if (total <= 0.0)
        throw DegeneratePrecision("belief_update: zero total variance");
    ValueBelief out = b;
    out.r_tilde = (b.obs_noise_var / total) * b.r_tilde +
                  (b.sigma_tilde_sq / total) * observation;
    out.sigma_tilde_sq = b.obs_noise_var * b.sigma_tilde_sq / total;
    return out;
}

// The agent's estimate of the fundamental at the close T, as seen from `now`:
// the current estimate decayed toward r_bar over the remaining horizon.
inline double final_estimate(const ValueBelief& b, SimTime now, SimTime horizon,
                             double kappa, double r_bar) {
    if (horizon < now)
        throw std::invalid_argument("final_estimate: horizon before now");
    const std::uint64_t remaining = horizon - now;
    return reversion_pull(kappa, remaining) * r_bar +
           reversion_decay(kappa, remaining) * b.r_tilde;
}

} // namespace obisim
