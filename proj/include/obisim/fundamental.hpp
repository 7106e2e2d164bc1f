#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "obisim/mean_reversion.hpp"
#include "obisim/rng.hpp"
#include "obisim/time.hpp"

namespace obisim {

struct FundamentalParams {
    std::int64_t r_bar_cents = 100'000;
    double kappa = 0.0;                // per-ns mean reversion rate, in (0, 1)
    double sigma_s_sq = 0.0;           // per-ns shock variance, cents^2
    double megashock_rate_per_ns = 0.0;
    double megashock_var = 0.0;        // cents^2

    void validate() const {
        if (!(kappa > 0.0 && kappa < 1.0))
            throw std::invalid_argument("fundamental: kappa must be in (0, 1)");
        if (sigma_s_sq < 0.0)
            throw std::invalid_argument("fundamental: sigma_s_sq must be >= 0");
        if (megashock_rate_per_ns < 0.0 || megashock_var < 0.0)
            throw std::invalid_argument("fundamental: megashock parameters must be >= 0");
        if (r_bar_cents < 1)
            throw std::invalid_argument("fundamental: r_bar must be >= 1 cent");
    }
};

struct FundamentalContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// Sparse mean-reverting "true value" series. The series is realized lazily:
// each query advances the latest cached value across the elapsed gap in one
// closed-form step (decayed mean, accumulated shock variance, one Gaussian
// draw) plus a Poisson number of low-frequency, high-magnitude news shocks.
// Cost is proportional to the number of queries, never to elapsed time.
//
// Queries must arrive at non-decreasing times except for exact re-queries of
// already realized times, which return the cached value. Kernel event order
// guarantees this in simulation.
class FundamentalSeries {
public:
    FundamentalSeries(const FundamentalParams& params, RngStream rng)
        : params_(params), rng_(std::move(rng)) {
        params_.validate();
        cache_.emplace(0, params_.r_bar_cents);
        last_time_ = 0;
        last_value_ = params_.r_bar_cents;
    }

    std::int64_t value_at(SimTime t) {
        if (t <= last_time_) {
            auto it = cache_.find(t);
            if (it == cache_.end())
                throw FundamentalContractViolation(
                    "fundamental: query at " + std::to_string(t) +
                    " is earlier than realized time " + std::to_string(last_time_));
            return it->second;
        }
        const std::uint64_t delta = t - last_time_;
        const double mean =
            reversion_pull(params_.kappa, delta) * static_cast<double>(params_.r_bar_cents) +
            reversion_decay(params_.kappa, delta) * static_cast<double>(last_value_);
        const double var = accumulated_shock_variance(params_.kappa, delta, params_.sigma_s_sq);
        double value = rng_.normal(mean, std::sqrt(var));
        if (params_.megashock_rate_per_ns > 0.0) {
            const int shocks =
                rng_.poisson(params_.megashock_rate_per_ns * static_cast<double>(delta));
            const double shock_sd = std::sqrt(params_.megashock_var);
            for (int i = 0; i < shocks; ++i) value += rng_.normal(0.0, shock_sd);
        }
        const std::int64_t cents = std::max<std::int64_t>(1, std::llround(value));
        cache_.emplace(t, cents);
        last_time_ = t;
        last_value_ = cents;
        return cents;
    }

    // Noisy observation drawn from the *requesting agent's* stream so that
    // two agents observing the same instant share the underlying value but
    // not the noise.
    std::int64_t observe(SimTime t, double obs_noise_var, RngStream& agent_rng) {
        if (obs_noise_var < 0.0)
            throw std::invalid_argument("observe: negative noise variance");
        const std::int64_t value = value_at(t);
        const double noisy =
            static_cast<double>(value) + agent_rng.normal(0.0, std::sqrt(obs_noise_var));
        return std::max<std::int64_t>(1, std::llround(noisy));
    }

    const FundamentalParams& params() const { return params_; }

    // Realized (time, value) pairs in time order; one entry per distinct query.
    const std::map<SimTime, std::int64_t>& realized() const { return cache_; }

private:
    FundamentalParams params_;
    RngStream rng_;
    std::map<SimTime, std::int64_t> cache_;
    SimTime last_time_ = 0;
    std::int64_t last_value_ = 0;
};

} // namespace obisim
