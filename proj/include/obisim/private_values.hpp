#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "obisim/rng.hpp"

namespace obisim {

// Per-agent vector of incremental private values theta^q, one entry per
// position transition, indexed q = -q_max+1 .. q_max where q is the position
// reached by acquiring one more unit. Drawn N(0, sigma_pv_sq) and sorted
// descending so marginal value diminishes with inventory.
class PrivateValueVector {
public:
    static PrivateValueVector draw(int q_max, double sigma_pv_sq, RngStream& rng) {
        if (q_max < 1) throw std::invalid_argument("private values: q_max must be >= 1");
        if (sigma_pv_sq < 0.0)
            throw std::invalid_argument("private values: variance must be >= 0");
        PrivateValueVector pv;
        pv.q_max_ = q_max;
        pv.theta_.resize(2 * static_cast<std::size_t>(q_max));
        const double sd = std::sqrt(sigma_pv_sq);
        for (double& t : pv.theta_) t = rng.normal(0.0, sd);
        std::sort(pv.theta_.begin(), pv.theta_.end(), std::greater<>());
        return pv;
    }

    int q_max() const { return q_max_; }
    const std::vector<double>& theta() const { return theta_; }

    // theta^q for q in [-q_max+1, q_max].
    double theta_at(int q) const {
        if (q < -q_max_ + 1 || q > q_max_)
            throw std::out_of_range("private values: transition index out of range");
        return theta_[static_cast<std::size_t>(q + q_max_ - 1)];
    }

    // Marginal value of buying one unit at current position q (moving to q+1).
    double buy_value(int position) const { return theta_at(position + 1); }

    // Marginal value given up by selling one unit at current position q.
    double sell_value(int position) const { return theta_at(position); }

    bool can_buy(int position) const { return position < q_max_; }
    bool can_sell(int position) const { return position > -q_max_; }

private:
    std::vector<double> theta_;
    int q_max_ = 0;
};

} // namespace obisim
