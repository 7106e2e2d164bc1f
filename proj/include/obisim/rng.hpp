#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace obisim {

// Seed derivation and random draws for the simulator.
//
// Every consumer of randomness (each agent, each agent's jitter, the
// fundamental series, each latency assignment) owns an independent stream
// derived from (master seed, stable label). Streams keyed by stable labels
// mean that adding or removing one agent never perturbs the draws seen by
// any other agent under the same master seed.
//
// All distribution sampling is implemented here rather than through
// std::*_distribution, whose output sequences differ between standard
// library implementations; mt19937_64 itself is fully specified.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    return splitmix64(splitmix64(master) ^ fnv1a64(label));
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t master, std::string_view label)
        : engine_(derive_seed(master, label)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform on [lo, hi] in log space; lo > 0 required.
    double log_uniform(double lo, double hi) {
        if (lo <= 0.0 || hi < lo)
            throw std::invalid_argument("log_uniform: need 0 < lo <= hi");
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Uniform integer on [lo, hi] inclusive, via rejection on a bitmask.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(engine_()); // full 2^64 range
        std::uint64_t mask = span - 1;
        mask |= mask >> 1;  mask |= mask >> 2;  mask |= mask >> 4;
        mask |= mask >> 8;  mask |= mask >> 16; mask |= mask >> 32;
        std::uint64_t draw;
        do { draw = engine_() & mask; } while (draw >= span);
        return lo + static_cast<std::int64_t>(draw);
    }

    bool coin() { return (engine_() & 1ull) != 0; }

    // Box-Muller; consumes exactly two uniforms per call.
    double normal(double mean, double stddev) {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * mag * std::cos(2.0 * 3.141592653589793238462643 * u2);
    }

    double exponential(double mean) {
        if (mean <= 0.0) throw std::invalid_argument("exponential: mean must be > 0");
        return -mean * std::log(1.0 - uniform01());
    }

    // Knuth's product-of-uniforms method; falls back to a rounded normal
    // approximation for large means where the product underflows.
    int poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
        if (mean == 0.0) return 0;
        if (mean > 64.0) {
            const double d = normal(mean, std::sqrt(mean));
            return d <= 0.0 ? 0 : static_cast<int>(std::llround(d));
        }
        const double limit = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    // Log-normal with unit mean: exp(N(-sigma^2/2, sigma)). Used as the
    // multiplicative jitter shape.
    double lognormal_unit_mean(double sigma) {
        return std::exp(normal(-0.5 * sigma * sigma, sigma));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace obisim
