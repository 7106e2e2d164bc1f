#pragma once

#include <cstdint>

namespace obisim {

// Virtual time: nanoseconds since market open (9:30 AM). Never floating point.
using SimTime = std::uint64_t;

constexpr SimTime ns_per_us = 1'000ull;
constexpr SimTime ns_per_ms = 1'000'000ull;
constexpr SimTime ns_per_s  = 1'000'000'000ull;

// 6.5 hour trading day, 9:30 AM - 4:00 PM.
constexpr SimTime market_close_ns = 23'400ull * ns_per_s;

} // namespace obisim
