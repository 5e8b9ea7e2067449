#pragma once

#include <cstdint>

#include "opuc/common.hpp"

namespace opuc {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Counter-based generator: draw i of stream s under a seed is a pure function
// of (seed, s, i). Streams are statistically independent and order-insensitive,
// so reductions over samples are reproducible for any evaluation order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::splitmix64(seed ^ detail::splitmix64(stream ^ 0x5851F42D4C957F2DULL))) {}

    std::uint64_t next_u64() { return detail::splitmix64(key_ ^ (0xA0761D6478BD642FULL * ++counter_)); }

    // uniform in [0, 1) with 53 random bits
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform w.r.t. area on the closed disk of the given radius
    cplx next_uniform_disk(double radius) {
        const double r = radius * std::sqrt(next_unit());
        const double phi = two_pi * next_unit();
        return std::polar(r, phi);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace opuc
