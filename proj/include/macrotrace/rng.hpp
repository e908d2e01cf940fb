#pragma once

#include <cmath>
#include <random>

namespace macrotrace::rng {

// std::uniform_real_distribution and friends are implementation-defined;
// these helpers are pinned to the mt19937_64 bit stream so seeded runs give
// identical values on every toolchain.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

inline std::uint64_t below(std::mt19937_64& g, std::uint64_t n) {
    // modulo bias is irrelevant for test-scale n
    return g() % n;
}

// Box-Muller, one variate per two draws.
inline double normal(std::mt19937_64& g) {
    double u1 = uniform01(g);
    double u2 = uniform01(g);
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace macrotrace::rng
