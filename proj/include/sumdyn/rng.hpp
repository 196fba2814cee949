#pragma once

#include <cstdint>
#include <random>

namespace sumdyn {

// Seeded RNG wrapper with pinned uniform-double extraction, so generated
// values do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) via rejection-free scaling (bound << 2^64,
    // bias negligible and fully deterministic).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(eng_()) * bound >> 64);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller on pinned uniforms.
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace sumdyn
