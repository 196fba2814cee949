#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>

#include "sumdyn/errors.hpp"

namespace sumdyn {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// (sqrt(5)-1)/2, the default rotation angle.
inline double golden_ratio_frac() { return (std::sqrt(5.0) - 1.0) / 2.0; }

// Reduce a real number to [0, 1).
inline double frac_unit(double v) {
    double f = v - std::floor(v);
    if (f >= 1.0) f = 0.0; // floor rounding at integer boundary
    if (f < 0.0) f = 0.0;
    return f;
}

namespace detail {

inline double u128_to_double(unsigned __int128 v) {
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(v >> 64)), 64) +
           static_cast<double>(static_cast<std::uint64_t>(v));
}

} // namespace detail

// Fractional part of n*x computed exactly from the dyadic representation of
// x (x = m * 2^-e with integer m), so no precision is lost for large |n|.
// The only rounding is the final conversion back to double.
inline double frac_mul(long long n, double x) {
    if (n == 0) return 0.0;
    double fx = frac_unit(x);
    if (fx == 0.0) return 0.0;

    bool neg = n < 0;
    unsigned long long un =
        neg ? static_cast<unsigned long long>(-(n + 1)) + 1ULL : static_cast<unsigned long long>(n);

    int e2 = 0;
    double mant = std::frexp(fx, &e2); // fx = mant * 2^e2, mant in [0.5, 1)
    auto mi = static_cast<unsigned long long>(std::ldexp(mant, 53)); // exact 53-bit integer
    int e = 53 - e2;                                                 // fx = mi / 2^e, e >= 53

    double f;
    if (e >= 117) {
        // un * mi < 2^116 < 2^e: the product never wraps past 1.
        f = static_cast<double>(un) * fx;
    } else {
        unsigned __int128 prod = static_cast<unsigned __int128>(un) * mi;
        unsigned __int128 mask = (static_cast<unsigned __int128>(1) << e) - 1;
        unsigned __int128 fracbits = prod & mask;
        f = std::ldexp(detail::u128_to_double(fracbits), -e);
    }
    if (f >= 1.0) f = std::nextafter(1.0, 0.0);
    if (neg && f != 0.0) f = 1.0 - f;
    if (f >= 1.0) f = std::nextafter(1.0, 0.0);
    return f;
}

// Distance on the circle R/Z.
inline double circle_dist(double a, double b) {
    double d = std::fabs(a - b);
    return d <= 0.5 ? d : 1.0 - d;
}

// Distance of a point to 0 on the circle.
inline double circle_norm(double a) {
    double f = frac_unit(a);
    return f <= 0.5 ? f : 1.0 - f;
}

// e(2*pi*i * turns)
inline std::complex<double> unit_phase(double turns) {
    double t = kTwoPi * frac_unit(turns);
    return {std::cos(t), std::sin(t)};
}

// Compensated (Kahan) accumulator for complex values.
struct KahanComplex {
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> c{0.0, 0.0};
    void add(std::complex<double> v) {
        std::complex<double> y = v - c;
        std::complex<double> t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

struct KahanReal {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace sumdyn
