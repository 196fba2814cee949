#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "sumdyn/errors.hpp"

namespace sumdyn {

// Exact nonnegative rational, used for window densities.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw ArgumentError("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    // Comparison via cross multiplication; operands here are window counts,
    // far below the overflow range.
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

} // namespace sumdyn
