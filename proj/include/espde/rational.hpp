#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace espde {

/// Exact rational number on int64, always kept normalized with positive denominator.
/// Probe frequencies are stored as rationals so that averaging windows can be computed
/// as exact multiples of every dither period.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    [[nodiscard]] Rational inverse() const {
        if (num == 0) throw std::invalid_argument("rational: inverse of zero");
        return Rational(den, num);
    }

    friend Rational operator+(Rational a, Rational b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rational operator-(Rational a, Rational b) { return Rational(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
    friend Rational operator/(Rational a, Rational b) { return a * b.inverse(); }
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rational a, Rational b) { return !(a == b); }
    friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
};

/// Least common multiple of two positive rationals: the smallest positive rational that is
/// an integer multiple of both. For a/b, c/d in lowest terms this is lcm(a,c)/gcd(b,d).
inline Rational rational_lcm(Rational a, Rational b) {
    if (a.num <= 0 || b.num <= 0) throw std::invalid_argument("rational_lcm: arguments must be positive");
    const std::int64_t n = std::lcm(a.num, b.num);
    const std::int64_t d = std::gcd(a.den, b.den);
    return Rational(n, d);
}

} // namespace espde
