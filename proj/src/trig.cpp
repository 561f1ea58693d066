#include "espde/trig.hpp"

#include <cmath>
#include <stdexcept>

namespace espde {

TrigPoly TrigPoly::constant(double base_omega, double value) {
    TrigPoly p(base_omega);
    p.cos_[0] = value;
    return p;
}

TrigPoly TrigPoly::sine(double base_omega, double amplitude) {
    TrigPoly p(base_omega);
    p.ensure(1);
    p.sin_[1] = amplitude;
    return p;
}

void TrigPoly::ensure(std::size_t k) {
    if (cos_.size() <= k) {
        cos_.resize(k + 1, 0.0);
        sin_.resize(k + 1, 0.0);
    }
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& other) {
    ensure(other.harmonics());
    for (std::size_t k = 0; k < other.cos_.size(); ++k) {
        cos_[k] += other.cos_[k];
        sin_[k] += other.sin_[k];
    }
    return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
    for (auto& v : cos_) v *= s;
    for (auto& v : sin_) v *= s;
    return *this;
}

TrigPoly TrigPoly::times(const TrigPoly& other) const {
    // Product formulas: cos a cos b, sin a sin b, sin a cos b expanded into sum/difference
    // harmonics. Harmonic count grows additively, which is fine for the short series here.
    TrigPoly r(omega_);
    r.ensure(harmonics() + other.harmonics());
    auto add_cos = [&](std::size_t k, double v) { r.cos_[k] += v; };
    auto add_sin = [&](std::size_t k, double v) {
        if (k == 0) return;  // sin(0) term vanishes
        r.sin_[k] += v;
    };
    for (std::size_t i = 0; i < cos_.size(); ++i) {
        for (std::size_t j = 0; j < other.cos_.size(); ++j) {
            const double cc = cos_[i] * other.cos_[j];
            const double ss = sin_[i] * other.sin_[j];
            const double cs = cos_[i] * other.sin_[j];
            const double sc = sin_[i] * other.cos_[j];
            const std::size_t sum = i + j;
            const std::size_t dif = i > j ? i - j : j - i;
            if (cc != 0.0) { add_cos(sum, 0.5 * cc); add_cos(dif, 0.5 * cc); }
            if (ss != 0.0) { add_cos(dif, 0.5 * ss); add_cos(sum, -0.5 * ss); }
            // sin(i) cos(j) = (sin(i+j) + sin(i-j))/2 with sin(-k) = -sin(k)
            if (sc != 0.0) {
                add_sin(sum, 0.5 * sc);
                if (i >= j) add_sin(dif, 0.5 * sc);
                else add_sin(dif, -0.5 * sc);
            }
            if (cs != 0.0) {
                add_sin(sum, 0.5 * cs);
                if (j >= i) add_sin(dif, 0.5 * cs);
                else add_sin(dif, -0.5 * cs);
            }
        }
    }
    return r;
}

TrigPoly TrigPoly::pow(unsigned exponent) const {
    TrigPoly r = TrigPoly::constant(omega_, 1.0);
    TrigPoly base = *this;
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) r = r.times(base);
        e >>= 1u;
        if (e > 0) base = base.times(base);
    }
    return r;
}

TrigPoly TrigPoly::derivative() const {
    TrigPoly r(omega_);
    r.ensure(harmonics());
    // d/dt [a cos(kwt) + b sin(kwt)] = kw (b cos(kwt) - a sin(kwt))
    for (std::size_t k = 1; k < cos_.size(); ++k) {
        const double kw = static_cast<double>(k) * omega_;
        r.cos_[k] = kw * sin_[k];
        r.sin_[k] = -kw * cos_[k];
    }
    return r;
}

TrigPoly TrigPoly::derivative(unsigned order) const {
    TrigPoly r = *this;
    for (unsigned i = 0; i < order; ++i) r = r.derivative();
    return r;
}

double TrigPoly::eval(double t) const {
    double v = cos_[0];
    if (cos_.size() > 1) {
        const double c1 = std::cos(omega_ * t);
        const double s1 = std::sin(omega_ * t);
        // Chebyshev-style recurrence for cos(k w t), sin(k w t)
        double ck = 1.0, sk = 0.0;
        for (std::size_t k = 1; k < cos_.size(); ++k) {
            const double cn = ck * c1 - sk * s1;
            const double sn = sk * c1 + ck * s1;
            ck = cn;
            sk = sn;
            v += cos_[k] * ck + sin_[k] * sk;
        }
    }
    return v;
}

double TrigPoly::max_amplitude() const {
    double v = std::abs(cos_[0]);
    for (std::size_t k = 1; k < cos_.size(); ++k) v += std::hypot(cos_[k], sin_[k]);
    return v;
}

} // namespace espde
