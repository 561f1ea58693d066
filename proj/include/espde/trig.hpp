#pragma once

#include <cstddef>
#include <vector>

namespace espde {

/// Trigonometric polynomial c_0 + sum_k (a_k cos(k w t) + b_k sin(k w t)) on a fixed base
/// frequency. Products and time derivatives stay inside the class, which is what the
/// series-defined probe signals need: powers of (offset + a sin(wt)) differentiated many times.
class TrigPoly {
  public:
    explicit TrigPoly(double base_omega) : omega_(base_omega), cos_(1, 0.0), sin_(1, 0.0) {}

    static TrigPoly constant(double base_omega, double value);
    static TrigPoly sine(double base_omega, double amplitude);  // amplitude * sin(w t)

    [[nodiscard]] double base_omega() const { return omega_; }
    [[nodiscard]] std::size_t harmonics() const { return cos_.size() - 1; }

    TrigPoly& operator+=(const TrigPoly& other);
    TrigPoly& operator*=(double s);
    [[nodiscard]] TrigPoly times(const TrigPoly& other) const;
    [[nodiscard]] TrigPoly pow(unsigned exponent) const;
    [[nodiscard]] TrigPoly derivative() const;
    [[nodiscard]] TrigPoly derivative(unsigned order) const;

    [[nodiscard]] double eval(double t) const;
    [[nodiscard]] double max_amplitude() const;  // |c0| + sum sqrt(a_k^2+b_k^2)

  private:
    void ensure(std::size_t k);

    double omega_;
    std::vector<double> cos_;  // cos_[0] is the constant term
    std::vector<double> sin_;  // sin_[0] unused
};

} // namespace espde
