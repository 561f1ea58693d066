#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace espde {

/// Piecewise-linear CDF beta on [0, D] used as the weighting measure of distributed delays.
/// Knots (sigma_k, beta_k) with sigma and beta nondecreasing, beta from 0 to 1. Repeated
/// sigma values encode atoms (jumps), so unit steps are representable exactly.
class PiecewiseCdf {
  public:
    PiecewiseCdf(std::vector<std::pair<double, double>> knots, double domain);

    [[nodiscard]] double domain() const { return domain_; }
    [[nodiscard]] double value(double sigma) const;  // right-continuous CDF value

    /// Lebesgue-Stieltjes integral of f against d(beta): sloped segments by trapezoid on
    /// the density, jumps by point mass.
    [[nodiscard]] double integrate(const std::function<double(double)>& f) const;

    /// Characteristic value B(w) = integral of exp(i w sigma) d(beta), evaluated in closed
    /// form per segment.
    [[nodiscard]] std::complex<double> characteristic(double omega) const;

  private:
    std::vector<std::pair<double, double>> knots_;
    double domain_;
};

inline PiecewiseCdf::PiecewiseCdf(std::vector<std::pair<double, double>> knots, double domain)
    : knots_(std::move(knots)), domain_(domain) {
    if (!(domain_ > 0.0)) throw std::invalid_argument("cdf: domain must be positive");
    if (knots_.size() < 2) throw std::invalid_argument("cdf: needs at least two knots");
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        if (knots_[i + 1].first < knots_[i].first || knots_[i + 1].second < knots_[i].second)
            throw std::invalid_argument("cdf: knots must be nondecreasing");
    if (knots_.front().second != 0.0 || knots_.back().second != 1.0)
        throw std::invalid_argument("cdf: must rise from 0 to 1");
    if (knots_.front().first < 0.0 || knots_.back().first > domain_)
        throw std::invalid_argument("cdf: knots outside [0, D]");
}

inline double PiecewiseCdf::value(double sigma) const {
    if (sigma < knots_.front().first) return 0.0;
    double v = knots_.front().second;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const auto& [s0, b0] = knots_[i];
        const auto& [s1, b1] = knots_[i + 1];
        if (sigma >= s1) {
            v = b1;
            continue;
        }
        if (sigma > s0 && s1 > s0) v = b0 + (b1 - b0) * (sigma - s0) / (s1 - s0);
        break;
    }
    return v;
}

inline double PiecewiseCdf::integrate(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const auto& [s0, b0] = knots_[i];
        const auto& [s1, b1] = knots_[i + 1];
        const double mass = b1 - b0;
        if (mass <= 0.0) continue;
        if (s1 == s0) {
            acc += mass * f(s0);
        } else {
            // density is constant on the segment; resolve f by composite trapezoid
            const int cells = 32;
            const double h = (s1 - s0) / cells;
            double seg = 0.5 * (f(s0) + f(s1));
            for (int c = 1; c < cells; ++c) seg += f(s0 + c * h);
            acc += mass * seg * h / (s1 - s0);
        }
    }
    return acc;
}

inline std::complex<double> PiecewiseCdf::characteristic(double omega) const {
    std::complex<double> acc = 0.0;
    const std::complex<double> iw(0.0, omega);
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        const auto& [s0, b0] = knots_[i];
        const auto& [s1, b1] = knots_[i + 1];
        const double mass = b1 - b0;
        if (mass <= 0.0) continue;
        if (s1 == s0) {
            acc += mass * std::exp(iw * s0);
        } else if (std::abs(omega) < 1e-12) {
            acc += mass;
        } else {
            acc += mass * (std::exp(iw * s1) - std::exp(iw * s0)) / (iw * (s1 - s0));
        }
    }
    return acc;
}

} // namespace espde
