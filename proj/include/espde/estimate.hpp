#pragma once

#include <cmath>
#include <deque>
#include <limits>

namespace espde {

/// First-order low-pass filter c/(s+c) advanced by the exact exponential integrator for a
/// piecewise-constant input: y+ = e^{-c dt} y + (1 - e^{-c dt}) u. The corner frequency may
/// be infinite ("unfiltered"), in which case the output tracks the input exactly.
struct LowPass {
    double corner = 1.0;
    double y = 0.0;

    [[nodiscard]] bool unfiltered() const { return corner == std::numeric_limits<double>::infinity(); }

    double step(double u, double dt) {
        if (unfiltered()) {
            y = u;
            return y;
        }
        const double decay = std::exp(-corner * dt);
        y = decay * y + (1.0 - decay) * u;
        return y;
    }
};

/// Instantaneous gradient estimate G = M(t) y(t).
inline double gradient_estimate(double payoff_sample, double demod_m) {
    return demod_m * payoff_sample;
}

/// Instantaneous own-curvature estimate H^ = N(t) y(t).
inline double hessian_estimate(double payoff_sample, double demod_n) {
    return demod_n * payoff_sample;
}

/// Running mean over exactly one averaging period: keeps (t, value) samples spanning the
/// window and integrates by trapezoid with interpolation at the trailing edge. Averages of
/// demodulated signals over Pi are the quantities the averaging theory speaks about; the
/// running controllers use the instantaneous estimates, so this is a diagnostic/test tool.
class WindowAverage {
  public:
    explicit WindowAverage(double period) : period_(period) {}

    void push(double t, double value) {
        samples_.emplace_back(t, value);
        const double cutoff = t - period_;
        while (samples_.size() > 2 && samples_[1].first <= cutoff) samples_.pop_front();
    }

    [[nodiscard]] bool ready() const {
        return samples_.size() >= 2 && samples_.back().first - samples_.front().first >= period_ - 1e-12;
    }

    /// Trapezoid mean over [t_now - period, t_now]; throws if the buffer span is short.
    [[nodiscard]] double mean() const;

    [[nodiscard]] double period() const { return period_; }

  private:
    double period_;
    std::deque<std::pair<double, double>> samples_;
};

} // namespace espde
