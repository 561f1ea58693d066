#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "espde/channel.hpp"
#include "espde/dither.hpp"
#include "espde/estimate.hpp"

namespace espde {

/// Modified Bessel function I1 by its power series, truncated at 1e-14 relative.
double bessel_i1(double x);

/// Predictor feedback for a constant input delay D:
///   Udot = -c U + c k (G + H^ Int_{t-D}^{t} U(tau) dtau),
/// advanced by the exact filter integrator with a piecewise-constant bracket. The law owns
/// the history of its own output; before t = D the integral runs over the zero-padded past.
class DelayPredictor {
  public:
    DelayPredictor(double gain, double corner, double delay, double dt);

    double step(double grad, double hess, double dt);
    [[nodiscard]] double output() const { return filter_.y; }
    [[nodiscard]] double history_l2() const;  // Int U^2 over the delay window
    void set_compensation(bool on) { compensation_ = on; }

  private:
    double gain_;
    LowPass filter_;
    DelayLine history_;
    bool compensation_ = true;
};

/// Boundary law for a heat channel. Integral form:
///   bracket = k (G + H^ Int_0^D (D - x) u(x,t) dx),    u = d/dt of the error field,
/// with u obtained by differencing the stored previous channel profile and subtracting the
/// probe's reference field rate. State form (equivalent in the continuum):
///   bracket = k (G + H^ (theta_hat - Theta + a sin(w t))).
class HeatBoundaryLaw {
  public:
    enum class Form { integral, state };

    HeatBoundaryLaw(double gain, double corner, Form form);

    double step(double grad, double hess, const HeatChannel& channel, const HeatProbe& probe,
                double theta_hat, double t, double dt);
    [[nodiscard]] double output() const { return filter_.y; }
    [[nodiscard]] double error_field_l2() const { return u_l2_; }
    void set_compensation(bool on) { compensation_ = on; }

  private:
    double gain_;
    LowPass filter_;
    Form form_;
    bool compensation_ = true;
    std::vector<double> prev_profile_, u_;
    bool has_prev_ = false;
    double u_l2_ = 0.0;
};

/// Dirichlet boundary law for the reaction-advection-diffusion channel on [0, 1]:
///   bracket = k e^{-b/2eps} (gamma(1) G + H^ Int_0^1 e^{(b/2eps) x} m(1-x) u(x,t) dx)
/// with gamma and m the hyperbolic kernel weights of the backstepping solution.
class RadLaw {
  public:
    RadLaw(double gain, double corner, double diffusion, double advection, double reaction,
           std::size_t cells);

    double step(double grad, double hess, const RadChannel& channel, const RadProbe& probe,
                double t, double dt);
    [[nodiscard]] double output() const { return filter_.y; }
    [[nodiscard]] double error_field_l2() const { return u_l2_; }
    [[nodiscard]] double gamma_boundary() const { return gamma1_; }
    void set_compensation(bool on) { compensation_ = on; }

    static double gamma_weight(double x, double diffusion, double advection, double reaction);
    static double m_weight(double x, double diffusion, double advection, double reaction);

  private:
    double gain_;
    LowPass filter_;
    double gamma1_, scale_;
    std::vector<double> kernel_;  // e^{(b/2eps) x_j} m(1 - x_j)
    bool compensation_ = true;
    std::vector<double> prev_profile_, u_;
    bool has_prev_ = false;
    double u_l2_ = 0.0;
};

/// Backstepping law for the Kelvin-Voigt wave channel:
///   bracket = K (G - H^ Int_0^D cD I1(sqrt(c(D^2-x^2)))/sqrt(c(D^2-x^2)) u(x,t) dx)
/// with u read from the channel's velocity field minus the probe's reference rate. The
/// kernel weight has a removable singularity at x = D with value cD/2.
class WaveKvLaw {
  public:
    WaveKvLaw(double gain, double corner, double kernel_c, double depth, std::size_t cells);

    double step(double grad, double hess, const WaveChannel& channel, const WaveKvProbe& probe,
                double t, double dt);
    [[nodiscard]] double output() const { return filter_.y; }
    [[nodiscard]] double error_field_l2() const { return u_l2_; }
    void set_compensation(bool on) { compensation_ = on; }

    static double kernel_weight(double x, double kernel_c, double depth);

  private:
    double gain_;
    LowPass filter_;
    std::vector<double> kernel_;
    bool compensation_ = true;
    std::vector<double> u_;
    double u_l2_ = 0.0;
};

/// Neumann-actuated law for the undamped wave, taken literally from its matrix-exponential
/// form: rho(s) = k [0 I] e^{As} [0 I]^T with A = [[0,0],[I,0]], which collapses to the
/// constant k in the scalar case. The distributed state is an internal copy of the wave
/// dynamics driven by the law's own output.
class WaveNeumannLaw {
  public:
    WaveNeumannLaw(double gain, double corner, double injection, double depth, std::size_t cells);

    double step(double grad, double hess, double dt);
    [[nodiscard]] double output() const { return filter_.y; }
    [[nodiscard]] const WaveChannel& copy_state() const { return copy_; }
    void set_compensation(bool on) { compensation_ = on; }

  private:
    double gain_, injection_;
    LowPass filter_;
    WaveChannel copy_;
    bool compensation_ = true;
};

/// Stefan compensator:
///   U = lowpass{ -K (G + H^ Int_0^{s(t)} u(x,t) dx) },   u = alpha - beta,
/// with K < 0 so that the unfiltered average matches the backstepping target form.
class StefanLaw {
  public:
    StefanLaw(double gain, double corner);

    double step(double grad, double hess, const StefanChannel& channel, const StefanProbe& probe,
                double t, double dt);
    [[nodiscard]] double output() const { return filter_.y; }
    [[nodiscard]] double error_field_l2() const { return u_l2_; }
    void set_compensation(bool on) { compensation_ = on; }

  private:
    double gain_;
    LowPass filter_;
    bool compensation_ = true;
    std::vector<double> xs_, beta_, u_;
    double u_l2_ = 0.0;
};

/// Predictor for a time-varying delay D(t):
///   bracket = k (G + H^ (phi^{-1}(t) - t) * mean of U over [t - D(t), t]),
/// which reduces to the constant-delay predictor when D is constant. phi^{-1} is computed
/// by bisection on phi(t) = t - D(t), which must be strictly increasing.
class VariableDelayLaw {
  public:
    VariableDelayLaw(double gain, double corner, std::function<double(double)> delay_of_t,
                     double max_delay, double dt);

    double step(double grad, double hess, double t, double dt);
    [[nodiscard]] double output() const { return filter_.y; }
    [[nodiscard]] double history_l2() const;
    [[nodiscard]] double phi_inverse(double t) const;
    void set_compensation(bool on) { compensation_ = on; }

  private:
    double gain_;
    LowPass filter_;
    std::function<double(double)> delay_;
    double max_delay_;
    DelayLine history_;
    bool compensation_ = true;
};

/// Predictor for a distributed delay with weighting CDF beta:
///   bracket = k (G + H^ Int_0^D (1 - beta(sigma)) U(t - sigma) d sigma).
class DistributedDelayLaw {
  public:
    DistributedDelayLaw(double gain, double corner, PiecewiseCdf cdf, double delay, double dt);

    double step(double grad, double hess, double dt);
    [[nodiscard]] double output() const { return filter_.y; }
    [[nodiscard]] double history_l2() const;
    void set_compensation(bool on) { compensation_ = on; }

  private:
    double gain_;
    LowPass filter_;
    PiecewiseCdf cdf_;
    double delay_;
    DelayLine history_;
    bool compensation_ = true;
};

/// Classical extremum seeking on a static map: theta_hat_dot = k M(t) y(t).
inline double baseline_classical_es_step(double theta_hat, double y, double demod_m, double gain,
                                         double dt) {
    return theta_hat + dt * gain * demod_m * y;
}

/// Sidebar Nash seeking: u_hat_dot = k mu(t) J(t) with mu the player's own dither.
inline double baseline_nes_step(double u_hat, double payoff, double dither_mu, double gain,
                                double dt) {
    return u_hat + dt * gain * dither_mu * payoff;
}

} // namespace espde
