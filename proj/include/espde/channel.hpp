#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <variant>
#include <vector>

#include "espde/measure.hpp"

namespace espde {

/// Fixed-length delay line sampled every dt with delay = taps * dt held exactly.
/// Slot 0 is the newest sample; slot `taps` the oldest (the delayed output).
class DelayLine {
  public:
    DelayLine() = default;
    DelayLine(std::size_t taps, double dt, double initial = 0.0);

    void push(double value);
    /// Pre-fills the whole window: slot j receives value_at_lag(j * dt).
    void preload(const std::function<double(double)>& value_at_lag);
    [[nodiscard]] double newest() const { return buf_[head_]; }
    [[nodiscard]] double delayed() const;                  // value taps*dt ago
    [[nodiscard]] double lagged(std::size_t steps) const;  // value steps*dt ago
    [[nodiscard]] double lagged_interp(double lag_seconds) const;

    /// Trapezoid of the stored history over the full window [t - taps*dt, t];
    /// exact (= k * delay) for a constant signal k.
    [[nodiscard]] double integral() const;
    /// Trapezoid of w(lag) * value(t - lag) over the window, lag in seconds.
    [[nodiscard]] double integral_weighted(const std::function<double(double)>& w) const;

    [[nodiscard]] std::size_t taps() const { return taps_; }
    [[nodiscard]] double dt() const { return dt_; }

  private:
    std::size_t taps_ = 0;
    double dt_ = 0.0;
    std::vector<double> buf_;
    std::size_t head_ = 0;
};

/// Composite trapezoid of a grid profile, optionally against a weight w(x).
double trapezoid(const std::vector<double>& profile, double dx);
double trapezoid_weighted(const std::vector<double>& profile, double dx,
                          const std::function<double(double)>& w);

/// Snaps dt so that delay/dt is an integer (transport-type channels need the delay to be
/// a whole number of samples).
double snap_dt_to_delay(double dt, double delay);

// ---------------------------------------------------------------------------
// Channels. Each maps the applied boundary input theta(t) to the propagated
// action Theta(t); state advances one dt per step(). output() refers to the
// current time, step(theta_next, dt) applies the boundary value at t + dt.
// ---------------------------------------------------------------------------

/// Pure transport of delay D: exact shift via the delay line, no numerical dispersion.
class TransportChannel {
  public:
    TransportChannel(double delay, double dt, double initial);

    /// Seeds the history with theta(t) for t in [-D, 0]: lag -> boundary value.
    void preload(const std::function<double(double)>& theta_at_lag) { line_.preload(theta_at_lag); }
    void step(double theta_next, double dt);
    [[nodiscard]] double output() const { return line_.delayed(); }
    [[nodiscard]] double delay() const { return delay_; }
    [[nodiscard]] const DelayLine& history() const { return line_; }

  private:
    double delay_;
    double dt_;
    DelayLine line_;
};

/// Heat equation a_t = a_xx on [0, D]; Neumann a_x(0) = 0 at the measurement end,
/// Dirichlet a(D) = theta at the actuated end. Crank-Nicolson in time, second-order
/// central differences in space (unconditionally stable).
class HeatChannel {
  public:
    HeatChannel(double depth, std::size_t cells, double initial);

    /// Seeds the field with profile(x_j); node M must match the first boundary input.
    void set_profile(const std::function<double(double)>& profile);
    void step(double theta_next, double dt);
    [[nodiscard]] double output() const { return field_.front(); }
    [[nodiscard]] const std::vector<double>& profile() const { return field_; }
    [[nodiscard]] double dx() const { return dx_; }
    [[nodiscard]] double depth() const { return depth_; }

  private:
    double depth_, dx_;
    std::vector<double> field_;  // nodes 0..M, node M is the boundary input
    std::vector<double> sub_, diag_, sup_, rhs_;
};

/// Reaction-advection-diffusion a_t = eps a_xx + b a_x + lambda a on [0, 1];
/// Neumann at x = 0, Dirichlet a(1) = theta. Same implicit trapezoidal scheme.
class RadChannel {
  public:
    RadChannel(double diffusion, double advection, double reaction, std::size_t cells,
               double initial);

    void set_profile(const std::function<double(double)>& profile);
    void step(double theta_next, double dt);
    [[nodiscard]] double output() const { return field_.front(); }
    [[nodiscard]] const std::vector<double>& profile() const { return field_; }
    [[nodiscard]] double dx() const { return dx_; }

  private:
    double eps_, adv_, lam_, dx_;
    std::vector<double> field_;
    std::vector<double> sub_, diag_, sup_, rhs_;
};

/// Wave equation a_tt = a_xx + d a_xxt on [0, D] (d = 0 gives the undamped wave);
/// free end a_x(0) = 0, Dirichlet a(D) = theta. Two-field trapezoidal stepping with the
/// stiff Kelvin-Voigt term taken implicitly.
class WaveChannel {
  public:
    WaveChannel(double depth, double damping, std::size_t cells, double initial);

    void set_profile(const std::function<double(double)>& profile,
                     const std::function<double(double)>& rate);
    void step(double theta_next, double dt);
    [[nodiscard]] double output() const { return field_.front(); }
    [[nodiscard]] const std::vector<double>& profile() const { return field_; }
    [[nodiscard]] const std::vector<double>& velocity() const { return rate_; }
    [[nodiscard]] double dx() const { return dx_; }
    [[nodiscard]] double depth() const { return depth_; }

  private:
    double depth_, damping_, dx_;
    double prev_theta_;
    bool has_prev_theta_ = false;
    std::vector<double> field_, rate_;
    std::vector<double> sub_, diag_, sup_, rhs_;
};

/// One-phase Stefan problem: heat equation on the moving liquid domain [0, s(t)] with
/// Neumann flux actuation at x = 0 and the interface driven by the Stefan condition.
/// Front-fixing transform xi = x/s(t), 2nd-order space, implicit field / explicit
/// interface update. The propagated action is the interface position s(t).
class StefanChannel {
  public:
    StefanChannel(double s0, double cap, std::size_t cells);

    /// Seeds the temperature field with profile(x) on the initial physical grid.
    void set_profile(const std::function<double(double)>& profile);
    void step(double flux_next, double dt);
    [[nodiscard]] double output() const { return s_; }
    [[nodiscard]] double interface_position() const { return s_; }
    [[nodiscard]] double interface_rate() const { return sdot_; }
    /// Temperature-above-melting profile on the front-fixed grid xi in [0, 1].
    [[nodiscard]] const std::vector<double>& profile() const { return field_; }
    /// Physical positions of the grid nodes, x_j = xi_j * s(t).
    void physical_grid(std::vector<double>& xs) const;
    [[nodiscard]] double dxi() const { return dxi_; }

  private:
    double s_, cap_, dxi_;
    double sdot_ = 0.0;
    double prev_flux_ = 0.0;
    std::vector<double> field_;
    std::vector<double> sub_, diag_, sup_, rhs_;
};

/// Transport with time-varying delay: Theta(t) = theta(t - D(t)). History lookup with
/// linear interpolation; phi(t) = t - D(t) must be strictly increasing.
class VariableDelayChannel {
  public:
    VariableDelayChannel(std::function<double(double)> delay_of_t, double max_delay,
                         double initial);

    /// Seeds the history with theta(t) for t in [-D_max, 0] at spacing dt.
    void preload(const std::function<double(double)>& theta_at_time, double dt);
    void step(double theta_next, double dt);
    [[nodiscard]] double output() const;
    [[nodiscard]] double now() const { return t_; }
    [[nodiscard]] double delay_at(double t) const { return delay_(t); }
    [[nodiscard]] double max_delay() const { return max_delay_; }

  private:
    std::function<double(double)> delay_;
    double max_delay_;
    double t_ = 0.0;
    std::deque<std::pair<double, double>> history_;  // (time, theta)
};

/// Distributed delay: the map sees Int_0^D theta(t - sigma) d beta(sigma) for a
/// weighting CDF beta on [0, D].
class DistributedDelayChannel {
  public:
    DistributedDelayChannel(double delay, PiecewiseCdf cdf, double dt, double initial);

    void preload(const std::function<double(double)>& theta_at_lag) { line_.preload(theta_at_lag); }
    void step(double theta_next, double dt);
    [[nodiscard]] double output() const;
    [[nodiscard]] double delay() const { return delay_; }
    [[nodiscard]] const DelayLine& history() const { return line_; }
    [[nodiscard]] const PiecewiseCdf& weight() const { return cdf_; }

  private:
    double delay_;
    double dt_;
    PiecewiseCdf cdf_;
    DelayLine line_;
};

using Channel = std::variant<TransportChannel, HeatChannel, RadChannel, WaveChannel,
                             StefanChannel, VariableDelayChannel, DistributedDelayChannel>;

double channel_output(const Channel& ch);
void channel_step(Channel& ch, double theta_next, double dt);

} // namespace espde
