#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "espde/measure.hpp"
#include "espde/rational.hpp"
#include "espde/trig.hpp"

namespace espde {

// ---------------------------------------------------------------------------
// Demodulation signals
// ---------------------------------------------------------------------------

/// M(t) = (2/a) sin(w t); the product M * y averages to the payoff gradient.
double demod_gradient(double a, double omega, double t);

/// N(t) = (16/a^2)(sin^2(w t) - 1/2); the product N * y averages to the own-curvature H_ii.
double demod_hessian_game(double a, double omega, double t);

/// N(t) = -(8/a^2) cos(2 w t); identical to demod_hessian_game by the double-angle identity.
double demod_hessian_scalar(double a, double omega, double t);

struct DemodPair {
    double m = 0.0;
    double n = 0.0;
};

/// Demodulators for time-varying delay channels: both signals are evaluated at the
/// delayed phase w (t - D(t)).
DemodPair demod_variable_delay(double a, double omega, double t,
                               const std::function<double(double)>& delay_of_t);

// ---------------------------------------------------------------------------
// Probing frequencies
// ---------------------------------------------------------------------------

/// Probing frequencies w_i = w'_i * w with rational multipliers w'_i, plus the averaging
/// period Pi = 2*pi*LCM{1/w_i} computed exactly from the rationals.
struct FrequencySet {
    double omega_base = 1.0;
    std::vector<Rational> multipliers;
    double period = 0.0;  // Pi, seconds

    [[nodiscard]] double omega(std::size_t player) const {
        return multipliers[player].value() * omega_base;
    }
};

/// True when the multipliers are distinct and avoid the resonance set
/// { w'_j, (w'_j+w'_k)/2, w'_j+2 w'_k, w'_j+w'_k±w'_l } for every i with j,k,l != i.
bool multipliers_admissible(const std::vector<Rational>& multipliers);

/// Builds a FrequencySet from explicit multipliers, validating admissibility.
FrequencySet make_frequency_set(double omega_base, std::vector<Rational> multipliers);

/// Picks N admissible rational multipliers from a quarter-integer ladder.
FrequencySet select_frequencies(std::size_t players, double omega_base);

// ---------------------------------------------------------------------------
// Additive probes (trajectory-generation solutions per channel class)
// ---------------------------------------------------------------------------

/// Constant delay: S(t) = a sin(w (t + D)).
struct DelayProbe {
    double a, omega, delay;
    [[nodiscard]] double value(double t) const;
};

/// Heat channel of depth D: the boundary signal whose diffusion to x = 0 is a sin(w t),
///   S(t) = (a/2) e^{qD} sin(wt + qD) + (a/2) e^{-qD} sin(wt - qD),  q = sqrt(w/2).
struct HeatProbe {
    double a, omega, depth;
    [[nodiscard]] double value(double t) const;
    /// Reference field and its time derivative at position x in [0, D].
    [[nodiscard]] double field(double x, double t) const;
    [[nodiscard]] double field_rate(double x, double t) const;
};

/// Undamped wave: S(t) = a cos(w D) sin(w t).
struct WaveProbe {
    double a, omega, depth;
    [[nodiscard]] double value(double t) const;
};

/// Wave with Kelvin-Voigt damping d: S(t) is the x = D trace of the reference field
///   beta(x,t) = (a/2)[e^{gx} sin(wt + px) + e^{-gx} sin(wt - px)]
/// with p, g the propagation/growth rates of the damped dispersion relation.
struct WaveKvProbe {
    double a, omega, depth, damping;
    [[nodiscard]] double phase_rate() const;   // p(w)
    [[nodiscard]] double growth_rate() const;  // g(w)
    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double field(double x, double t) const;
    [[nodiscard]] double field_rate(double x, double t) const;
};

/// Reaction-advection-diffusion channel on [0,1]: series solution built from the
/// recurrence A_{k+1} = (d/dt + xi) A_k applied to a sin(w t), truncated at `terms`.
class RadProbe {
  public:
    RadProbe(double a, double omega, double diffusion, double advection, double reaction,
             int terms = 12);

    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double field(double x, double t) const;
    [[nodiscard]] double field_rate(double x, double t) const;
    [[nodiscard]] double tail_estimate() const { return tail_; }  // |A_K|/(2K)!

  private:
    double omega_, conv_;                 // conv = b/(2 eps)
    std::vector<double> sin_basis_;       // per-k weights folded onto (sin, cos)
    std::vector<double> cos_basis_;
    std::vector<double> rate_sin_, rate_cos_;  // d/dt coefficients per k
    std::vector<double> poly_even_, poly_odd_; // x^{2k}/(2k)!, conv*x^{2k+1}/(2k+1)! weights
    double value_sin_ = 0.0, value_cos_ = 0.0;
    double tail_ = 0.0;
};

/// One-phase Stefan channel: Neumann heat-flux probe whose melt-front response is
/// s0 + a sin(w t). Series solution truncated at `terms`, anchored at interface s0.
class StefanProbe {
  public:
    StefanProbe(double a, double omega, double s0, int terms = 8);

    [[nodiscard]] double value(double t) const;  // boundary heat flux S(t)
    /// Reference temperature field at x in [0, s(t)].
    [[nodiscard]] double field(double x, double t) const;
    /// Batch evaluation of the reference field at many positions for one time instant;
    /// shares the per-step derivative tables across points.
    void field_profile(double t, const std::vector<double>& xs, std::vector<double>& out) const;
    [[nodiscard]] double last_term_amplitude() const { return tail_; }
    [[nodiscard]] double reference_interface(double t) const;

  private:
    double a_, omega_, s0_;
    int terms_;
    TrigPoly flux_;                                  // S(t)
    std::vector<std::vector<TrigPoly>> sin_power_;   // d^i/dt^i (-a sin)^m tables
    double tail_ = 0.0;
};

/// Variable delay: S(t) = a sin(w t).
struct VariableDelayProbe {
    double a, omega;
    [[nodiscard]] double value(double t) const;
};

/// Distributed delay with weighting CDF beta: S(t) = (a/gamma) Int sin(w(t+xi)) d beta(xi).
/// gamma defaults to |B(w)| so the probe itself has amplitude a.
class DistributedDelayProbe {
  public:
    DistributedDelayProbe(double a, double omega, const PiecewiseCdf& cdf, double gamma = 0.0);
    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double gamma() const { return gamma_; }

  private:
    double omega_;
    double coef_sin_, coef_cos_;
    double gamma_;
};

} // namespace espde
