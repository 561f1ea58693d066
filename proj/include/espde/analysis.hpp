#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "espde/game.hpp"

namespace espde {

/// Max real part of the eigenvalues of K H (K the diagonal gain matrix); the closed loop's
/// average system is exponentially stable when this is negative.
double hurwitz_max_real(const GameHessian& hessian, const std::vector<double>& gains);

/// Tunable order-one constants the small-gain construction leaves unspecified.
struct SmallGainConstants {
    double gamma0_scale = 1.0;  // gamma_0 = gamma0_scale * epsilon (order eps)
    double gamma1 = 1.0;        // order one
};

/// Per-player left-hand sides of the two small-gain inequalities and the resulting margin.
struct SmallGainFragment {
    bool dominance_pass = false;
    bool window_ok = false;      // k_H window |H_ij| < k_H < |H_ii|/eps nonempty
    std::vector<double> lhs_gain;   // max(gamma0 K0, gamma1 K1) + K2/sigma per player
    std::vector<double> lhs_state;  // gamma3 max(gamma0 B0, gamma1 B1) + gamma3 B2/sigma
    double worst_lhs = 0.0;
    double margin = 0.0;  // 1 - worst_lhs, gated on dominance and the k_H window
    bool pass = false;
};

/// Evaluates the small-gain condition for a game at coupling `epsilon` with per-player
/// adaptation gains and channel depths/delays. k_H is pinned just above max |H^i_ij|.
SmallGainFragment small_gain_fragment(const QuadraticGame& game, const std::vector<double>& gains,
                                      const std::vector<double>& depths, double epsilon,
                                      const SmallGainConstants& constants = {});

/// Largest epsilon in (0, 1] at which the small-gain check still passes, by bisection;
/// zero when it fails everywhere.
double small_gain_epsilon_star(const QuadraticGame& game, const std::vector<double>& gains,
                               const std::vector<double>& depths,
                               const SmallGainConstants& constants = {});

struct StabilityReport {
    DominanceReport dominance;
    double hurwitz_max_real = 0.0;
    bool hurwitz_pass = false;
    SmallGainFragment small_gain;
    double epsilon_star = 0.0;
};

StabilityReport stability_report(const QuadraticGame& game, const std::vector<double>& gains,
                                 const std::vector<double>& depths,
                                 const SmallGainConstants& constants = {});

struct ConvergenceMetrics {
    std::vector<double> tail_residual_action;    // sup |Theta_i - Theta*_i| over the last 20%
    std::vector<double> tail_residual_input;     // sup |theta_i - theta*_i| over the last 20%
    std::vector<double> band_constant;           // fitted C with tail = C (|a| + 1/omega)
    double periodic_norm = 0.0;                  // sup state norm over the final period
};

/// Tail residuals over the final 20% of the run plus the state norm over the last averaging
/// period. The run must span at least five averaging periods.
ConvergenceMetrics convergence_metrics(const std::vector<double>& times,
                                       const std::vector<std::vector<double>>& action_series,
                                       const std::vector<std::vector<double>>& input_series,
                                       const std::vector<std::vector<double>>& state_l2_series,
                                       const std::vector<double>& theta_star,
                                       const std::vector<double>& amplitudes, double omega,
                                       double period);

/// Earliest time with |Theta(t)| strictly above the threshold (infinity norm across
/// players); empty when the series stays bounded.
std::optional<double> divergence_time(const std::vector<double>& times,
                                      const std::vector<std::vector<double>>& action_series,
                                      double threshold);

} // namespace espde
