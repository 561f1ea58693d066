#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "espde/analysis.hpp"
#include "espde/dither.hpp"
#include "espde/game.hpp"
#include "espde/rational.hpp"

namespace espde {

enum class ChannelKind {
    none,  // static map (sidebar baselines)
    transport,
    heat,
    rad,
    wave_kv,
    stefan,
    variable_delay,
    distributed_delay,
};

struct ChannelConfig {
    ChannelKind kind = ChannelKind::none;
    double depth = 1.0;      // delay/domain length D (transport, heat, wave, distributed)
    double damping = 0.0;    // Kelvin-Voigt coefficient (wave)
    double diffusion = 1.0;  // eps (rad)
    double advection = 0.0;  // b (rad)
    double reaction = 0.0;   // lambda (rad)
    double s0 = 1.0;         // initial interface (stefan)
    double cap = 4.0;        // interface domain cap (stefan)
    double delay_base = 0.5, delay_amp = 0.0, delay_freq = 1.0;  // D(t) = base + amp sin(freq t)
    std::vector<std::pair<double, double>> beta_knots;  // CDF knots (distributed delay)

    [[nodiscard]] double delay_at(double t) const;
    [[nodiscard]] double max_delay() const { return delay_base + std::abs(delay_amp); }
};

struct ProbeConfig {
    double amplitude = 0.05;
    Rational multiplier{1, 1};  // omega'_i; the actual frequency is multiplier * omega_base
    int series_terms = 0;       // 0 = class default (12 for rad, 8 for stefan)
};

struct ControllerConfig {
    double gain = 1.0;      // k_i (Stefan uses K < 0)
    double corner = 100.0;  // filter pole c_i; +inf = unfiltered
    bool state_form = false;
    double kernel_c = 1.0;  // backstepping kernel parameter (wave laws)
};

struct PlayerConfig {
    ChannelConfig channel;
    ProbeConfig probe;
    ControllerConfig controller;
};

struct NumericsConfig {
    double dt = 0.0;  // 0 = auto: 2 pi / (40 w_max), snapped to divide every transport delay
    std::size_t cells = 100;
    double t_end = 100.0;
    int samples_per_period = 20;  // export decimation target per fastest dither period
};

struct ScenarioConfig {
    std::string name;
    QuadraticGame game;  // scalar maps are 1-player games
    double omega_base = 1.0;
    std::vector<PlayerConfig> players;
    NumericsConfig numerics;
    std::vector<double> theta_hat0;
    bool compensation = true;
    bool baseline = false;  // sidebar update laws, no predictor/filter
    double divergence_threshold_scale = 1000.0;  // threshold = scale * max|Theta*|; 0 disables
};

struct ScenarioResult {
    ScenarioConfig config;  // resolved: snapped dt, defaulted terms
    double dt = 0.0;
    double dt_sample = 0.0;
    FrequencySet frequencies;
    std::vector<double> theta_star;

    std::vector<double> time;
    std::vector<std::vector<double>> theta;    // applied boundary input per player
    std::vector<std::vector<double>> action;   // propagated action Theta per player
    std::vector<std::vector<double>> payoff;   // y
    std::vector<std::vector<double>> grad;     // G
    std::vector<std::vector<double>> hess;     // H^
    std::vector<std::vector<double>> control;  // U
    std::vector<std::vector<double>> state_l2; // Int u^2 over the channel/history window

    std::optional<double> blowup_time;
    bool metrics_valid = false;
    ConvergenceMetrics metrics;
    StabilityReport stability;
    std::vector<std::string> notes;  // probe truncation diagnostics etc.

    std::uint64_t config_hash = 0;
    double wall_seconds = 0.0;
};

/// Validates and resolves a configuration (auto dt, snapping, default series terms).
ScenarioConfig resolve_config(const ScenarioConfig& cfg);

ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Runs the scenario for each coupling value concurrently (independent loops).
std::vector<ScenarioResult> sweep_epsilon(const ScenarioConfig& cfg,
                                          const std::vector<double>& epsilon_values);

std::vector<std::string> builtin_scenario_names();
ScenarioConfig builtin_scenario(const std::string& name);

/// Greenshields linearization: propagation speed u = vf (1 - 2 rho_r/rho_m) and delay
/// D = L/u. Requires the reference density to sit in the free-flow regime rho_r < rho_m/2.
std::pair<double, double> traffic_linearize(double vf, double rho_m, double rho_r, double L);

ScenarioConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ScenarioConfig& cfg);

std::uint64_t hash_config(const ScenarioConfig& cfg);

} // namespace espde
