#include "espde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "espde/linalg.hpp"

namespace espde {

double hurwitz_max_real(const GameHessian& hessian, const std::vector<double>& gains) {
    const std::size_t n = hessian.matrix.n;
    if (gains.size() != n) throw std::invalid_argument("hurwitz: gain vector length mismatch");
    Matrix kh(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) kh(i, j) = gains[i] * hessian.matrix(i, j);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues(kh)) worst = std::max(worst, ev.real());
    return worst;
}

SmallGainFragment small_gain_fragment(const QuadraticGame& game, const std::vector<double>& gains,
                                      const std::vector<double>& depths, double epsilon,
                                      const SmallGainConstants& constants) {
    validate_game(game);
    const std::size_t n = game.players;
    if (gains.size() != n || depths.size() != n)
        throw std::invalid_argument("small gain: gains/depths length mismatch");
    if (!(epsilon > 0.0)) throw std::invalid_argument("small gain: epsilon must be positive");

    SmallGainFragment frag;

    QuadraticGame at_eps = game;
    at_eps.epsilon = epsilon;
    frag.dominance_pass = check_diagonal_dominance(assemble_hessian(at_eps)).pass;

    // k_H pinned just above the tightest admissible bound max_{i, j != i} |H^i_ij|
    double kh = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) kh = std::max(kh, std::abs(game.payoffs[i].hessian(i, j)));
    kh *= 1.0 + 1e-6;

    frag.window_ok = true;
    for (std::size_t i = 0; i < n; ++i)
        if (!(kh < std::abs(game.payoffs[i].hessian(i, i)) / epsilon)) frag.window_ok = false;

    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    const double gamma0 = constants.gamma0_scale * epsilon;
    frag.lhs_gain.resize(n);
    frag.lhs_state.resize(n);
    frag.worst_lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double depth_sq = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) depth_sq += depths[j] * depths[j];
        const double hii = std::abs(game.payoffs[i].hessian(i, i));
        const double k1 = inv_sqrt3 * epsilon * gains[i] * kh * depth_sq;
        const double gamma3 = inv_sqrt3 * epsilon * hii * gains[i] * kh * depth_sq;
        frag.lhs_gain[i] = std::max(gamma0 * 1.0, constants.gamma1 * k1);  // K0 = 1, K2 = 0
        frag.lhs_state[i] = gamma3 * constants.gamma1 * gains[i];          // B0 = 0, B1 = k_i, B2 = 0
        frag.worst_lhs = std::max({frag.worst_lhs, frag.lhs_gain[i], frag.lhs_state[i]});
    }
    frag.margin = 1.0 - frag.worst_lhs;
    frag.pass = frag.dominance_pass && frag.window_ok && frag.worst_lhs < 1.0;
    return frag;
}

double small_gain_epsilon_star(const QuadraticGame& game, const std::vector<double>& gains,
                               const std::vector<double>& depths,
                               const SmallGainConstants& constants) {
    auto passes = [&](double eps) {
        return small_gain_fragment(game, gains, depths, eps, constants).pass;
    };
    if (passes(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;  // pass region is an interval (0, eps*): LHS monotone in eps
    if (!passes(1e-9)) return 0.0;
    lo = 1e-9;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (passes(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

StabilityReport stability_report(const QuadraticGame& game, const std::vector<double>& gains,
                                 const std::vector<double>& depths,
                                 const SmallGainConstants& constants) {
    StabilityReport rep;
    const GameHessian h = assemble_hessian(game);
    rep.dominance = check_diagonal_dominance(h);
    rep.hurwitz_max_real = hurwitz_max_real(h, gains);
    rep.hurwitz_pass = rep.hurwitz_max_real < 0.0;
    rep.small_gain = small_gain_fragment(game, gains, depths, game.epsilon, constants);
    rep.epsilon_star = small_gain_epsilon_star(game, gains, depths, constants);
    return rep;
}

ConvergenceMetrics convergence_metrics(const std::vector<double>& times,
                                       const std::vector<std::vector<double>>& action_series,
                                       const std::vector<std::vector<double>>& input_series,
                                       const std::vector<std::vector<double>>& state_l2_series,
                                       const std::vector<double>& theta_star,
                                       const std::vector<double>& amplitudes, double omega,
                                       double period) {
    const std::size_t players = action_series.size();
    if (times.size() < 2 || players == 0)
        throw std::invalid_argument("convergence metrics: empty series");
    const double span = times.back() - times.front();
    if (span < 5.0 * period)
        throw std::invalid_argument("convergence metrics: run shorter than five averaging periods");

    ConvergenceMetrics m;
    m.tail_residual_action.assign(players, 0.0);
    m.tail_residual_input.assign(players, 0.0);
    m.band_constant.assign(players, 0.0);

    const double tail_start = times.back() - 0.2 * span;
    double amp_norm = 0.0;
    for (double a : amplitudes) amp_norm += a * a;
    amp_norm = std::sqrt(amp_norm);
    const double band = amp_norm + 1.0 / omega;

    for (std::size_t i = 0; i < players; ++i) {
        for (std::size_t s = 0; s < times.size(); ++s) {
            if (times[s] < tail_start) continue;
            m.tail_residual_action[i] =
                std::max(m.tail_residual_action[i], std::abs(action_series[i][s] - theta_star[i]));
            if (i < input_series.size() && s < input_series[i].size())
                m.tail_residual_input[i] =
                    std::max(m.tail_residual_input[i], std::abs(input_series[i][s] - theta_star[i]));
        }
        m.band_constant[i] = m.tail_residual_action[i] / band;
    }

    const double norm_start = times.back() - period;
    for (std::size_t s = 0; s < times.size(); ++s) {
        if (times[s] < norm_start) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < players; ++i) {
            const double vartheta = action_series[i][s] - theta_star[i];
            acc += vartheta * vartheta;
            if (i < state_l2_series.size() && s < state_l2_series[i].size())
                acc += state_l2_series[i][s];
        }
        m.periodic_norm = std::max(m.periodic_norm, std::sqrt(acc));
    }
    return m;
}

std::optional<double> divergence_time(const std::vector<double>& times,
                                      const std::vector<std::vector<double>>& action_series,
                                      double threshold) {
    for (std::size_t s = 0; s < times.size(); ++s) {
        double norm = 0.0;
        for (const auto& series : action_series)
            if (s < series.size()) norm = std::max(norm, std::abs(series[s]));
        if (norm > threshold) return times[s];
    }
    return std::nullopt;
}

} // namespace espde
