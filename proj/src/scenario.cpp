#include "espde/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <json.hpp>

#include "espde/channel.hpp"
#include "espde/control.hpp"
#include "espde/estimate.hpp"

namespace espde {

double ChannelConfig::delay_at(double t) const {
    return delay_base + delay_amp * std::sin(delay_freq * t);
}

namespace {

using ProbeVar = std::variant<std::monostate, DelayProbe, HeatProbe, RadProbe, WaveKvProbe,
                              StefanProbe, VariableDelayProbe, DistributedDelayProbe>;
using LawVar = std::variant<std::monostate, DelayPredictor, HeatBoundaryLaw, RadLaw, WaveKvLaw,
                            StefanLaw, VariableDelayLaw, DistributedDelayLaw>;

struct PlayerRuntime {
    ChannelKind kind = ChannelKind::none;
    std::optional<Channel> channel;
    ProbeVar probe;
    LawVar law;
    double a = 0.0;
    double omega = 0.0;
    double theta_hat = 0.0;
    double control = 0.0;
    std::function<double(double)> delay_fn;  // variable delay only
};

double probe_value(const PlayerRuntime& p, double t) {
    return std::visit(
        [&](const auto& probe) -> double {
            using T = std::decay_t<decltype(probe)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return p.a * std::sin(p.omega * t);  // baseline dither
            else
                return probe.value(t);
        },
        p.probe);
}

std::vector<Rational> config_multipliers(const ScenarioConfig& cfg) {
    std::vector<Rational> m;
    m.reserve(cfg.players.size());
    for (const auto& pl : cfg.players) m.push_back(pl.probe.multiplier);
    return m;
}

bool needs_exact_taps(ChannelKind k) {
    return k == ChannelKind::transport || k == ChannelKind::distributed_delay;
}

} // namespace

ScenarioConfig resolve_config(const ScenarioConfig& raw) {
    ScenarioConfig cfg = raw;
    validate_game(cfg.game);
    const std::size_t n = cfg.game.players;
    if (cfg.players.size() != n)
        throw std::invalid_argument("scenario: one player block per game player required");
    if (cfg.theta_hat0.empty()) cfg.theta_hat0.assign(n, 0.0);
    if (cfg.theta_hat0.size() != n)
        throw std::invalid_argument("scenario: theta_hat0 length mismatch");
    if (!(cfg.numerics.t_end > 0.0)) throw std::invalid_argument("scenario: t_end must be positive");

    const FrequencySet fs = make_frequency_set(cfg.omega_base, config_multipliers(cfg));
    if (cfg.numerics.t_end < 5.0 * fs.period)
        throw std::invalid_argument("scenario: t_end must cover at least five averaging periods");

    double omega_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) omega_max = std::max(omega_max, fs.omega(i));

    for (auto& pl : cfg.players) {
        auto& ch = pl.channel;
        if (pl.probe.series_terms == 0)
            pl.probe.series_terms = (ch.kind == ChannelKind::stefan) ? 8 : 12;
        if (ch.kind == ChannelKind::variable_delay &&
            !(std::abs(ch.delay_amp * ch.delay_freq) < 1.0))
            throw std::invalid_argument("scenario: variable delay needs |D'(t)| < 1 (phi must increase)");
        if (cfg.baseline && ch.kind != ChannelKind::none)
            throw std::invalid_argument("scenario: baseline laws run on static maps only");
    }

    // dt: probe-frequency bound, snapped so every transport-type delay is whole samples
    double dt = cfg.numerics.dt > 0.0 ? cfg.numerics.dt : 2.0 * M_PI / (40.0 * omega_max);
    if (!(dt <= 2.0 * M_PI / (8.0 * omega_max)))
        throw std::invalid_argument("scenario: dt too coarse for the fastest dither (need >= 8 samples/period)");
    std::vector<double> hard_delays;
    for (const auto& pl : cfg.players)
        if (needs_exact_taps(pl.channel.kind)) hard_delays.push_back(pl.channel.depth);
    if (!hard_delays.empty()) {
        auto divides_all = [&](double step) {
            for (double d : hard_delays) {
                const double k = d / step;
                if (std::abs(k - std::llround(k)) > 1e-9 * std::max(1.0, k)) return false;
            }
            return true;
        };
        for (double d : hard_delays) dt = snap_dt_to_delay(dt, d);
        if (!divides_all(dt)) {
            const double base = *std::min_element(hard_delays.begin(), hard_delays.end());
            const auto n0 = static_cast<long long>(std::ceil(base / dt));
            bool found = false;
            for (long long k = n0; k < 64 * n0 && !found; ++k) {
                const double trial = base / static_cast<double>(k);
                if (divides_all(trial)) {
                    dt = trial;
                    found = true;
                }
            }
            if (!found)
                throw std::invalid_argument("scenario: could not snap dt to all transport delays");
        }
    }
    cfg.numerics.dt = dt;
    if (cfg.numerics.samples_per_period < 1) cfg.numerics.samples_per_period = 1;
    return cfg;
}

ScenarioResult run_scenario(const ScenarioConfig& raw) {
    const auto wall0 = std::chrono::steady_clock::now();
    ScenarioConfig cfg = resolve_config(raw);
    const std::size_t n = cfg.game.players;

    ScenarioResult res;
    res.config = cfg;
    res.config_hash = hash_config(cfg);
    res.theta_star = nash_equilibrium(cfg.game);
    res.frequencies = make_frequency_set(cfg.omega_base, config_multipliers(cfg));
    res.dt = cfg.numerics.dt;

    const double dt = res.dt;
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.numerics.t_end / dt));
    const double omega_max = [&] {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) w = std::max(w, res.frequencies.omega(i));
        return w;
    }();
    const auto decim = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(
               2.0 * M_PI / (omega_max * cfg.numerics.samples_per_period * dt))));
    res.dt_sample = static_cast<double>(decim) * dt;

    // -- build per-player runtimes ------------------------------------------------
    std::vector<PlayerRuntime> players(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& p = players[i];
        const auto& pc = cfg.players[i];
        p.kind = pc.channel.kind;
        p.a = pc.probe.amplitude;
        p.omega = res.frequencies.omega(i);
        p.theta_hat = cfg.theta_hat0[i];
        const double init = p.theta_hat;
        const std::size_t cells = cfg.numerics.cells;
        const auto& cc = pc.channel;
        const auto& kc = pc.controller;
        switch (p.kind) {
            case ChannelKind::none:
                if (!cfg.baseline)
                    throw std::invalid_argument("scenario: channel-free players need baseline mode");
                break;
            case ChannelKind::transport: {
                TransportChannel ch(cc.depth, dt, init);
                const DelayProbe probe{p.a, p.omega, cc.depth};
                ch.preload([&](double lag) { return init + probe.value(-lag); });
                p.channel = std::move(ch);
                p.probe = probe;
                p.law = DelayPredictor(kc.gain, kc.corner, cc.depth, dt);
                break;
            }
            case ChannelKind::heat: {
                HeatChannel ch(cc.depth, cells, init);
                const HeatProbe probe{p.a, p.omega, cc.depth};
                ch.set_profile([&](double x) { return init + probe.field(x, 0.0); });
                p.channel = std::move(ch);
                p.probe = probe;
                p.law = HeatBoundaryLaw(kc.gain, kc.corner,
                                        kc.state_form ? HeatBoundaryLaw::Form::state
                                                      : HeatBoundaryLaw::Form::integral);
                break;
            }
            case ChannelKind::rad: {
                RadChannel ch(cc.diffusion, cc.advection, cc.reaction, cells, init);
                const RadProbe probe(p.a, p.omega, cc.diffusion, cc.advection, cc.reaction,
                                     pc.probe.series_terms);
                ch.set_profile([&](double x) { return init + probe.field(x, 0.0); });
                p.channel = std::move(ch);
                p.probe = probe;
                p.law = RadLaw(kc.gain, kc.corner, cc.diffusion, cc.advection, cc.reaction, cells);
                break;
            }
            case ChannelKind::wave_kv: {
                WaveChannel ch(cc.depth, cc.damping, cells, init);
                const WaveKvProbe probe{p.a, p.omega, cc.depth, cc.damping};
                ch.set_profile([&](double x) { return init + probe.field(x, 0.0); },
                               [&](double x) { return probe.field_rate(x, 0.0); });
                p.channel = std::move(ch);
                p.probe = probe;
                p.law = WaveKvLaw(kc.gain, kc.corner, kc.kernel_c, cc.depth, cells);
                break;
            }
            case ChannelKind::stefan: {
                StefanChannel ch(cc.s0, cc.cap, cells);
                const StefanProbe probe(p.a, p.omega, cc.s0, pc.probe.series_terms);
                ch.set_profile([&](double x) { return probe.field(x, 0.0); });
                p.channel = std::move(ch);
                p.probe = probe;
                p.law = StefanLaw(kc.gain, kc.corner);
                break;
            }
            case ChannelKind::variable_delay: {
                const auto conf = cc;
                p.delay_fn = [conf](double t) { return conf.delay_at(t); };
                VariableDelayChannel ch(p.delay_fn, cc.max_delay(), init);
                const VariableDelayProbe probe{p.a, p.omega};
                ch.preload([&](double t) { return init + probe.value(t); }, dt);
                p.channel = std::move(ch);
                p.probe = probe;
                p.law = VariableDelayLaw(kc.gain, kc.corner, p.delay_fn, cc.max_delay(), dt);
                break;
            }
            case ChannelKind::distributed_delay: {
                PiecewiseCdf cdf(cc.beta_knots, cc.depth);
                DistributedDelayChannel ch(cc.depth, cdf, dt, init);
                const DistributedDelayProbe probe(p.a, p.omega, cdf);
                ch.preload([&](double lag) { return init + probe.value(-lag); });
                p.channel = std::move(ch);
                p.probe = probe;
                p.law = DistributedDelayLaw(kc.gain, kc.corner, cdf, cc.depth, dt);
                break;
            }
        }
        if (!cfg.compensation)
            std::visit(
                [](auto& law) {
                    if constexpr (!std::is_same_v<std::decay_t<decltype(law)>, std::monostate>)
                        law.set_compensation(false);
                },
                p.law);
        if (auto* rp = std::get_if<RadProbe>(&p.probe)) {
            std::ostringstream note;
            note << "player " << i << " rad probe tail |A_K|/(2K)! = " << rp->tail_estimate();
            res.notes.push_back(note.str());
        }
        if (auto* sp = std::get_if<StefanProbe>(&p.probe)) {
            std::ostringstream note;
            note << "player " << i << " stefan probe last-term amplitude = "
                 << sp->last_term_amplitude();
            res.notes.push_back(note.str());
        }
    }

    // -- divergence threshold -----------------------------------------------------
    double star_norm = 0.0;
    for (double v : res.theta_star) star_norm = std::max(star_norm, std::abs(v));
    const double threshold =
        cfg.divergence_threshold_scale > 0.0
            ? cfg.divergence_threshold_scale * std::max(star_norm, 1.0)
            : std::numeric_limits<double>::infinity();

    // -- main loop ------------------------------------------------------------------
    const std::size_t n_samples = n_steps / decim + 1;
    res.time.reserve(n_samples);
    auto reserve_all = [&](std::vector<std::vector<double>>& v) {
        v.assign(n, {});
        for (auto& s : v) s.reserve(n_samples);
    };
    reserve_all(res.theta);
    reserve_all(res.action);
    reserve_all(res.payoff);
    reserve_all(res.grad);
    reserve_all(res.hess);
    reserve_all(res.control);
    reserve_all(res.state_l2);

    std::vector<double> actions(n, 0.0);
    for (std::size_t step = 0; step <= n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;

        for (std::size_t i = 0; i < n; ++i) {
            auto& p = players[i];
            actions[i] = p.channel ? channel_output(*p.channel) : p.theta_hat + probe_value(p, t);
        }

        // divergence / NaN guard
        bool bad = false;
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(actions[i]) || !std::isfinite(players[i].theta_hat)) bad = true;
            norm = std::max(norm, std::abs(actions[i]));
        }
        if (bad || norm > threshold) {
            res.blowup_time = t;
            break;
        }

        const bool record = (step % decim) == 0;
        if (record) res.time.push_back(t);

        for (std::size_t i = 0; i < n; ++i) {
            auto& p = players[i];
            const double y = evaluate_payoff(cfg.game.payoffs[i], cfg.game.epsilon, actions);

            double m, nn;
            if (p.kind == ChannelKind::variable_delay) {
                const DemodPair d = demod_variable_delay(p.a, p.omega, t, p.delay_fn);
                m = d.m;
                nn = d.n;
            } else {
                m = demod_gradient(p.a, p.omega, t);
                nn = (n > 1) ? demod_hessian_game(p.a, p.omega, t)
                             : demod_hessian_scalar(p.a, p.omega, t);
            }
            const double g = gradient_estimate(y, m);
            const double h = hessian_estimate(y, nn);

            double u = 0.0;
            double l2 = 0.0;
            if (cfg.baseline) {
                const double drive = (n > 1) ? p.a * std::sin(p.omega * t) : m;
                u = cfg.players[i].controller.gain * drive * y;
                p.theta_hat += dt * u;
            } else {
                switch (p.kind) {
                    case ChannelKind::transport: {
                        auto& law = std::get<DelayPredictor>(p.law);
                        u = law.step(g, h, dt);
                        if (record) l2 = law.history_l2();
                        break;
                    }
                    case ChannelKind::heat: {
                        auto& law = std::get<HeatBoundaryLaw>(p.law);
                        u = law.step(g, h, std::get<HeatChannel>(*p.channel),
                                     std::get<HeatProbe>(p.probe), p.theta_hat, t, dt);
                        if (record) l2 = law.error_field_l2();
                        break;
                    }
                    case ChannelKind::rad: {
                        auto& law = std::get<RadLaw>(p.law);
                        u = law.step(g, h, std::get<RadChannel>(*p.channel),
                                     std::get<RadProbe>(p.probe), t, dt);
                        if (record) l2 = law.error_field_l2();
                        break;
                    }
                    case ChannelKind::wave_kv: {
                        auto& law = std::get<WaveKvLaw>(p.law);
                        u = law.step(g, h, std::get<WaveChannel>(*p.channel),
                                     std::get<WaveKvProbe>(p.probe), t, dt);
                        if (record) l2 = law.error_field_l2();
                        break;
                    }
                    case ChannelKind::stefan: {
                        auto& law = std::get<StefanLaw>(p.law);
                        u = law.step(g, h, std::get<StefanChannel>(*p.channel),
                                     std::get<StefanProbe>(p.probe), t, dt);
                        if (record) l2 = law.error_field_l2();
                        break;
                    }
                    case ChannelKind::variable_delay: {
                        auto& law = std::get<VariableDelayLaw>(p.law);
                        u = law.step(g, h, t, dt);
                        if (record) l2 = law.history_l2();
                        break;
                    }
                    case ChannelKind::distributed_delay: {
                        auto& law = std::get<DistributedDelayLaw>(p.law);
                        u = law.step(g, h, dt);
                        if (record) l2 = law.history_l2();
                        break;
                    }
                    case ChannelKind::none:
                        break;
                }
                p.theta_hat += dt * u;
            }
            p.control = u;

            if (record) {
                res.theta[i].push_back(p.theta_hat + probe_value(p, t));
                res.action[i].push_back(actions[i]);
                res.payoff[i].push_back(y);
                res.grad[i].push_back(g);
                res.hess[i].push_back(h);
                res.control[i].push_back(u);
                res.state_l2[i].push_back(l2);
            }
        }

        if (step == n_steps) break;
        const double t_next = t + dt;
        for (auto& p : players)
            if (p.channel) channel_step(*p.channel, p.theta_hat + probe_value(p, t_next), dt);
    }

    // -- post-run analysis ----------------------------------------------------------
    if (!res.blowup_time && res.time.size() >= 2 &&
        res.time.back() - res.time.front() >= 5.0 * res.frequencies.period) {
        std::vector<double> amps(n);
        double omega_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            amps[i] = players[i].a;
            omega_min = std::min(omega_min, res.frequencies.omega(i));
        }
        res.metrics = convergence_metrics(res.time, res.action, res.theta, res.state_l2,
                                          res.theta_star, amps, omega_min,
                                          res.frequencies.period);
        res.metrics_valid = true;
    }
    {
        std::vector<double> gains(n), depths(n);
        for (std::size_t i = 0; i < n; ++i) {
            gains[i] = std::abs(cfg.players[i].controller.gain);
            const auto& cc = cfg.players[i].channel;
            switch (cc.kind) {
                case ChannelKind::none: depths[i] = 0.0; break;
                case ChannelKind::rad: depths[i] = 1.0; break;
                case ChannelKind::stefan: depths[i] = cc.s0; break;
                case ChannelKind::variable_delay: depths[i] = cc.max_delay(); break;
                default: depths[i] = cc.depth; break;
            }
        }
        res.stability = stability_report(cfg.game, gains, depths);
    }

    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return res;
}

std::vector<ScenarioResult> sweep_epsilon(const ScenarioConfig& cfg,
                                          const std::vector<double>& epsilon_values) {
    std::vector<std::future<ScenarioResult>> futures;
    futures.reserve(epsilon_values.size());
    for (double eps : epsilon_values) {
        ScenarioConfig c = cfg;
        c.game.epsilon = eps;
        std::ostringstream name;
        name << cfg.name << "-eps" << eps;
        c.name = name.str();
        futures.push_back(std::async(std::launch::async, [c] { return run_scenario(c); }));
    }
    std::vector<ScenarioResult> out;
    out.reserve(futures.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

std::pair<double, double> traffic_linearize(double vf, double rho_m, double rho_r, double L) {
    if (!(vf > 0.0) || !(rho_m > 0.0) || !(L > 0.0))
        throw std::invalid_argument("traffic: vf, rho_m, L must be positive");
    if (!(rho_r >= 0.0) || !(rho_r < 0.5 * rho_m))
        throw std::invalid_argument("traffic: reference density must sit below the critical density rho_m/2");
    const double u = vf * (1.0 - 2.0 * rho_r / rho_m);
    return {u, L / u};
}

// ---------------------------------------------------------------------------
// Built-in scenario catalog
// ---------------------------------------------------------------------------

namespace {

QuadraticPayoff make_payoff(std::size_t owner, std::vector<std::vector<double>> h,
                            std::vector<double> lin, double c) {
    QuadraticPayoff p;
    p.owner = owner;
    p.hessian = Matrix(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) p.hessian(i, j) = h[i][j];
    p.linear = std::move(lin);
    p.offset = c;
    return p;
}

/// The worked duopoly: J1 = -5 T1^2 + 5 eps T1 T2 + 250 T1 - 150 T2 - 3000,
///                     J2 = -5 T2^2 + 5 eps T1 T2 - 150 T1 + 150 T2 + 2500.
QuadraticGame duopoly_game(double epsilon) {
    QuadraticGame g;
    g.players = 2;
    g.epsilon = epsilon;
    g.payoffs.push_back(make_payoff(0, {{-10.0, 5.0}, {5.0, 0.0}}, {250.0, -150.0}, -3000.0));
    g.payoffs.push_back(make_payoff(1, {{0.0, 5.0}, {5.0, -10.0}}, {-150.0, 150.0}, 2500.0));
    return g;
}

/// Sidebar duopoly market with equal marginal costs m and preference p:
/// J_i quadratic in the prices, Nash at ((3m + 2 Sd p)/3, (3m + Sd p)/3).
QuadraticGame market_game(double m, double sd, double pref) {
    QuadraticGame g;
    g.players = 2;
    g.epsilon = 1.0;
    g.payoffs.push_back(make_payoff(0, {{-2.0 / pref, 1.0 / pref}, {1.0 / pref, 0.0}},
                                    {(m + sd * pref) / pref, -m / pref}, -sd * m));
    g.payoffs.push_back(make_payoff(1, {{0.0, 1.0 / pref}, {1.0 / pref, -2.0 / pref}},
                                    {m / pref, m / pref}, 0.0));
    return g;
}

PlayerConfig scalar_player(ChannelKind kind, double a, Rational mult, double gain, double corner) {
    PlayerConfig p;
    p.channel.kind = kind;
    p.probe.amplitude = a;
    p.probe.multiplier = mult;
    p.controller.gain = gain;
    p.controller.corner = corner;
    return p;
}

ScenarioConfig scalar_scenario(const std::string& name, ChannelKind kind, double a, Rational mult,
                               double gain, double corner, double t_end) {
    ScenarioConfig cfg;
    cfg.name = name;
    cfg.game = scalar_map_game(-2.0, 1.0, 1.0);
    cfg.players.push_back(scalar_player(kind, a, mult, gain, corner));
    cfg.numerics.t_end = t_end;
    cfg.theta_hat0 = {0.0};
    return cfg;
}

} // namespace

std::vector<std::string> builtin_scenario_names() {
    return {"duopoly-hetero",       "nplayer-heat",
            "nplayer-delay",        "scalar-es-delay",
            "scalar-es-heat",       "scalar-es-rad",
            "scalar-es-wave-kv",    "scalar-es-variable-delay",
            "scalar-es-distributed-delay", "wave-kv-source-seek",
            "stefan-es",            "traffic-bottleneck",
            "baseline-es",          "baseline-duopoly"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
    if (name == "duopoly-hetero") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.game = duopoly_game(1.0);
        cfg.players.resize(2);
        cfg.players[0].channel.kind = ChannelKind::transport;
        cfg.players[0].channel.depth = 30.0;
        cfg.players[0].probe = {0.075, Rational(107, 4), 0};
        cfg.players[0].controller = {2.0, 100.0, false, 1.0};
        cfg.players[1].channel.kind = ChannelKind::heat;
        cfg.players[1].channel.depth = 3.0;
        cfg.players[1].probe = {0.05, Rational(22, 1), 0};
        cfg.players[1].controller = {5.0, 100.0, false, 1.0};
        cfg.numerics.t_end = 500.0;
        cfg.theta_hat0 = {50.0, 110.0 / 3.0};
        return cfg;
    }
    if (name == "nplayer-heat") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.game = duopoly_game(0.5);
        cfg.players.resize(2);
        cfg.players[0].channel.kind = ChannelKind::heat;
        cfg.players[0].channel.depth = 0.5;
        cfg.players[0].probe = {0.075, Rational(107, 4), 0};
        cfg.players[0].controller = {2.0, 100.0, false, 1.0};
        cfg.players[1].channel.kind = ChannelKind::heat;
        cfg.players[1].channel.depth = 1.0;
        cfg.players[1].probe = {0.05, Rational(22, 1), 0};
        cfg.players[1].controller = {5.0, 100.0, false, 1.0};
        cfg.numerics.t_end = 200.0;
        cfg.theta_hat0 = {25.0, 25.0};
        return cfg;
    }
    if (name == "nplayer-delay") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.game = duopoly_game(0.5);
        cfg.players.resize(2);
        cfg.players[0].channel.kind = ChannelKind::transport;
        cfg.players[0].channel.depth = 1.0;
        cfg.players[0].probe = {0.075, Rational(107, 4), 0};
        cfg.players[0].controller = {2.0, 100.0, false, 1.0};
        cfg.players[1].channel.kind = ChannelKind::transport;
        cfg.players[1].channel.depth = 2.0;
        cfg.players[1].probe = {0.05, Rational(22, 1), 0};
        cfg.players[1].controller = {5.0, 100.0, false, 1.0};
        cfg.numerics.t_end = 200.0;
        cfg.theta_hat0 = {25.0, 25.0};
        return cfg;
    }
    if (name == "scalar-es-delay") {
        ScenarioConfig cfg = scalar_scenario(name, ChannelKind::transport, 0.05, Rational(10, 1),
                                             1.0, 50.0, 50.0);
        cfg.players[0].channel.depth = 1.0;
        return cfg;
    }
    if (name == "scalar-es-heat") {
        ScenarioConfig cfg = scalar_scenario(name, ChannelKind::heat, 0.05, Rational(22, 1), 2.0,
                                             100.0, 30.0);
        cfg.players[0].channel.depth = 1.0;
        return cfg;
    }
    if (name == "scalar-es-rad") {
        ScenarioConfig cfg = scalar_scenario(name, ChannelKind::rad, 0.05, Rational(22, 1), 2.0,
                                             100.0, 30.0);
        cfg.players[0].channel.diffusion = 1.0;
        cfg.players[0].channel.advection = 1.0;
        cfg.players[0].channel.reaction = 0.0;
        return cfg;
    }
    if (name == "scalar-es-wave-kv") {
        ScenarioConfig cfg = scalar_scenario(name, ChannelKind::wave_kv, 0.1, Rational(5, 1), 0.5,
                                             40.0, 150.0);
        cfg.players[0].channel.depth = 1.0;
        cfg.players[0].channel.damping = 0.2;
        cfg.players[0].controller.kernel_c = 4.0;
        return cfg;
    }
    if (name == "scalar-es-variable-delay") {
        ScenarioConfig cfg = scalar_scenario(name, ChannelKind::variable_delay, 0.05,
                                             Rational(10, 1), 1.0, 50.0, 60.0);
        cfg.players[0].channel.delay_base = 0.5;
        cfg.players[0].channel.delay_amp = 0.2;
        cfg.players[0].channel.delay_freq = 0.3;
        return cfg;
    }
    if (name == "scalar-es-distributed-delay") {
        ScenarioConfig cfg = scalar_scenario(name, ChannelKind::distributed_delay, 0.1,
                                             Rational(4, 1), 1.0, 50.0, 80.0);
        cfg.players[0].channel.depth = 0.5;
        cfg.players[0].channel.beta_knots = {{0.0, 0.0}, {0.5, 1.0}};
        return cfg;
    }
    if (name == "wave-kv-source-seek") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.game = scalar_map_game(-1.0, 1.5, 3.0);
        cfg.players.push_back(scalar_player(ChannelKind::wave_kv, 0.1, Rational(4, 1), 0.4, 40.0));
        cfg.players[0].channel.depth = 2.0;
        cfg.players[0].channel.damping = 0.3;
        cfg.players[0].controller.kernel_c = 2.0;
        cfg.numerics.t_end = 200.0;
        cfg.theta_hat0 = {0.0};
        return cfg;
    }
    if (name == "stefan-es") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.game = scalar_map_game(-2.0, 1.15, 1.0);
        cfg.players.push_back(scalar_player(ChannelKind::stefan, 0.05, Rational(1, 1), -0.5, 10.0));
        cfg.players[0].channel.s0 = 1.0;
        cfg.players[0].channel.cap = 4.0;
        cfg.numerics.t_end = 150.0;
        cfg.theta_hat0 = {0.0};
        return cfg;
    }
    if (name == "traffic-bottleneck") {
        const double vf = 30.0, rho_m = 160.0, rho_r = 40.0, road = 600.0;
        const auto [speed, delay] = traffic_linearize(vf, rho_m, rho_r, road);
        (void)speed;
        const double rho_star = 0.2 * rho_m;
        const double q_star = -(vf / rho_m) * rho_star * rho_star + vf * rho_star;
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.game = scalar_map_game(-0.005, rho_star, q_star);
        cfg.players.push_back(
            scalar_player(ChannelKind::transport, 1.0, Rational(1, 2), 20.0, 5.0));
        cfg.players[0].channel.depth = delay;
        cfg.numerics.t_end = 200.0;
        cfg.theta_hat0 = {rho_r};
        return cfg;
    }
    if (name == "baseline-es") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.game = scalar_map_game(-2.0, 1.0, 0.0);
        cfg.players.push_back(scalar_player(ChannelKind::none, 0.1, Rational(50, 1), 1.0, 100.0));
        cfg.numerics.t_end = 30.0;
        cfg.theta_hat0 = {0.0};
        cfg.baseline = true;
        return cfg;
    }
    if (name == "baseline-duopoly") {
        ScenarioConfig cfg;
        cfg.name = name;
        cfg.game = market_game(30.0, 30.0, 1.0);
        cfg.omega_base = 2.0;
        cfg.players.resize(2);
        cfg.players[0] = scalar_player(ChannelKind::none, 2.0, Rational(107, 4), 0.05, 100.0);
        cfg.players[1] = scalar_player(ChannelKind::none, 1.8, Rational(22, 1), 0.05, 100.0);
        cfg.numerics.t_end = 80.0;
        cfg.theta_hat0 = {45.0, 45.0};
        cfg.baseline = true;
        return cfg;
    }
    throw std::invalid_argument("unknown built-in scenario: " + name);
}

// ---------------------------------------------------------------------------
// JSON configuration
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

std::string kind_name(ChannelKind k) {
    switch (k) {
        case ChannelKind::none: return "none";
        case ChannelKind::transport: return "transport";
        case ChannelKind::heat: return "heat";
        case ChannelKind::rad: return "rad";
        case ChannelKind::wave_kv: return "wave_kv";
        case ChannelKind::stefan: return "stefan";
        case ChannelKind::variable_delay: return "variable_delay";
        case ChannelKind::distributed_delay: return "distributed_delay";
    }
    return "none";
}

ChannelKind kind_from_name(const std::string& s) {
    for (ChannelKind k :
         {ChannelKind::none, ChannelKind::transport, ChannelKind::heat, ChannelKind::rad,
          ChannelKind::wave_kv, ChannelKind::stefan, ChannelKind::variable_delay,
          ChannelKind::distributed_delay})
        if (kind_name(k) == s) return k;
    throw std::invalid_argument("config: unknown channel kind '" + s + "'");
}

json payoff_to_json(const QuadraticPayoff& p) {
    json h = json::array();
    for (std::size_t i = 0; i < p.hessian.n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < p.hessian.n; ++j) row.push_back(p.hessian(i, j));
        h.push_back(row);
    }
    return json{{"H", h}, {"h", p.linear}, {"c", p.offset}};
}

QuadraticPayoff payoff_from_json(std::size_t owner, const json& j) {
    QuadraticPayoff p;
    p.owner = owner;
    const auto& h = j.at("H");
    p.hessian = Matrix(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t k = 0; k < h.size(); ++k) p.hessian(i, k) = h[i][k].get<double>();
    p.linear = j.at("h").get<std::vector<double>>();
    p.offset = j.at("c").get<double>();
    return p;
}

} // namespace

std::string config_to_json_text(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["game"]["epsilon"] = cfg.game.epsilon;
    j["game"]["payoffs"] = json::array();
    for (const auto& p : cfg.game.payoffs) j["game"]["payoffs"].push_back(payoff_to_json(p));
    j["omega_base"] = cfg.omega_base;
    j["players"] = json::array();
    for (const auto& pl : cfg.players) {
        json p;
        p["channel"]["kind"] = kind_name(pl.channel.kind);
        p["channel"]["depth"] = pl.channel.depth;
        p["channel"]["damping"] = pl.channel.damping;
        p["channel"]["diffusion"] = pl.channel.diffusion;
        p["channel"]["advection"] = pl.channel.advection;
        p["channel"]["reaction"] = pl.channel.reaction;
        p["channel"]["s0"] = pl.channel.s0;
        p["channel"]["cap"] = pl.channel.cap;
        p["channel"]["delay_base"] = pl.channel.delay_base;
        p["channel"]["delay_amp"] = pl.channel.delay_amp;
        p["channel"]["delay_freq"] = pl.channel.delay_freq;
        p["channel"]["beta_knots"] = pl.channel.beta_knots;
        p["probe"]["amplitude"] = pl.probe.amplitude;
        p["probe"]["omega_prime"] = {pl.probe.multiplier.num, pl.probe.multiplier.den};
        p["probe"]["series_terms"] = pl.probe.series_terms;
        p["controller"]["gain"] = pl.controller.gain;
        p["controller"]["corner"] =
            std::isinf(pl.controller.corner) ? json("unfiltered") : json(pl.controller.corner);
        p["controller"]["state_form"] = pl.controller.state_form;
        p["controller"]["kernel_c"] = pl.controller.kernel_c;
        j["players"].push_back(p);
    }
    j["numerics"] = {{"dt", cfg.numerics.dt},
                     {"cells", cfg.numerics.cells},
                     {"t_end", cfg.numerics.t_end},
                     {"samples_per_period", cfg.numerics.samples_per_period}};
    j["theta_hat0"] = cfg.theta_hat0;
    j["compensation"] = cfg.compensation;
    j["baseline"] = cfg.baseline;
    j["divergence_threshold_scale"] = cfg.divergence_threshold_scale;
    return j.dump(2);
}

ScenarioConfig config_from_json_text(const std::string& text) {
    const json j = json::parse(text);
    ScenarioConfig cfg;
    cfg.name = j.value("name", "scenario");
    const auto& payoffs = j.at("game").at("payoffs");
    cfg.game.players = payoffs.size();
    cfg.game.epsilon = j.at("game").value("epsilon", 1.0);
    for (std::size_t i = 0; i < payoffs.size(); ++i)
        cfg.game.payoffs.push_back(payoff_from_json(i, payoffs[i]));
    cfg.omega_base = j.value("omega_base", 1.0);
    for (const auto& p : j.at("players")) {
        PlayerConfig pl;
        const auto& ch = p.at("channel");
        pl.channel.kind = kind_from_name(ch.at("kind").get<std::string>());
        pl.channel.depth = ch.value("depth", 1.0);
        pl.channel.damping = ch.value("damping", 0.0);
        pl.channel.diffusion = ch.value("diffusion", 1.0);
        pl.channel.advection = ch.value("advection", 0.0);
        pl.channel.reaction = ch.value("reaction", 0.0);
        pl.channel.s0 = ch.value("s0", 1.0);
        pl.channel.cap = ch.value("cap", 4.0);
        pl.channel.delay_base = ch.value("delay_base", 0.5);
        pl.channel.delay_amp = ch.value("delay_amp", 0.0);
        pl.channel.delay_freq = ch.value("delay_freq", 1.0);
        if (ch.contains("beta_knots"))
            pl.channel.beta_knots = ch.at("beta_knots").get<std::vector<std::pair<double, double>>>();
        const auto& pr = p.at("probe");
        pl.probe.amplitude = pr.at("amplitude").get<double>();
        const auto& mult = pr.at("omega_prime");
        pl.probe.multiplier = Rational(mult.at(0).get<std::int64_t>(), mult.at(1).get<std::int64_t>());
        pl.probe.series_terms = pr.value("series_terms", 0);
        const auto& ct = p.at("controller");
        pl.controller.gain = ct.at("gain").get<double>();
        if (ct.at("corner").is_string())
            pl.controller.corner = std::numeric_limits<double>::infinity();
        else
            pl.controller.corner = ct.at("corner").get<double>();
        pl.controller.state_form = ct.value("state_form", false);
        pl.controller.kernel_c = ct.value("kernel_c", 1.0);
        cfg.players.push_back(std::move(pl));
    }
    if (j.contains("numerics")) {
        const auto& nu = j.at("numerics");
        cfg.numerics.dt = nu.value("dt", 0.0);
        cfg.numerics.cells = nu.value("cells", std::size_t{100});
        cfg.numerics.t_end = nu.value("t_end", 100.0);
        cfg.numerics.samples_per_period = nu.value("samples_per_period", 20);
    }
    if (j.contains("theta_hat0")) cfg.theta_hat0 = j.at("theta_hat0").get<std::vector<double>>();
    cfg.compensation = j.value("compensation", true);
    cfg.baseline = j.value("baseline", false);
    cfg.divergence_threshold_scale = j.value("divergence_threshold_scale", 1000.0);
    return cfg;
}

std::uint64_t hash_config(const ScenarioConfig& cfg) {
    // FNV-1a over the canonical JSON dump
    const std::string text = config_to_json_text(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace espde
