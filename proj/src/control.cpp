#include "espde/control.hpp"

#include <cmath>
#include <stdexcept>

namespace espde {

double bessel_i1(double x) {
    const double half = 0.5 * x;
    double term = half;  // m = 0: (x/2)^1 / (0! 1!)
    double acc = term;
    for (int m = 1; m < 200; ++m) {
        term *= half * half / (static_cast<double>(m) * (static_cast<double>(m) + 1.0));
        acc += term;
        if (std::abs(term) < 1e-14 * std::abs(acc)) break;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// DelayPredictor
// ---------------------------------------------------------------------------

DelayPredictor::DelayPredictor(double gain, double corner, double delay, double dt)
    : gain_(gain), filter_{corner, 0.0} {
    if (!(gain > 0.0)) throw std::invalid_argument("delay predictor: gain must be positive");
    const double taps_real = delay / dt;
    const auto taps = static_cast<std::size_t>(std::llround(taps_real));
    if (taps == 0 || std::abs(taps_real - static_cast<double>(taps)) > 1e-6)
        throw std::invalid_argument("delay predictor: dt must divide the delay exactly");
    history_ = DelayLine(taps, dt, 0.0);
}

double DelayPredictor::step(double grad, double hess, double dt) {
    const double bracket =
        compensation_ ? gain_ * (grad + hess * history_.integral()) : gain_ * grad;
    const double u = filter_.step(bracket, dt);
    history_.push(u);
    return u;
}

double DelayPredictor::history_l2() const {
    double acc = 0.0;
    const auto n = history_.taps();
    for (std::size_t j = 0; j <= n; ++j) {
        const double v = history_.lagged(j);
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        acc += w * v * v;
    }
    return acc * history_.dt();
}

// ---------------------------------------------------------------------------
// HeatBoundaryLaw
// ---------------------------------------------------------------------------

HeatBoundaryLaw::HeatBoundaryLaw(double gain, double corner, Form form)
    : gain_(gain), filter_{corner, 0.0}, form_(form) {
    if (!(gain > 0.0)) throw std::invalid_argument("heat law: gain must be positive");
}

double HeatBoundaryLaw::step(double grad, double hess, const HeatChannel& channel,
                             const HeatProbe& probe, double theta_hat, double t, double dt) {
    double bracket = gain_ * grad;
    if (compensation_) {
        if (form_ == Form::state) {
            const double dither = probe.a * std::sin(probe.omega * t);
            bracket = gain_ * (grad + hess * (theta_hat - channel.output() + dither));
        } else {
            const auto& profile = channel.profile();
            if (has_prev_) {
                u_.resize(profile.size());
                const double t_mid = t - 0.5 * dt;
                for (std::size_t j = 0; j < profile.size(); ++j) {
                    const double x = static_cast<double>(j) * channel.dx();
                    u_[j] = (profile[j] - prev_profile_[j]) / dt - probe.field_rate(x, t_mid);
                }
                const double depth = channel.depth();
                const double integral = trapezoid_weighted(
                    u_, channel.dx(), [&](double x) { return depth - x; });
                bracket = gain_ * (grad + hess * integral);
                double l2 = 0.0;
                for (std::size_t j = 0; j < u_.size(); ++j) {
                    const double w = (j == 0 || j + 1 == u_.size()) ? 0.5 : 1.0;
                    l2 += w * u_[j] * u_[j];
                }
                u_l2_ = l2 * channel.dx();
            }
            prev_profile_ = profile;
            has_prev_ = true;
        }
    }
    return filter_.step(bracket, dt);
}

// ---------------------------------------------------------------------------
// RadLaw
// ---------------------------------------------------------------------------

double RadLaw::gamma_weight(double x, double diffusion, double advection, double reaction) {
    const double xi = advection * advection / (4.0 * diffusion) - reaction;
    const double conv = advection / (2.0 * diffusion);
    if (xi < 0.0) throw std::invalid_argument("rad law: xi must be nonnegative");
    if (xi < 1e-14) return 1.0 + conv * x;  // sinh(z)/z -> 1
    const double root = std::sqrt(xi / diffusion);
    return std::cosh(root * x) + conv * std::sinh(root * x) / root;
}

double RadLaw::m_weight(double x, double diffusion, double advection, double reaction) {
    const double xi = advection * advection / (4.0 * diffusion) - reaction;
    if (xi < 0.0) throw std::invalid_argument("rad law: xi must be nonnegative");
    if (xi < 1e-14) return x / diffusion;
    const double root = std::sqrt(xi / diffusion);
    return std::sinh(root * x) / (root * diffusion);
}

RadLaw::RadLaw(double gain, double corner, double diffusion, double advection, double reaction,
               std::size_t cells)
    : gain_(gain), filter_{corner, 0.0} {
    if (!(gain > 0.0)) throw std::invalid_argument("rad law: gain must be positive");
    const double conv = advection / (2.0 * diffusion);
    gamma1_ = gamma_weight(1.0, diffusion, advection, reaction);
    scale_ = std::exp(-conv);
    const double dx = 1.0 / static_cast<double>(cells);
    kernel_.resize(cells + 1);
    for (std::size_t j = 0; j < kernel_.size(); ++j) {
        const double x = static_cast<double>(j) * dx;
        kernel_[j] = std::exp(conv * x) * m_weight(1.0 - x, diffusion, advection, reaction);
    }
}

double RadLaw::step(double grad, double hess, const RadChannel& channel, const RadProbe& probe,
                    double t, double dt) {
    double bracket = gain_ * scale_ * gamma1_ * grad;
    if (compensation_) {
        const auto& profile = channel.profile();
        if (profile.size() != kernel_.size())
            throw std::invalid_argument("rad law: channel grid does not match the kernel grid");
        if (has_prev_) {
            u_.resize(profile.size());
            const double t_mid = t - 0.5 * dt;
            for (std::size_t j = 0; j < profile.size(); ++j) {
                const double x = static_cast<double>(j) * channel.dx();
                u_[j] = (profile[j] - prev_profile_[j]) / dt - probe.field_rate(x, t_mid);
            }
            double integral = 0.0, l2 = 0.0;
            for (std::size_t j = 0; j < u_.size(); ++j) {
                const double w = (j == 0 || j + 1 == u_.size()) ? 0.5 : 1.0;
                integral += w * kernel_[j] * u_[j];
                l2 += w * u_[j] * u_[j];
            }
            integral *= channel.dx();
            u_l2_ = l2 * channel.dx();
            bracket = gain_ * scale_ * (gamma1_ * grad + hess * integral);
        }
        prev_profile_ = profile;
        has_prev_ = true;
    }
    return filter_.step(bracket, dt);
}

// ---------------------------------------------------------------------------
// WaveKvLaw
// ---------------------------------------------------------------------------

double WaveKvLaw::kernel_weight(double x, double kernel_c, double depth) {
    const double z2 = kernel_c * (depth * depth - x * x);
    if (z2 < 1e-28) return kernel_c * depth * 0.5;  // I1(z)/z -> 1/2
    const double z = std::sqrt(z2);
    return kernel_c * depth * bessel_i1(z) / z;
}

WaveKvLaw::WaveKvLaw(double gain, double corner, double kernel_c, double depth, std::size_t cells)
    : gain_(gain), filter_{corner, 0.0} {
    if (!(gain > 0.0)) throw std::invalid_argument("wave-kv law: gain must be positive");
    if (!(kernel_c > 0.0)) throw std::invalid_argument("wave-kv law: kernel parameter must be positive");
    const double dx = depth / static_cast<double>(cells);
    kernel_.resize(cells + 1);
    for (std::size_t j = 0; j < kernel_.size(); ++j)
        kernel_[j] = kernel_weight(static_cast<double>(j) * dx, kernel_c, depth);
}

double WaveKvLaw::step(double grad, double hess, const WaveChannel& channel,
                       const WaveKvProbe& probe, double t, double dt) {
    double bracket = gain_ * grad;
    if (compensation_) {
        const auto& rate = channel.velocity();
        if (rate.size() != kernel_.size())
            throw std::invalid_argument("wave-kv law: channel grid does not match the kernel grid");
        u_.resize(rate.size());
        for (std::size_t j = 0; j < rate.size(); ++j) {
            const double x = static_cast<double>(j) * channel.dx();
            u_[j] = rate[j] - probe.field_rate(x, t);
        }
        double integral = 0.0, l2 = 0.0;
        for (std::size_t j = 0; j < u_.size(); ++j) {
            const double w = (j == 0 || j + 1 == u_.size()) ? 0.5 : 1.0;
            integral += w * kernel_[j] * u_[j];
            l2 += w * u_[j] * u_[j];
        }
        integral *= channel.dx();
        u_l2_ = l2 * channel.dx();
        bracket = gain_ * (grad - hess * integral);
    }
    return filter_.step(bracket, dt);
}

// ---------------------------------------------------------------------------
// WaveNeumannLaw
// ---------------------------------------------------------------------------

WaveNeumannLaw::WaveNeumannLaw(double gain, double corner, double injection, double depth,
                               std::size_t cells)
    : gain_(gain), injection_(injection), filter_{corner, 0.0},
      copy_(depth, 0.0, cells, 0.0) {
    if (!(gain > 0.0)) throw std::invalid_argument("wave law: gain must be positive");
    if (!(injection > 0.0)) throw std::invalid_argument("wave law: injection gain must be positive");
}

double WaveNeumannLaw::step(double grad, double hess, double dt) {
    double bracket = gain_ * grad;
    if (compensation_) {
        const auto& field = copy_.profile();
        const auto& rate = copy_.velocity();
        const std::size_t m = field.size() - 1;
        double integral = 0.0;
        for (std::size_t j = 0; j <= m; ++j) {
            const double w = (j == 0 || j == m) ? 0.5 : 1.0;
            integral += w * gain_ * rate[j];  // rho(D - x) = k in the scalar reading
        }
        integral *= copy_.dx();
        bracket = injection_ * (gain_ * hess * field[m] - rate[m]) + gain_ * grad + hess * integral;
    }
    const double u = filter_.step(bracket, dt);
    copy_.step(u, dt);
    return u;
}

// ---------------------------------------------------------------------------
// StefanLaw
// ---------------------------------------------------------------------------

StefanLaw::StefanLaw(double gain, double corner) : gain_(gain), filter_{corner, 0.0} {
    if (!(gain < 0.0)) throw std::invalid_argument("stefan law: gain convention requires K < 0");
}

double StefanLaw::step(double grad, double hess, const StefanChannel& channel,
                       const StefanProbe& probe, double t, double dt) {
    double bracket = -gain_ * grad;
    if (compensation_) {
        channel.physical_grid(xs_);
        probe.field_profile(t, xs_, beta_);
        const auto& alpha = channel.profile();
        u_.resize(alpha.size());
        for (std::size_t j = 0; j < alpha.size(); ++j) u_[j] = alpha[j] - beta_[j];
        const double dx = channel.dxi() * channel.interface_position();
        const double integral = trapezoid(u_, dx);
        double l2 = 0.0;
        for (std::size_t j = 0; j < u_.size(); ++j) {
            const double w = (j == 0 || j + 1 == u_.size()) ? 0.5 : 1.0;
            l2 += w * u_[j] * u_[j];
        }
        u_l2_ = l2 * dx;
        bracket = -gain_ * (grad + hess * integral);
    }
    return filter_.step(bracket, dt);
}

// ---------------------------------------------------------------------------
// VariableDelayLaw
// ---------------------------------------------------------------------------

VariableDelayLaw::VariableDelayLaw(double gain, double corner,
                                   std::function<double(double)> delay_of_t, double max_delay,
                                   double dt)
    : gain_(gain), filter_{corner, 0.0}, delay_(std::move(delay_of_t)), max_delay_(max_delay) {
    if (!(gain > 0.0)) throw std::invalid_argument("variable delay law: gain must be positive");
    const auto taps = static_cast<std::size_t>(std::ceil(max_delay / dt - 1e-9));
    history_ = DelayLine(std::max<std::size_t>(taps, 1), dt, 0.0);
}

double VariableDelayLaw::phi_inverse(double t) const {
    // phi(s) = s - D(s) is strictly increasing; solve phi(s) = t by bisection
    double lo = t, hi = t + 2.0 * max_delay_;
    if (lo - delay_(lo) > t) throw std::runtime_error("variable delay law: phi is not increasing");
    for (int guard = 0; hi - delay_(hi) < t; ++guard) {
        hi += max_delay_;
        if (guard > 64) throw std::runtime_error("variable delay law: phi inverse out of range");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (mid - delay_(mid) < t) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double VariableDelayLaw::step(double grad, double hess, double t, double dt) {
    double bracket = gain_ * grad;
    if (compensation_) {
        const double d = delay_(t);
        if (!(d > 0.0) || d > max_delay_ + 1e-9)
            throw std::runtime_error("variable delay law: D(t) left (0, D_max]");
        const double horizon = phi_inverse(t) - t;
        // Int_0^1 u(sigma,t) dsigma with u(sigma,t) = U(phi(t) + sigma (t - phi(t)))
        // equals the mean of U over [t - D(t), t]
        const std::size_t cells = 64;
        double mean = 0.5 * (history_.lagged_interp(0.0) + history_.lagged_interp(d));
        for (std::size_t c = 1; c < cells; ++c)
            mean += history_.lagged_interp(d * static_cast<double>(c) / cells);
        mean /= static_cast<double>(cells);
        bracket = gain_ * (grad + hess * horizon * mean);
    }
    const double u = filter_.step(bracket, dt);
    history_.push(u);
    return u;
}

double VariableDelayLaw::history_l2() const {
    double acc = 0.0;
    const auto n = history_.taps();
    for (std::size_t j = 0; j <= n; ++j) {
        const double v = history_.lagged(j);
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        acc += w * v * v;
    }
    return acc * history_.dt();
}

// ---------------------------------------------------------------------------
// DistributedDelayLaw
// ---------------------------------------------------------------------------

DistributedDelayLaw::DistributedDelayLaw(double gain, double corner, PiecewiseCdf cdf,
                                         double delay, double dt)
    : gain_(gain), filter_{corner, 0.0}, cdf_(std::move(cdf)), delay_(delay) {
    if (!(gain > 0.0)) throw std::invalid_argument("distributed delay law: gain must be positive");
    const double taps_real = delay / dt;
    const auto taps = static_cast<std::size_t>(std::llround(taps_real));
    if (taps == 0 || std::abs(taps_real - static_cast<double>(taps)) > 1e-6)
        throw std::invalid_argument("distributed delay law: dt must divide the delay exactly");
    history_ = DelayLine(taps, dt, 0.0);
}

double DistributedDelayLaw::step(double grad, double hess, double dt) {
    double bracket = gain_ * grad;
    if (compensation_) {
        const double integral =
            history_.integral_weighted([&](double sigma) { return 1.0 - cdf_.value(sigma); });
        bracket = gain_ * (grad + hess * integral);
    }
    const double u = filter_.step(bracket, dt);
    history_.push(u);
    return u;
}

double DistributedDelayLaw::history_l2() const {
    double acc = 0.0;
    const auto n = history_.taps();
    for (std::size_t j = 0; j <= n; ++j) {
        const double v = history_.lagged(j);
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        acc += w * v * v;
    }
    return acc * history_.dt();
}

} // namespace espde
