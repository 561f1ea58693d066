#include "espde/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "espde/linalg.hpp"

namespace espde {

// ---------------------------------------------------------------------------
// DelayLine
// ---------------------------------------------------------------------------

DelayLine::DelayLine(std::size_t taps, double dt, double initial)
    : taps_(taps), dt_(dt), buf_(taps + 1, initial), head_(0) {
    if (taps == 0) throw std::invalid_argument("delay line: needs at least one tap");
    if (!(dt > 0.0)) throw std::invalid_argument("delay line: dt must be positive");
}

void DelayLine::push(double value) {
    head_ = (head_ + 1) % buf_.size();
    buf_[head_] = value;
}

void DelayLine::preload(const std::function<double(double)>& value_at_lag) {
    for (std::size_t j = 0; j <= taps_; ++j)
        buf_[(head_ + buf_.size() - j) % buf_.size()] = value_at_lag(static_cast<double>(j) * dt_);
}

double DelayLine::lagged(std::size_t steps) const {
    if (steps > taps_) throw std::out_of_range("delay line: lag exceeds window");
    return buf_[(head_ + buf_.size() - steps) % buf_.size()];
}

double DelayLine::delayed() const { return lagged(taps_); }

double DelayLine::lagged_interp(double lag_seconds) const {
    if (lag_seconds <= 0.0) return newest();
    const double steps = lag_seconds / dt_;
    const auto lo = static_cast<std::size_t>(steps);
    if (lo >= taps_) return delayed();
    const double frac = steps - static_cast<double>(lo);
    return (1.0 - frac) * lagged(lo) + frac * lagged(lo + 1);
}

double DelayLine::integral() const {
    double acc = 0.5 * (lagged(0) + lagged(taps_));
    for (std::size_t j = 1; j < taps_; ++j) acc += lagged(j);
    return acc * dt_;
}

double DelayLine::integral_weighted(const std::function<double(double)>& w) const {
    double acc = 0.5 * (w(0.0) * lagged(0) + w(static_cast<double>(taps_) * dt_) * lagged(taps_));
    for (std::size_t j = 1; j < taps_; ++j)
        acc += w(static_cast<double>(j) * dt_) * lagged(j);
    return acc * dt_;
}

double trapezoid(const std::vector<double>& profile, double dx) {
    if (profile.size() < 2) return 0.0;
    double acc = 0.5 * (profile.front() + profile.back());
    for (std::size_t j = 1; j + 1 < profile.size(); ++j) acc += profile[j];
    return acc * dx;
}

double trapezoid_weighted(const std::vector<double>& profile, double dx,
                          const std::function<double(double)>& w) {
    if (profile.size() < 2) return 0.0;
    const std::size_t m = profile.size() - 1;
    double acc = 0.5 * (w(0.0) * profile.front() + w(static_cast<double>(m) * dx) * profile.back());
    for (std::size_t j = 1; j < m; ++j) acc += w(static_cast<double>(j) * dx) * profile[j];
    return acc * dx;
}

double snap_dt_to_delay(double dt, double delay) {
    if (!(dt > 0.0) || !(delay > 0.0)) throw std::invalid_argument("snap_dt_to_delay: positive arguments required");
    const double taps = std::max(1.0, std::ceil(delay / dt - 1e-9));
    return delay / taps;
}

// ---------------------------------------------------------------------------
// TransportChannel
// ---------------------------------------------------------------------------

TransportChannel::TransportChannel(double delay, double dt, double initial)
    : delay_(delay), dt_(dt) {
    if (!(delay > 0.0)) throw std::invalid_argument("transport: delay must be positive");
    const double taps_real = delay / dt;
    const auto taps = static_cast<std::size_t>(std::llround(taps_real));
    if (taps == 0 || std::abs(taps_real - static_cast<double>(taps)) > 1e-6)
        throw std::invalid_argument("transport: dt must divide the delay exactly (snap dt first)");
    line_ = DelayLine(taps, dt, initial);
}

void TransportChannel::step(double theta_next, double dt) {
    if (std::abs(dt - dt_) > 1e-12 * dt_)
        throw std::invalid_argument("transport: dt changed after construction");
    line_.push(theta_next);
}

// ---------------------------------------------------------------------------
// HeatChannel
// ---------------------------------------------------------------------------

HeatChannel::HeatChannel(double depth, std::size_t cells, double initial)
    : depth_(depth), dx_(depth / static_cast<double>(cells)), field_(cells + 1, initial) {
    if (!(depth > 0.0)) throw std::invalid_argument("heat: depth must be positive");
    if (cells < 4) throw std::invalid_argument("heat: needs at least 4 cells");
}

void HeatChannel::set_profile(const std::function<double(double)>& profile) {
    for (std::size_t j = 0; j < field_.size(); ++j)
        field_[j] = profile(static_cast<double>(j) * dx_);
}

void HeatChannel::step(double theta_next, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("heat: dt must be positive");
    const std::size_t m = field_.size() - 1;
    const double r = dt / (dx_ * dx_);
    // Crank-Nicolson rows for nodes 0..m-1; node m is the Dirichlet input.
    sub_.assign(m, 0.0);
    diag_.assign(m, 0.0);
    sup_.assign(m, 0.0);
    rhs_.assign(m, 0.0);
    // node 0, Neumann mirror: d2 = 2 a1 - 2 a0
    diag_[0] = 1.0 + r;
    sup_[0] = -r;
    rhs_[0] = field_[0] + r * (field_[1] - field_[0]);
    for (std::size_t j = 1; j < m; ++j) {
        sub_[j] = -0.5 * r;
        diag_[j] = 1.0 + r;
        sup_[j] = -0.5 * r;
        rhs_[j] = field_[j] + 0.5 * r * (field_[j - 1] - 2.0 * field_[j] + field_[j + 1]);
    }
    // fold the known boundary node into the last interior row
    rhs_[m - 1] += 0.5 * r * theta_next;
    solve_tridiagonal(sub_, diag_, sup_, rhs_);
    for (std::size_t j = 0; j < m; ++j) field_[j] = rhs_[j];
    field_[m] = theta_next;
}

// ---------------------------------------------------------------------------
// RadChannel
// ---------------------------------------------------------------------------

RadChannel::RadChannel(double diffusion, double advection, double reaction, std::size_t cells,
                       double initial)
    : eps_(diffusion), adv_(advection), lam_(reaction),
      dx_(1.0 / static_cast<double>(cells)), field_(cells + 1, initial) {
    if (!(diffusion > 0.0)) throw std::invalid_argument("rad: diffusion must be positive");
    if (advection < 0.0 || reaction < 0.0)
        throw std::invalid_argument("rad: advection and reaction must be nonnegative");
    if (advection * advection / (4.0 * diffusion) - reaction < 0.0)
        throw std::invalid_argument("rad: b^2/(4 eps) - lambda must be nonnegative");
    if (cells < 4) throw std::invalid_argument("rad: needs at least 4 cells");
}

void RadChannel::set_profile(const std::function<double(double)>& profile) {
    for (std::size_t j = 0; j < field_.size(); ++j)
        field_[j] = profile(static_cast<double>(j) * dx_);
}

void RadChannel::step(double theta_next, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("rad: dt must be positive");
    const std::size_t m = field_.size() - 1;
    const double rd = eps_ * dt / (dx_ * dx_);
    const double ra = adv_ * dt / (2.0 * dx_);
    const double rl = lam_ * dt;
    sub_.assign(m, 0.0);
    diag_.assign(m, 0.0);
    sup_.assign(m, 0.0);
    rhs_.assign(m, 0.0);
    // node 0: mirror ghost kills the advection term
    diag_[0] = 1.0 + rd - 0.5 * rl;
    sup_[0] = -rd;
    rhs_[0] = field_[0] + rd * (field_[1] - field_[0]) + 0.5 * rl * field_[0];
    for (std::size_t j = 1; j < m; ++j) {
        const double lo = 0.5 * rd - 0.5 * ra;  // coefficient of node j-1
        const double hi = 0.5 * rd + 0.5 * ra;  // coefficient of node j+1
        sub_[j] = -lo;
        diag_[j] = 1.0 + rd - 0.5 * rl;
        sup_[j] = -hi;
        rhs_[j] = field_[j] + lo * field_[j - 1] + (0.5 * rl - rd) * field_[j] + hi * field_[j + 1];
    }
    rhs_[m - 1] += (0.5 * rd + 0.5 * ra) * theta_next;
    solve_tridiagonal(sub_, diag_, sup_, rhs_);
    for (std::size_t j = 0; j < m; ++j) field_[j] = rhs_[j];
    field_[m] = theta_next;
}

// ---------------------------------------------------------------------------
// WaveChannel
// ---------------------------------------------------------------------------

WaveChannel::WaveChannel(double depth, double damping, std::size_t cells, double initial)
    : depth_(depth), damping_(damping), dx_(depth / static_cast<double>(cells)),
      field_(cells + 1, initial), rate_(cells + 1, 0.0) {
    if (!(depth > 0.0)) throw std::invalid_argument("wave: depth must be positive");
    if (damping < 0.0) throw std::invalid_argument("wave: damping must be nonnegative");
    if (cells < 4) throw std::invalid_argument("wave: needs at least 4 cells");
}

void WaveChannel::set_profile(const std::function<double(double)>& profile,
                              const std::function<double(double)>& rate) {
    for (std::size_t j = 0; j < field_.size(); ++j) {
        const double x = static_cast<double>(j) * dx_;
        field_[j] = profile(x);
        rate_[j] = rate(x);
    }
    prev_theta_ = field_.back();
    has_prev_theta_ = true;
}

void WaveChannel::step(double theta_next, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("wave: dt must be positive");
    const std::size_t m = field_.size() - 1;
    if (!has_prev_theta_) {
        prev_theta_ = field_[m];
        has_prev_theta_ = true;
    }
    const double vb = (theta_next - prev_theta_) / dt;  // boundary velocity
    const double g = 0.25 * dt + 0.5 * damping_;
    const double cg = dt * g / (dx_ * dx_);
    const double cl = dt / (dx_ * dx_);

    auto lap = [&](const std::vector<double>& f, std::size_t j) {
        if (j == 0) return 2.0 * (f[1] - f[0]);
        return f[j - 1] - 2.0 * f[j] + f[j + 1];
    };

    // (I - dt g L) v' = v + dt L a + dt g L v, rows 0..m-1, v'_m known
    sub_.assign(m, 0.0);
    diag_.assign(m, 0.0);
    sup_.assign(m, 0.0);
    rhs_.assign(m, 0.0);
    diag_[0] = 1.0 + 2.0 * cg;
    sup_[0] = -2.0 * cg;
    rhs_[0] = rate_[0] + cl * lap(field_, 0) + cg * lap(rate_, 0);
    for (std::size_t j = 1; j < m; ++j) {
        sub_[j] = -cg;
        diag_[j] = 1.0 + 2.0 * cg;
        sup_[j] = -cg;
        rhs_[j] = rate_[j] + cl * lap(field_, j) + cg * lap(rate_, j);
    }
    rhs_[m - 1] += cg * vb;
    solve_tridiagonal(sub_, diag_, sup_, rhs_);
    for (std::size_t j = 0; j < m; ++j) {
        const double vn = rhs_[j];
        field_[j] += 0.5 * dt * (rate_[j] + vn);
        rate_[j] = vn;
    }
    field_[m] = theta_next;
    rate_[m] = vb;
    prev_theta_ = theta_next;
}

// ---------------------------------------------------------------------------
// StefanChannel
// ---------------------------------------------------------------------------

StefanChannel::StefanChannel(double s0, double cap, std::size_t cells)
    : s_(s0), cap_(cap), dxi_(1.0 / static_cast<double>(cells)), field_(cells + 1, 0.0) {
    if (!(s0 > 0.0)) throw std::invalid_argument("stefan: initial interface must be positive");
    if (!(cap > s0)) throw std::invalid_argument("stefan: domain cap must exceed the initial interface");
    if (cells < 8) throw std::invalid_argument("stefan: needs at least 8 cells");
}

void StefanChannel::physical_grid(std::vector<double>& xs) const {
    xs.resize(field_.size());
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = static_cast<double>(j) * dxi_ * s_;
}

void StefanChannel::set_profile(const std::function<double(double)>& profile) {
    for (std::size_t j = 0; j < field_.size(); ++j)
        field_[j] = profile(static_cast<double>(j) * dxi_ * s_);
    field_.back() = 0.0;
}

void StefanChannel::step(double flux_next, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("stefan: dt must be positive");
    const std::size_t m = field_.size() - 1;

    // Stefan condition, one-sided second-order gradient at the interface (field_[m] = 0)
    const double grad = (-4.0 * field_[m - 1] + field_[m - 2]) / (2.0 * dxi_);
    sdot_ = -grad / s_;
    const double s_new = s_ + dt * sdot_;
    if (!(s_new > 0.0))
        throw std::runtime_error("stefan: interface collapsed to the actuated wall (s <= 0)");
    if (!(s_new < cap_))
        throw std::runtime_error("stefan: interface reached the domain cap");

    // Field step on the front-fixed grid, coefficients frozen at (s_new, sdot)
    const double rd = dt / (s_new * s_new * dxi_ * dxi_);
    const double rm = dt * sdot_ / (s_new * 2.0 * dxi_);
    sub_.assign(m, 0.0);
    diag_.assign(m, 0.0);
    sup_.assign(m, 0.0);
    rhs_.assign(m, 0.0);
    // node 0: flux ghost phi_{-1} = phi_1 + 2 dxi s theta; advection coefficient xi_0 = 0
    const double ghost_old = 2.0 * dxi_ * s_new * prev_flux_;
    const double ghost_new = 2.0 * dxi_ * s_new * flux_next;
    diag_[0] = 1.0 + rd;
    sup_[0] = -rd;
    rhs_[0] = field_[0] + rd * (field_[1] - field_[0]) + 0.5 * rd * (ghost_old + ghost_new);
    for (std::size_t j = 1; j < m; ++j) {
        const double xi = static_cast<double>(j) * dxi_;
        const double lo = 0.5 * rd - 0.5 * xi * rm;
        const double hi = 0.5 * rd + 0.5 * xi * rm;
        sub_[j] = -lo;
        diag_[j] = 1.0 + rd;
        sup_[j] = -hi;
        rhs_[j] = field_[j] + lo * field_[j - 1] - rd * field_[j] + hi * field_[j + 1];
    }
    // interface node m stays at the melting value (phi_m = 0), nothing to fold in
    solve_tridiagonal(sub_, diag_, sup_, rhs_);
    for (std::size_t j = 0; j < m; ++j) field_[j] = rhs_[j];
    field_[m] = 0.0;
    s_ = s_new;
    prev_flux_ = flux_next;
}

// ---------------------------------------------------------------------------
// VariableDelayChannel
// ---------------------------------------------------------------------------

VariableDelayChannel::VariableDelayChannel(std::function<double(double)> delay_of_t,
                                           double max_delay, double initial)
    : delay_(std::move(delay_of_t)), max_delay_(max_delay) {
    if (!(max_delay > 0.0)) throw std::invalid_argument("variable delay: max delay must be positive");
    history_.emplace_back(0.0, initial);
}

void VariableDelayChannel::preload(const std::function<double(double)>& theta_at_time,
                                   double dt) {
    history_.clear();
    const auto taps = static_cast<std::size_t>(std::ceil((max_delay_ + 10.0 * dt) / dt));
    for (std::size_t j = taps + 1; j-- > 0;) {
        const double t = -static_cast<double>(j) * dt;
        history_.emplace_back(t, theta_at_time(t));
    }
}

void VariableDelayChannel::step(double theta_next, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("variable delay: dt must be positive");
    t_ += dt;
    history_.emplace_back(t_, theta_next);
    const double horizon = t_ - max_delay_ - 10.0 * dt;
    while (history_.size() > 2 && history_[1].first < horizon) history_.pop_front();
}

double VariableDelayChannel::output() const {
    const double d = delay_(t_);
    if (!(d > 0.0) || d > max_delay_ + 1e-9)
        throw std::runtime_error("variable delay: D(t) left (0, D_max]");
    const double ts = t_ - d;
    if (ts <= history_.front().first) return history_.front().second;
    // binary search on the time-stamped history
    std::size_t lo = 0, hi = history_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (history_[mid].first <= ts) lo = mid;
        else hi = mid;
    }
    const auto& [t0, v0] = history_[lo];
    const auto& [t1, v1] = history_[hi];
    const double frac = (ts - t0) / (t1 - t0);
    return v0 + frac * (v1 - v0);
}

// ---------------------------------------------------------------------------
// DistributedDelayChannel
// ---------------------------------------------------------------------------

DistributedDelayChannel::DistributedDelayChannel(double delay, PiecewiseCdf cdf, double dt,
                                                 double initial)
    : delay_(delay), dt_(dt), cdf_(std::move(cdf)) {
    if (!(delay > 0.0)) throw std::invalid_argument("distributed delay: delay must be positive");
    const double taps_real = delay / dt;
    const auto taps = static_cast<std::size_t>(std::llround(taps_real));
    if (taps == 0 || std::abs(taps_real - static_cast<double>(taps)) > 1e-6)
        throw std::invalid_argument("distributed delay: dt must divide the delay exactly");
    line_ = DelayLine(taps, dt, initial);
}

void DistributedDelayChannel::step(double theta_next, double dt) {
    if (std::abs(dt - dt_) > 1e-12 * dt_)
        throw std::invalid_argument("distributed delay: dt changed after construction");
    line_.push(theta_next);
}

double DistributedDelayChannel::output() const {
    return cdf_.integrate([&](double sigma) { return line_.lagged_interp(sigma); });
}

// ---------------------------------------------------------------------------

double channel_output(const Channel& ch) {
    return std::visit([](const auto& c) { return c.output(); }, ch);
}

void channel_step(Channel& ch, double theta_next, double dt) {
    std::visit([&](auto& c) { c.step(theta_next, dt); }, ch);
}

} // namespace espde
