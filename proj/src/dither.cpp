#include "espde/dither.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace espde {

double demod_gradient(double a, double omega, double t) {
    return (2.0 / a) * std::sin(omega * t);
}

double demod_hessian_game(double a, double omega, double t) {
    const double s = std::sin(omega * t);
    return (16.0 / (a * a)) * (s * s - 0.5);
}

double demod_hessian_scalar(double a, double omega, double t) {
    return -(8.0 / (a * a)) * std::cos(2.0 * omega * t);
}

DemodPair demod_variable_delay(double a, double omega, double t,
                               const std::function<double(double)>& delay_of_t) {
    const double phase = omega * (t - delay_of_t(t));
    DemodPair d;
    d.m = (2.0 / a) * std::sin(phase);
    d.n = -(8.0 / (a * a)) * std::cos(2.0 * phase);
    return d;
}

// ---------------------------------------------------------------------------
// Frequencies
// ---------------------------------------------------------------------------

bool multipliers_admissible(const std::vector<Rational>& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(m[i].value() > 0.0)) return false;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (m[i] == m[j]) return false;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i) continue;
                const Rational half_sum = (m[j] + m[k]) / Rational(2);
                if (m[i] == half_sum) return false;
                if (m[i] == m[j] + m[k] + m[k]) return false;
                for (std::size_t l = 0; l < n; ++l) {
                    if (l == i) continue;
                    if (m[i] == m[j] + m[k] + m[l]) return false;
                    if (m[i] == m[j] + m[k] - m[l]) return false;
                }
            }
        }
    }
    return true;
}

FrequencySet make_frequency_set(double omega_base, std::vector<Rational> multipliers) {
    if (!(omega_base > 0.0)) throw std::invalid_argument("frequency set: omega base must be positive");
    if (multipliers.empty()) throw std::invalid_argument("frequency set: needs at least one multiplier");
    if (!multipliers_admissible(multipliers))
        throw std::invalid_argument("frequency set: multipliers hit the resonance exclusion set");
    Rational lcm = multipliers.front().inverse();
    for (std::size_t i = 1; i < multipliers.size(); ++i)
        lcm = rational_lcm(lcm, multipliers[i].inverse());
    FrequencySet fs;
    fs.omega_base = omega_base;
    fs.multipliers = std::move(multipliers);
    fs.period = 2.0 * M_PI * lcm.value() / omega_base;
    return fs;
}

FrequencySet select_frequencies(std::size_t players, double omega_base) {
    if (players == 0) throw std::invalid_argument("select_frequencies: needs at least one player");
    std::vector<Rational> chosen;
    chosen.reserve(players);
    // quarter-integer ladder starting at 1
    for (std::int64_t step = 4; chosen.size() < players && step < 4000; ++step) {
        Rational candidate(step, 4);
        chosen.push_back(candidate);
        if (!multipliers_admissible(chosen)) chosen.pop_back();
    }
    if (chosen.size() < players)
        throw std::runtime_error("select_frequencies: ladder exhausted");
    return make_frequency_set(omega_base, std::move(chosen));
}

// ---------------------------------------------------------------------------
// Probes
// ---------------------------------------------------------------------------

double DelayProbe::value(double t) const { return a * std::sin(omega * (t + delay)); }

double HeatProbe::value(double t) const { return field(depth, t); }

double HeatProbe::field(double x, double t) const {
    const double q = std::sqrt(omega / 2.0) * x;
    return 0.5 * a * std::exp(q) * std::sin(omega * t + q) +
           0.5 * a * std::exp(-q) * std::sin(omega * t - q);
}

double HeatProbe::field_rate(double x, double t) const {
    const double q = std::sqrt(omega / 2.0) * x;
    return 0.5 * a * omega * std::exp(q) * std::cos(omega * t + q) +
           0.5 * a * omega * std::exp(-q) * std::cos(omega * t - q);
}

double WaveProbe::value(double t) const { return a * std::cos(omega * depth) * std::sin(omega * t); }

double WaveKvProbe::phase_rate() const {
    const double w2d2 = omega * omega * damping * damping;
    return omega * std::sqrt((std::sqrt(1.0 + w2d2) + 1.0) / (2.0 * (1.0 + w2d2)));
}

double WaveKvProbe::growth_rate() const {
    const double w2d2 = omega * omega * damping * damping;
    return omega * std::sqrt((std::sqrt(1.0 + w2d2) - 1.0) / (2.0 * (1.0 + w2d2)));
}

double WaveKvProbe::field(double x, double t) const {
    const double p = phase_rate(), g = growth_rate();
    return 0.5 * a * (std::exp(g * x) * std::sin(omega * t + p * x) +
                      std::exp(-g * x) * std::sin(omega * t - p * x));
}

double WaveKvProbe::field_rate(double x, double t) const {
    const double p = phase_rate(), g = growth_rate();
    return 0.5 * a * omega * (std::exp(g * x) * std::cos(omega * t + p * x) +
                              std::exp(-g * x) * std::cos(omega * t - p * x));
}

double WaveKvProbe::value(double t) const { return field(depth, t); }

RadProbe::RadProbe(double a, double omega, double diffusion, double advection, double reaction,
                   int terms)
    : omega_(omega), conv_(advection / (2.0 * diffusion)) {
    if (!(diffusion > 0.0)) throw std::invalid_argument("rad probe: diffusion must be positive");
    if (advection < 0.0 || reaction < 0.0)
        throw std::invalid_argument("rad probe: advection and reaction must be nonnegative");
    const double xi = advection * advection / (4.0 * diffusion) - reaction;
    if (xi < 0.0)
        throw std::invalid_argument("rad probe: kernel validity requires b^2/(4 eps) - lambda >= 0");
    if (terms < 1) throw std::invalid_argument("rad probe: series needs at least one term");

    // A_k = (1/eps^k) (d/dt + xi)^k [a sin(w t)] tracked as p sin + q cos
    double p = a, q = 0.0;
    double fact_even = 1.0;  // (2k)!
    double fact_odd = 1.0;   // (2k+1)!
    for (int k = 0; k < terms; ++k) {
        if (k > 0) {
            fact_even *= (2.0 * k - 1.0) * (2.0 * k);
            fact_odd *= (2.0 * k) * (2.0 * k + 1.0);
        }
        sin_basis_.push_back(p);
        cos_basis_.push_back(q);
        rate_sin_.push_back(-omega * q);
        rate_cos_.push_back(omega * p);
        poly_even_.push_back(1.0 / fact_even);
        poly_odd_.push_back(conv_ / fact_odd);
        tail_ = std::hypot(p, q) / fact_even;
        const double pn = (xi * p - omega * q) / diffusion;
        const double qn = (xi * q + omega * p) / diffusion;
        p = pn;
        q = qn;
    }
    const double scale = std::exp(-conv_);
    for (std::size_t k = 0; k < sin_basis_.size(); ++k) {
        value_sin_ += scale * (poly_even_[k] + poly_odd_[k]) * sin_basis_[k];
        value_cos_ += scale * (poly_even_[k] + poly_odd_[k]) * cos_basis_[k];
    }
}

double RadProbe::value(double t) const {
    return value_sin_ * std::sin(omega_ * t) + value_cos_ * std::cos(omega_ * t);
}

double RadProbe::field(double x, double t) const {
    double cs = 0.0, cc = 0.0;
    double xe = 1.0;
    for (std::size_t k = 0; k < sin_basis_.size(); ++k) {
        const double w = poly_even_[k] * xe + poly_odd_[k] * xe * x;
        cs += w * sin_basis_[k];
        cc += w * cos_basis_[k];
        xe *= x * x;
    }
    const double scale = std::exp(-conv_ * x);
    return scale * (cs * std::sin(omega_ * t) + cc * std::cos(omega_ * t));
}

double RadProbe::field_rate(double x, double t) const {
    double cs = 0.0, cc = 0.0;
    double xe = 1.0;  // x^{2k}
    for (std::size_t k = 0; k < sin_basis_.size(); ++k) {
        const double w = poly_even_[k] * xe + poly_odd_[k] * xe * x;
        cs += w * rate_sin_[k];
        cc += w * rate_cos_[k];
        xe *= x * x;
    }
    const double scale = std::exp(-conv_ * x);
    return scale * (cs * std::sin(omega_ * t) + cc * std::cos(omega_ * t));
}

StefanProbe::StefanProbe(double a, double omega, double s0, int terms)
    : a_(a), omega_(omega), s0_(s0), terms_(terms), flux_(omega) {
    if (terms < 1) throw std::invalid_argument("stefan probe: series needs at least one term");
    // S(t) = -sum_i 1/(2i-1)! d^i/dt^i [(-s0 - a sin)^{2i-1}]
    const TrigPoly edge = [&] {
        TrigPoly p = TrigPoly::constant(omega, -s0);
        p += TrigPoly::sine(omega, -a);
        return p;
    }();
    double fact = 1.0;  // (2i-1)!
    for (int i = 1; i <= terms; ++i) {
        fact *= (2.0 * i - 2.0 > 0 ? (2.0 * i - 2.0) : 1.0) * (2.0 * i - 1.0);
        TrigPoly term = edge.pow(static_cast<unsigned>(2 * i - 1)).derivative(static_cast<unsigned>(i));
        term *= -1.0 / fact;
        tail_ = term.max_amplitude();
        flux_ += term;
    }
    // d^i/dt^i (-a sin)^m tables for the field series
    sin_power_.resize(static_cast<std::size_t>(terms) + 1);
    const TrigPoly minus_dither = TrigPoly::sine(omega, -a);
    std::vector<TrigPoly> powers;
    for (int m = 0; m <= 2 * terms; ++m)
        powers.push_back(m == 0 ? TrigPoly::constant(omega, 1.0)
                                : minus_dither.pow(static_cast<unsigned>(m)));
    for (int i = 1; i <= terms; ++i) {
        auto& row = sin_power_[static_cast<std::size_t>(i)];
        for (int m = 0; m <= 2 * i; ++m)
            row.push_back(powers[static_cast<std::size_t>(m)].derivative(static_cast<unsigned>(i)));
    }
}

double StefanProbe::value(double t) const { return flux_.eval(t); }

double StefanProbe::reference_interface(double t) const { return s0_ + a_ * std::sin(omega_ * t); }

void StefanProbe::field_profile(double t, const std::vector<double>& xs,
                                std::vector<double>& out) const {
    // beta(x,t) = sum_{i>=1} 1/(2i)! d^i/dt^i [(x-s0) - a sin]^{2i}, binomial in y = x - s0.
    // The d^i/dt^i (-a sin)^m values depend only on t, so they are tabulated once per call.
    std::vector<std::vector<double>> vals(static_cast<std::size_t>(terms_) + 1);
    for (int i = 1; i <= terms_; ++i) {
        const auto& row = sin_power_[static_cast<std::size_t>(i)];
        auto& v = vals[static_cast<std::size_t>(i)];
        v.resize(row.size());
        for (std::size_t m = 0; m < row.size(); ++m) v[m] = row[m].eval(t);
    }
    out.assign(xs.size(), 0.0);
    for (std::size_t p = 0; p < xs.size(); ++p) {
        const double y = xs[p] - s0_;
        std::vector<double> ypow(static_cast<std::size_t>(2 * terms_) + 1);
        ypow[0] = 1.0;
        for (int m = 1; m <= 2 * terms_; ++m) ypow[static_cast<std::size_t>(m)] = ypow[static_cast<std::size_t>(m - 1)] * y;
        double acc = 0.0;
        double fact = 1.0;  // (2i)!
        for (int i = 1; i <= terms_; ++i) {
            fact *= (2.0 * i - 1.0) * (2.0 * i);
            const auto& v = vals[static_cast<std::size_t>(i)];
            double binom = 1.0;  // C(2i, m)
            double term = 0.0;
            for (int m = 0; m <= 2 * i; ++m) {
                term += binom * ypow[static_cast<std::size_t>(2 * i - m)] * v[static_cast<std::size_t>(m)];
                binom *= static_cast<double>(2 * i - m) / static_cast<double>(m + 1);
            }
            acc += term / fact;
        }
        out[p] = acc;
    }
}

double StefanProbe::field(double x, double t) const {
    std::vector<double> out;
    field_profile(t, {x}, out);
    return out[0];
}

double VariableDelayProbe::value(double t) const { return a * std::sin(omega * t); }

DistributedDelayProbe::DistributedDelayProbe(double a, double omega, const PiecewiseCdf& cdf,
                                             double gamma)
    : omega_(omega) {
    const std::complex<double> b = cdf.characteristic(omega);
    gamma_ = gamma > 0.0 ? gamma : std::abs(b);
    if (!(gamma_ > 0.0))
        throw std::invalid_argument("distributed probe: normalizer gamma(w) vanished");
    // Int sin(w(t+xi)) d beta = Re(B) sin(wt) + Im(B) cos(wt)
    coef_sin_ = a * b.real() / gamma_;
    coef_cos_ = a * b.imag() / gamma_;
}

double DistributedDelayProbe::value(double t) const {
    return coef_sin_ * std::sin(omega_ * t) + coef_cos_ * std::cos(omega_ * t);
}

} // namespace espde
