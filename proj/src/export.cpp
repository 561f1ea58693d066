#include "espde/export.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace espde {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void open_or_throw(std::ofstream& out, const std::string& path) {
    out.open(path, std::ios::binary);
    if (!out) throw std::runtime_error("export: cannot open '" + path + "' for writing");
}

const std::vector<std::vector<double>>& series_by_name(const ScenarioResult& r,
                                                       const std::string& signal) {
    if (signal == "theta") return r.theta;
    if (signal == "Theta") return r.action;
    if (signal == "y") return r.payoff;
    if (signal == "G") return r.grad;
    if (signal == "Hhat") return r.hess;
    if (signal == "U") return r.control;
    throw std::invalid_argument("export: unknown signal '" + signal + "'");
}

} // namespace

void write_csv(const ScenarioResult& r, const std::string& path) {
    std::ofstream out;
    open_or_throw(out, path);
    const std::size_t n = r.theta.size();
    out << "t_s";
    for (std::size_t i = 0; i < n; ++i) {
        const std::string p = "p" + std::to_string(i + 1);
        out << "," << p << "_theta_action" << "," << p << "_Theta_action" << "," << p
            << "_y_payoff" << "," << p << "_G_payoff_per_action" << "," << p
            << "_Hhat_payoff_per_action2" << "," << p << "_U_action_per_s" << "," << p
            << "_u_l2";
    }
    out << "\n";
    for (std::size_t s = 0; s < r.time.size(); ++s) {
        out << fmt(r.time[s]);
        for (std::size_t i = 0; i < n; ++i) {
            out << "," << fmt(r.theta[i][s]) << "," << fmt(r.action[i][s]) << ","
                << fmt(r.payoff[i][s]) << "," << fmt(r.grad[i][s]) << "," << fmt(r.hess[i][s])
                << "," << fmt(r.control[i][s]) << "," << fmt(r.state_l2[i][s]);
        }
        out << "\n";
    }
}

void write_manifest(const ScenarioResult& r, const std::string& path) {
    std::ofstream out;
    open_or_throw(out, path);
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, r.config_hash);
    out << "scenario: " << r.config.name << "\n";
    out << "config_hash: " << hash << "\n";
    out << "seed: 0 (deterministic, no randomness)\n";
    out << "wall_seconds: " << r.wall_seconds << "\n";
    out << "dt_s: " << fmt(r.dt) << "\n";
    out << "dt_sample_s: " << fmt(r.dt_sample) << "\n";
    out << "samples: " << r.time.size() << "\n";
    out << "averaging_period_s: " << fmt(r.frequencies.period) << "\n";
    out << "omega_base_rad_per_s: " << fmt(r.frequencies.omega_base) << "\n";
    for (std::size_t i = 0; i < r.frequencies.multipliers.size(); ++i)
        out << "omega_prime_" << i + 1 << ": " << r.frequencies.multipliers[i].num << "/"
            << r.frequencies.multipliers[i].den << " (omega = " << fmt(r.frequencies.omega(i))
            << " rad/s)\n";
    out << "theta_star:";
    for (double v : r.theta_star) out << " " << fmt(v);
    out << "\n";
    if (r.blowup_time) out << "divergence_detected_at_s: " << fmt(*r.blowup_time) << "\n";
    for (const auto& note : r.notes) out << "note: " << note << "\n";
    out << "resolved_config_json:\n" << config_to_json_text(r.config) << "\n";
}

void write_report(const ScenarioResult& r, const std::string& path) {
    std::ofstream out;
    open_or_throw(out, path);
    out << "scenario: " << r.config.name << "\n\n";
    out << "[stability]\n";
    out << "diagonal_dominance: " << (r.stability.dominance.pass ? "pass" : "fail") << "\n";
    for (std::size_t i = 0; i < r.stability.dominance.margins.size(); ++i)
        out << "  row_" << i + 1 << "_margin: " << fmt(r.stability.dominance.margins[i]) << "\n";
    out << "hurwitz_max_real_eig_KH: " << fmt(r.stability.hurwitz_max_real) << " ("
        << (r.stability.hurwitz_pass ? "pass" : "fail") << ")\n";
    out << "small_gain: " << (r.stability.small_gain.pass ? "pass" : "fail")
        << " margin " << fmt(r.stability.small_gain.margin) << "\n";
    for (std::size_t i = 0; i < r.stability.small_gain.lhs_gain.size(); ++i)
        out << "  player_" << i + 1 << "_lhs: " << fmt(r.stability.small_gain.lhs_gain[i]) << ", "
            << fmt(r.stability.small_gain.lhs_state[i]) << "\n";
    out << "epsilon_star: " << fmt(r.stability.epsilon_star) << "\n\n";
    out << "[convergence]\n";
    if (r.blowup_time) {
        out << "divergence_detected_at_s: " << fmt(*r.blowup_time) << "\n";
    } else if (r.metrics_valid) {
        for (std::size_t i = 0; i < r.metrics.tail_residual_action.size(); ++i) {
            out << "player_" << i + 1
                << "_tail_sup_|Theta-Theta*|: " << fmt(r.metrics.tail_residual_action[i]) << "\n";
            out << "player_" << i + 1
                << "_tail_sup_|theta-theta*|: " << fmt(r.metrics.tail_residual_input[i]) << "\n";
            out << "player_" << i + 1
                << "_band_constant: " << fmt(r.metrics.band_constant[i]) << "\n";
        }
        out << "periodic_state_norm: " << fmt(r.metrics.periodic_norm) << "\n";
    } else {
        out << "metrics: unavailable (run too short)\n";
    }
}

std::vector<std::string> chart_signals() { return {"theta", "Theta", "y", "G", "Hhat", "U"}; }

void write_svg(const ScenarioResult& r, const std::string& signal, const std::string& path) {
    const auto& series = series_by_name(r, signal);
    if (r.time.empty()) throw std::runtime_error("export: empty result");
    std::ofstream out;
    open_or_throw(out, path);

    const int width = 900, height = 420, margin = 55;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series)
        for (double v : s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > lo)) {
        hi = lo + 1.0;
        lo -= 1.0;
    }
    const double t0 = r.time.front(), t1 = r.time.back();
    auto xmap = [&](double t) {
        return margin + (t - t0) / (t1 - t0) * (width - 2 * margin);
    };
    auto ymap = [&](double v) {
        return height - margin - (v - lo) / (hi - lo) * (height - 2 * margin);
    };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">t [s]</text>\n";
    out << "<text x=\"" << 16 << "\" y=\"" << height / 2 << "\" text-anchor=\"middle\" "
        << "font-size=\"13\" transform=\"rotate(-90 16 " << height / 2 << ")\">" << signal
        << "</text>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << r.config.name << " - " << signal << "</text>\n";
    out << "<text x=\"" << margin << "\" y=\"" << height - margin + 16 << "\" font-size=\"11\">"
        << fmt(t0) << "</text>\n";
    out << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 16
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(t1) << "</text>\n";
    out << "<text x=\"" << margin - 4 << "\" y=\"" << height - margin
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(lo) << "</text>\n";
    out << "<text x=\"" << margin - 4 << "\" y=\"" << margin + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(hi) << "</text>\n";

    const std::size_t stride = std::max<std::size_t>(1, r.time.size() / 2000);
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[i % 8]
            << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t s = 0; s < r.time.size(); s += stride)
            out << xmap(r.time[s]) << "," << ymap(series[i][s]) << " ";
        const std::size_t last = r.time.size() - 1;
        out << xmap(r.time[last]) << "," << ymap(series[i][last]);
        out << "\"/>\n";
        out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 16 * (i + 1)
            << "\" font-size=\"11\" fill=\"" << colors[i % 8] << "\">p" << i + 1 << "</text>\n";
    }
    out << "</svg>\n";
}

std::vector<std::string> export_result(const ScenarioResult& r, const std::string& dir,
                                       bool with_svg) {
    std::vector<std::string> written;
    const std::string base = dir.empty() ? r.config.name : dir + "/" + r.config.name;
    write_csv(r, base + ".csv");
    written.push_back(base + ".csv");
    write_manifest(r, base + ".manifest.txt");
    written.push_back(base + ".manifest.txt");
    write_report(r, base + ".report.txt");
    written.push_back(base + ".report.txt");
    if (with_svg)
        for (const auto& sig : chart_signals()) {
            const std::string p = base + "." + sig + ".svg";
            write_svg(r, sig, p);
            written.push_back(p);
        }
    return written;
}

} // namespace espde
