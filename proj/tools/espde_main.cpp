#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "espde/export.hpp"
#include "espde/scenario.hpp"

namespace {

espde::ScenarioConfig load_config(const std::string& ref) {
    const auto names = espde::builtin_scenario_names();
    if (std::find(names.begin(), names.end(), ref) != names.end())
        return espde::builtin_scenario(ref);
    std::ifstream in(ref);
    if (!in) throw std::runtime_error("no built-in scenario or readable config file named '" + ref + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return espde::config_from_json_text(ss.str());
}

void apply_overrides(espde::ScenarioConfig& cfg, double dt, double t_end, bool no_compensation) {
    if (dt > 0.0) cfg.numerics.dt = dt;
    if (t_end > 0.0) cfg.numerics.t_end = t_end;
    if (no_compensation) cfg.compensation = false;
}

void print_summary(const espde::ScenarioResult& res) {
    std::cout << res.config.name << ": " << res.time.size() << " samples, dt=" << res.dt
              << " s, Pi=" << res.frequencies.period << " s";
    if (res.blowup_time) {
        std::cout << ", DIVERGED at t=" << *res.blowup_time << " s";
    } else if (res.metrics_valid) {
        std::cout << ", tail residual";
        for (double v : res.metrics.tail_residual_action) std::cout << " " << v;
    }
    std::cout << " (wall " << res.wall_seconds << " s)\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"extremum / Nash equilibrium seeking through PDE actuation channels"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    double dt_override = 0.0, t_end_override = 0.0;
    bool no_compensation = false, with_svg = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--dt", dt_override, "time step override [s]");
        cmd->add_option("--t-end", t_end_override, "simulation horizon override [s]");
        cmd->add_flag("--no-compensation", no_compensation, "disable the PDE compensators");
        cmd->add_flag("--svg", with_svg, "also write per-signal SVG charts");
    };

    std::string run_ref;
    auto* run_cmd = app.add_subcommand("run", "run a scenario and export its results");
    run_cmd->add_option("scenario", run_ref, "built-in name or config JSON path")->required();
    add_common(run_cmd);

    auto* list_cmd = app.add_subcommand("list", "list the built-in scenarios");

    std::string sweep_ref, sweep_param = "epsilon", sweep_values_text;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario across parameter values");
    sweep_cmd->add_option("scenario", sweep_ref, "built-in name or config JSON path")->required();
    sweep_cmd->add_option("--param", sweep_param, "swept parameter (epsilon)");
    sweep_cmd->add_option("--values", sweep_values_text, "comma-separated values")->required();
    add_common(sweep_cmd);

    std::string check_ref;
    auto* check_cmd = app.add_subcommand("check", "stability report only, no simulation");
    check_cmd->add_option("scenario", check_ref, "built-in name or config JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list_cmd) {
            for (const auto& name : espde::builtin_scenario_names()) std::cout << name << "\n";
            return 0;
        }
        if (*run_cmd) {
            auto cfg = load_config(run_ref);
            apply_overrides(cfg, dt_override, t_end_override, no_compensation);
            std::filesystem::create_directories(out_dir);
            const auto res = espde::run_scenario(cfg);
            print_summary(res);
            for (const auto& p : espde::export_result(res, out_dir, with_svg))
                std::cout << "wrote " << p << "\n";
            return 0;
        }
        if (*sweep_cmd) {
            if (sweep_param != "epsilon")
                throw std::runtime_error("only --param epsilon is supported");
            auto cfg = load_config(sweep_ref);
            apply_overrides(cfg, dt_override, t_end_override, no_compensation);
            std::vector<double> values;
            std::stringstream ss(sweep_values_text);
            for (std::string tok; std::getline(ss, tok, ',');) values.push_back(std::stod(tok));
            if (values.empty()) throw std::runtime_error("sweep: no values given");
            std::filesystem::create_directories(out_dir);
            for (const auto& res : espde::sweep_epsilon(cfg, values)) {
                print_summary(res);
                for (const auto& p : espde::export_result(res, out_dir, with_svg))
                    std::cout << "wrote " << p << "\n";
            }
            return 0;
        }
        if (*check_cmd) {
            auto cfg = espde::resolve_config(load_config(check_ref));
            std::vector<double> gains, depths;
            for (const auto& pl : cfg.players) {
                gains.push_back(std::abs(pl.controller.gain));
                switch (pl.channel.kind) {
                    case espde::ChannelKind::none: depths.push_back(0.0); break;
                    case espde::ChannelKind::rad: depths.push_back(1.0); break;
                    case espde::ChannelKind::stefan: depths.push_back(pl.channel.s0); break;
                    case espde::ChannelKind::variable_delay:
                        depths.push_back(pl.channel.max_delay());
                        break;
                    default: depths.push_back(pl.channel.depth); break;
                }
            }
            const auto rep = espde::stability_report(cfg.game, gains, depths);
            std::cout << "diagonal dominance: " << (rep.dominance.pass ? "pass" : "fail") << "\n";
            for (std::size_t i = 0; i < rep.dominance.margins.size(); ++i)
                std::cout << "  row " << i + 1 << " margin: " << rep.dominance.margins[i] << "\n";
            std::cout << "hurwitz max Re eig(KH): " << rep.hurwitz_max_real << " ("
                      << (rep.hurwitz_pass ? "pass" : "fail") << ")\n";
            std::cout << "small gain: " << (rep.small_gain.pass ? "pass" : "fail") << ", margin "
                      << rep.small_gain.margin << "\n";
            std::cout << "epsilon*: " << rep.epsilon_star << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
