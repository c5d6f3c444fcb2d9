// aclab — avoided-crossing resonance scans for trapped-ion gate models.
//
// Subcommands: scan-spectrum, find-resonance, flip-prob, gate-error,
// speed-bound. Flags mirror the run-config fields; a --config file overrides
// flags. Exit codes: 0 success, 2 config error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aclab/aclab.hpp"

namespace {

using namespace aclab;
using nlohmann::json;

struct RunConfig {
    models::ModelSpec model;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool window_set = false;
    int points = 201;
    std::string pulse = "ld_pi";
    std::string csv_path;
    std::string json_path;
    double strength_min = 0.05;
    double strength_max = 0.3;
    int strength_points = 11;
    double epsilon_t = 0.05;
    double speed_eta = 0.1;
    int speed_n = 0;

    void resolve_window(const models::ScanModel& m) {
        if (!window_set) {
            window_lo = m.xi0() - 0.25;
            window_hi = m.xi0() + 0.25;
        }
        if (!(window_hi > window_lo))
            throw ConfigError("window: upper bound must exceed lower bound");
    }
};

dynamics::PulseSpec parse_pulse(const std::string& name, double explicit_time) {
    using Rule = dynamics::PulseSpec::Rule;
    if (name == "ld_pi") return dynamics::PulseSpec::ld_pi();
    if (name == "sideband_pi") return dynamics::PulseSpec::sideband_pi();
    if (name == "effective_pi") return dynamics::PulseSpec::effective_pi();
    if (name == "explicit") return dynamics::PulseSpec::explicit_time(explicit_time);
    throw ConfigError("unknown pulse rule '" + name +
                      "' (expected ld_pi, sideband_pi, effective_pi or explicit)");
    (void)Rule::ld_pi;
}

// Pinpoints parse errors with line/column computed from the byte offset.
json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
        }
        throw ConfigError("config " + path + ":" + std::to_string(line) + ":" +
                          std::to_string(col) + ": " + e.what());
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    const json j = load_config_file(path);
    try {
        if (j.contains("model")) cfg.model = io::model_spec_from_json(j.at("model"));
        if (j.contains("window")) {
            const auto& w = j.at("window");
            if (!w.is_array() || w.size() != 2)
                throw ConfigError("config: window must be [lo, hi]");
            cfg.window_lo = w[0].get<double>();
            cfg.window_hi = w[1].get<double>();
            cfg.window_set = true;
        }
        if (j.contains("points")) cfg.points = j.at("points").get<int>();
        if (j.contains("pulse")) cfg.pulse = j.at("pulse").get<std::string>();
        if (j.contains("csv")) cfg.csv_path = j.at("csv").get<std::string>();
        if (j.contains("json")) cfg.json_path = j.at("json").get<std::string>();
        if (j.contains("strengths")) {
            const auto& s = j.at("strengths");
            if (s.contains("min")) cfg.strength_min = s.at("min").get<double>();
            if (s.contains("max")) cfg.strength_max = s.at("max").get<double>();
            if (s.contains("points")) cfg.strength_points = s.at("points").get<int>();
        }
        if (j.contains("epsilon_t")) cfg.epsilon_t = j.at("epsilon_t").get<double>();
        if (j.contains("eta") && !j.contains("model")) cfg.speed_eta = j.at("eta").get<double>();
        if (j.contains("speed_eta")) cfg.speed_eta = j.at("speed_eta").get<double>();
        if (j.contains("n")) cfg.speed_n = j.at("n").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << text;
}

void emit_json(const RunConfig& cfg, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (!cfg.json_path.empty())
        write_text_file(cfg.json_path, text);
    else
        std::cout << text;
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2) throw ConfigError("grid needs at least 2 points");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * double(i) / double(points - 1);
    return g;
}

int cmd_scan_spectrum(RunConfig cfg) {
    const auto model = models::make_scan_model(cfg.model);
    cfg.resolve_window(model);
    const auto track = spectra::scan_levels(model, cfg.window_lo, cfg.window_hi, cfg.points);
    const auto sres = spectra::find_structural_resonance(model, track);

    if (!cfg.csv_path.empty()) {
        std::ostringstream os;
        io::write_level_track_csv(os, track);
        write_text_file(cfg.csv_path, os.str());
    }
    json summary{{"units", "omega_T"},
                 {"model", io::to_json(cfg.model)},
                 {"window", {cfg.window_lo, cfg.window_hi}},
                 {"points", cfg.points},
                 {"xi_0", model.xi0()},
                 {"xi_S", sres.xi_s},
                 {"min_gap", sres.min_gap},
                 {"xi_S_slope_check", sres.xi_s_slope},
                 {"cross_check_ok", sres.cross_check_ok},
                 {"isolated", sres.isolated},
                 {"max_third_level_overlap", track.max_intrusion()},
                 {"tolerance", sres.tolerance}};
    emit_json(cfg, summary);
    return 0;
}

int cmd_find_resonance(RunConfig cfg) {
    const auto model = models::make_scan_model(cfg.model);
    cfg.resolve_window(model);
    const auto numeric =
        effective::locate_resonances_numeric(model, cfg.window_lo, cfg.window_hi, cfg.points);
    const auto pulse = parse_pulse(cfg.pulse, 0.0);
    const auto dyn = dynamics::find_dynamical_resonance(model, cfg.window_lo,
                                                        cfg.window_hi, pulse, cfg.points);

    json report{{"numeric", io::to_json(numeric)},
                {"dynamics_check",
                 {{"xi_D_flip", dyn.xi_d},
                  {"p_max", dyn.p_max},
                  {"pulse", pulse.name()},
                  {"truncation_warning", dyn.truncation_warning}}},
                {"dynamical_shift_negligible",
                 std::abs(numeric.delta_d) <= 0.1 * std::abs(numeric.delta_s)}};
    if (cfg.model.kind == models::ModelKind::ss_gate) {
        const int k = cfg.model.transition[1] - cfg.model.transition[0];
        report["closed_form"] = io::to_json(
            effective::shift_closed_forms(cfg.model.transition[0], k, cfg.model.eta));
    }
    emit_json(cfg, report);
    return 0;
}

int cmd_flip_prob(RunConfig cfg) {
    const auto model = models::make_scan_model(cfg.model);
    cfg.resolve_window(model);
    const auto pulse = parse_pulse(cfg.pulse, 0.0);
    const auto grid = linspace(cfg.window_lo, cfg.window_hi, cfg.points);
    std::vector<double> prob(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) {
        prob[i] = dynamics::flip_probability(model, grid[i], pulse).probability;
    });
    if (!cfg.csv_path.empty()) {
        std::ostringstream os;
        io::write_flip_scan_csv(os, grid, prob, pulse.name());
        write_text_file(cfg.csv_path, os.str());
    }
    const auto dres =
        dynamics::find_dynamical_resonance(model, cfg.window_lo, cfg.window_hi, pulse, cfg.points);
    emit_json(cfg, json{{"units", "omega_T"},
                        {"pulse", pulse.name()},
                        {"xi_D", dres.xi_d},
                        {"p_max", dres.p_max},
                        {"truncation_warning", dres.truncation_warning}});
    return 0;
}

int cmd_gate_error(RunConfig cfg) {
    const auto pulse = parse_pulse(cfg.pulse, 0.0);
    const auto strengths = linspace(cfg.strength_min, cfg.strength_max, cfg.strength_points);
    std::vector<dynamics::GateErrorCurve> curves;
    for (auto tuning : {dynamics::Tuning::bare, dynamics::Tuning::structural,
                        dynamics::Tuning::dynamical})
        curves.push_back(dynamics::gate_error_curve(cfg.model, strengths, tuning, pulse));

    if (!cfg.csv_path.empty()) {
        std::ostringstream os;
        io::write_error_curve_csv(os, curves);
        write_text_file(cfg.csv_path, os.str());
    }

    json fits = json::object();
    for (const auto& c : curves) {
        const auto fit = dynamics::fit_error_curve(c);
        fits[dynamics::to_string(c.tuning)] = {{"slope", fit.slope},
                                               {"intercept", fit.intercept},
                                               {"r_squared", fit.r_squared}};
    }
    const double slope_bare = fits["bare"]["slope"].get<double>();
    const double slope_dyn = fits["dynamical"]["slope"].get<double>();
    double max_struct_dyn_gap = 0.0;
    for (std::size_t i = 0; i < strengths.size(); ++i)
        max_struct_dyn_gap = std::max(
            max_struct_dyn_gap, std::abs(curves[1].error[i] - curves[2].error[i]));

    emit_json(cfg, json{{"units", "omega_T"},
                        {"model", io::to_json(cfg.model)},
                        {"pulse", pulse.name()},
                        {"strength_name", curves.front().strength_name},
                        {"strengths", {{"min", cfg.strength_min},
                                       {"max", cfg.strength_max},
                                       {"points", cfg.strength_points}}},
                        {"fits", fits},
                        {"slope_ratio_bare_over_dynamical", slope_bare / slope_dyn},
                        {"max_structural_dynamical_gap", max_struct_dyn_gap}});
    return 0;
}

int cmd_speed_bound(RunConfig cfg) {
    const auto pulse = parse_pulse(cfg.pulse, 0.0);
    models::ModelSpec base = cfg.model;
    base.kind = models::ModelKind::ss_gate;
    base.detuning = 0.0;
    const auto etas = linspace(cfg.strength_min, cfg.strength_max, cfg.strength_points);
    const auto bare =
        dynamics::gate_error_curve(base, etas, dynamics::Tuning::bare, pulse);
    const auto dyn =
        dynamics::gate_error_curve(base, etas, dynamics::Tuning::dynamical, pulse);
    const auto rep = dynamics::speed_bound(cfg.epsilon_t, cfg.speed_eta, cfg.speed_n,
                                           dynamics::fit_error_curve(bare),
                                           dynamics::fit_error_curve(dyn),
                                           cfg.strength_max);
    json j = io::to_json(rep);
    j["note"] = "speed bound better by 1/eta than sideband-limited (CZ-type) gates";
    emit_json(cfg, j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"avoided-crossing resonance scans for trapped-ion gate models"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string model_kind = "ss_gate";
    std::vector<double> window;
    std::vector<int> transition;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (overrides flags)");
        sub->add_option("--model", model_kind, "ss_gate | cz_gate");
        sub->add_option("--eta", cfg.model.eta, "Lamb-Dicke parameter");
        sub->add_option("--rabi", cfg.model.rabi, "Omega_R / omega_T");
        sub->add_option("--detuning", cfg.model.detuning, "Delta / omega_T");
        sub->add_option("--n-fock", cfg.model.n_fock, "Fock truncation");
        sub->add_option("--transition", transition, "vibrational pair na nb")->expected(2);
        sub->add_option("--window", window, "scan window lo hi")->expected(2);
        sub->add_option("--points", cfg.points, "scan grid points");
        sub->add_option("--pulse", cfg.pulse, "ld_pi | sideband_pi | effective_pi");
        sub->add_option("--csv", cfg.csv_path, "CSV output path");
        sub->add_option("--json", cfg.json_path, "JSON output path (default stdout)");
    };

    auto* scan = app.add_subcommand("scan-spectrum", "dressed-level scan and anti-crossing center");
    auto* find = app.add_subcommand("find-resonance", "closed-form and numeric shift reports");
    auto* flip = app.add_subcommand("flip-prob", "state-flip probability over the scan window");
    auto* gate = app.add_subcommand("gate-error", "gate-error curves for bare/structural/dynamical tuning");
    auto* speed = app.add_subcommand("speed-bound", "pi-pulse speed bound at an error threshold");
    for (auto* sub : {scan, find, flip, gate, speed}) add_common(sub);
    for (auto* sub : {gate, speed}) {
        sub->add_option("--strength-min", cfg.strength_min, "sweep start");
        sub->add_option("--strength-max", cfg.strength_max, "sweep end");
        sub->add_option("--strength-points", cfg.strength_points, "sweep points");
    }
    speed->add_option("--epsilon-t", cfg.epsilon_t, "error threshold in (0,1)");
    speed->add_option("--speed-eta", cfg.speed_eta, "eta for the Eq.-style rate report");
    speed->add_option("--n", cfg.speed_n, "vibrational number n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.model.kind = io::model_kind_from_string(model_kind);
        if (transition.size() == 2) cfg.model.transition = {transition[0], transition[1]};
        if (window.size() == 2) {
            cfg.window_lo = window[0];
            cfg.window_hi = window[1];
            cfg.window_set = true;
        }
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        cfg.model.validate();

        if (scan->parsed()) return cmd_scan_spectrum(cfg);
        if (find->parsed()) return cmd_find_resonance(cfg);
        if (flip->parsed()) return cmd_flip_prob(cfg);
        if (gate->parsed()) return cmd_gate_error(cfg);
        if (speed->parsed()) return cmd_speed_bound(cfg);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
