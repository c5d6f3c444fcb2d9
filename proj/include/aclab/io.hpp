// io.hpp — JSON configs and reports, CSV curve exports. All numeric output
// goes through a fixed 12-significant-digit formatter so identical runs
// produce identical bytes.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "aclab/dynamics.hpp"

namespace aclab::io {

using nlohmann::json;

inline std::string format_sig(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// ---- ModelSpec <-> JSON -------------------------------------------------

inline models::ModelKind model_kind_from_string(const std::string& s) {
    if (s == "generic") return models::ModelKind::generic;
    if (s == "ss_gate" || s == "ss") return models::ModelKind::ss_gate;
    if (s == "cz_gate" || s == "cz") return models::ModelKind::cz_gate;
    throw ConfigError("unknown model kind '" + s + "' (expected ss_gate, cz_gate or generic)");
}

inline json to_json(const models::ModelSpec& spec) {
    return json{{"kind", models::to_string(spec.kind)},
                {"eta", spec.eta},
                {"rabi", spec.rabi},
                {"detuning", spec.detuning},
                {"n_fock", spec.n_fock},
                {"transition", {spec.transition[0], spec.transition[1]}}};
}

inline models::ModelSpec model_spec_from_json(const json& j) {
    models::ModelSpec spec;
    try {
        spec.kind = model_kind_from_string(j.at("kind").get<std::string>());
        spec.eta = j.at("eta").get<double>();
        if (j.contains("rabi")) spec.rabi = j.at("rabi").get<double>();
        if (j.contains("detuning")) spec.detuning = j.at("detuning").get<double>();
        if (j.contains("n_fock")) spec.n_fock = j.at("n_fock").get<int>();
        if (j.contains("transition")) {
            const auto& t = j.at("transition");
            if (!t.is_array() || t.size() != 2)
                throw ConfigError("model.transition must be a [na, nb] pair");
            spec.transition = {t[0].get<int>(), t[1].get<int>()};
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid model config: ") + e.what());
    }
    spec.validate();
    return spec;
}

// ---- matrix dump (debugging / golden tests) ------------------------------

inline json matrix_dump(const HermitianOperator& op) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < op.dim(); ++i)
        for (Eigen::Index j = 0; j < op.dim(); ++j)
            entries.push_back({op.entries(i, j).real(), op.entries(i, j).imag()});
    return json{{"dim", op.dim()}, {"n_fock", op.n_fock}, {"entries", entries}};
}

inline HermitianOperator matrix_from_dump(const json& j) {
    const Eigen::Index dim = j.at("dim").get<Eigen::Index>();
    const auto& entries = j.at("entries");
    if (Eigen::Index(entries.size()) != dim * dim)
        throw ConfigError("matrix dump: entry count does not match dim^2");
    Eigen::MatrixXcd m(dim, dim);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index jj = 0; jj < dim; ++jj, ++k)
            m(i, jj) = {entries[k][0].get<double>(), entries[k][1].get<double>()};
    return HermitianOperator(std::move(m), j.at("n_fock").get<int>());
}

// ---- reports -------------------------------------------------------------

inline json to_json(const effective::ShiftReport& rep) {
    json j{{"method", effective::to_string(rep.method)},
           {"units", "omega_T"},
           {"eta", rep.eta},
           {"n", rep.n},
           {"sideband", rep.sideband},
           {"xi_0", rep.xi_0},
           {"xi_S", rep.xi_s},
           {"xi_D", rep.xi_d},
           {"Delta_S", rep.delta_s},
           {"Delta_D", rep.delta_d},
           {"tolerance", rep.tolerance},
           {"notes", rep.notes}};
    if (std::isfinite(rep.min_gap)) j["min_gap"] = rep.min_gap;
    return j;
}

inline json to_json(const dynamics::SpeedBoundReport& rep) {
    return json{{"units", "omega_T"},
                {"epsilon_t", rep.epsilon_t},
                {"eta", rep.eta},
                {"n", rep.n},
                {"rabi", rep.rabi},
                {"T_pi", rep.t_pi},
                {"rate", rep.rate},
                {"admissible_eta_bare", rep.admissible_eta_bare},
                {"admissible_eta_dynamical", rep.admissible_eta_dynamical},
                {"admissible_rate_bare", rep.admissible_rate_bare},
                {"admissible_rate_dynamical", rep.admissible_rate_dynamical},
                {"rate_ratio_dynamical_over_bare", rep.rate_ratio},
                {"ss_over_cz_rate_ratio", rep.ss_over_cz_rate_ratio}};
}

// ---- CSV exports ----------------------------------------------------------

inline void write_level_track_csv(std::ostream& os, const spectra::LevelTrack& track) {
    os << "xi[omega_T],E_plus[omega_T],E_minus[omega_T],gap[omega_T],p_a_plus,p_a_minus\n";
    for (std::size_t i = 0; i < track.size(); ++i)
        os << format_sig(track.xi[i]) << ',' << format_sig(track.e_plus[i]) << ','
           << format_sig(track.e_minus[i]) << ',' << format_sig(track.gap[i]) << ','
           << format_sig(track.p_a_plus[i]) << ',' << format_sig(track.p_a_minus[i])
           << '\n';
}

inline void write_error_curve_csv(std::ostream& os,
                                  const std::vector<dynamics::GateErrorCurve>& curves) {
    if (curves.empty()) return;
    os << curves.front().strength_name << ",error,tuning\n";
    for (const auto& c : curves)
        for (std::size_t i = 0; i < c.strength.size(); ++i)
            os << format_sig(c.strength[i]) << ',' << format_sig(c.error[i]) << ','
               << dynamics::to_string(c.tuning) << '\n';
}

inline void write_flip_scan_csv(std::ostream& os, const std::vector<double>& xi,
                                const std::vector<double>& prob,
                                const std::string& pulse_rule) {
    os << "xi[omega_T],P,pulse_rule\n";
    for (std::size_t i = 0; i < xi.size(); ++i)
        os << format_sig(xi[i]) << ',' << format_sig(prob[i]) << ',' << pulse_rule
           << '\n';
}

} // namespace aclab::io
