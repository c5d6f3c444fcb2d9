// End-to-end checks of the aclab binary: exit codes, config handling and
// byte-level determinism of the emitted files.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct RunResult {
    int exit_code;
    std::string stderr_text;
};

RunResult run_cli(const std::string& args, const std::string& tag,
                  const std::string& env_prefix = "") {
    const std::string err_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                                 "/aclab_cli_err_" + tag + ".txt";
    const std::string cmd =
        env_prefix + std::string(ACLAB_CLI_PATH) + " " + args + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err(err_path);
    std::ostringstream os;
    os << err.rdbuf();
    res.stderr_text = os.str();
    return res;
}

std::string tmp_path(const std::string& name) {
    return std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
}

} // namespace

TEST_CASE("scan-spectrum runs and is byte-deterministic") {
    const auto csv1 = tmp_path("scan1.csv"), csv2 = tmp_path("scan2.csv");
    const auto js1 = tmp_path("scan1.json"), js2 = tmp_path("scan2.json");
    const std::string base =
        "scan-spectrum --model ss_gate --eta 0.3 --n-fock 15 --window 0.85 1.15 --points 201";
    // identical runs, different worker counts: byte-identical output
    REQUIRE(run_cli(base + " --csv " + csv1 + " --json " + js1, "s1",
                    "AC_LAB_THREADS=1 ").exit_code == 0);
    REQUIRE(run_cli(base + " --csv " + csv2 + " --json " + js2, "s2",
                    "AC_LAB_THREADS=4 ").exit_code == 0);
    CHECK(slurp(csv1) == slurp(csv2));
    CHECK(slurp(js1) == slurp(js2));

    const auto summary = json::parse(slurp(js1));
    CHECK(summary.at("xi_S").get<double>() > 0.9);
    CHECK(summary.at("xi_S").get<double>() < 1.0);
    CHECK(summary.at("cross_check_ok").get<bool>());
}

TEST_CASE("scan-spectrum handles the CZ model and the V = 0 limit") {
    const auto js_cz = tmp_path("scan_cz.json");
    REQUIRE(run_cli("scan-spectrum --model cz_gate --eta 0.1 --rabi 0.3 --detuning 1.0 "
                    "--n-fock 20 --window 0.75 1.2 --points 201 --json " + js_cz,
                    "cz").exit_code == 0);
    const auto cz = json::parse(slurp(js_cz));
    CHECK(cz.at("xi_S").get<double>() == Catch::Approx(0.9546).margin(0.005));
    CHECK(cz.at("cross_check_ok").get<bool>());
    CHECK(cz.at("isolated").get<bool>());

    // laser off: bare levels cross at xi0 with zero gap
    const auto js_bare = tmp_path("scan_bare.json");
    REQUIRE(run_cli("scan-spectrum --model cz_gate --eta 0.1 --rabi 0.0 --detuning 1.0 "
                    "--n-fock 10 --window 0.8 1.2 --points 81 --json " + js_bare,
                    "v0").exit_code == 0);
    const auto bare = json::parse(slurp(js_bare));
    CHECK(bare.at("min_gap").get<double>() < 1e-7);
    CHECK(bare.at("xi_S").get<double>() == Catch::Approx(1.0).margin(1e-5));
}

TEST_CASE("find-resonance emits closed-form and numeric reports side by side") {
    const auto js = tmp_path("resonance.json");
    const auto res = run_cli("find-resonance --model ss_gate --eta 0.2 --n-fock 20 "
                             "--window 0.85 1.15 --points 101 --json " + js, "fr");
    REQUIRE(res.exit_code == 0);
    const auto report = json::parse(slurp(js));
    CHECK(report.contains("closed_form"));
    CHECK(report.contains("numeric"));
    CHECK(report.at("closed_form").at("xi_S").get<double>() == Catch::Approx(0.99));
    const double xi_d_num = report.at("numeric").at("xi_D").get<double>();
    CHECK(xi_d_num == Catch::Approx(1.03).margin(0.01));
    CHECK(report.at("dynamics_check").at("xi_D_flip").get<double>() ==
          Catch::Approx(xi_d_num).margin(0.01));
    // closed-form and numeric dynamical shifts agree within 15% at eta = 0.2
    const double dd_closed = report.at("closed_form").at("Delta_D").get<double>();
    const double dd_numeric = report.at("numeric").at("Delta_D").get<double>();
    CHECK(dd_numeric == Catch::Approx(dd_closed).epsilon(0.15));
}

TEST_CASE("find-resonance flags the vanishing CZ dynamical shift") {
    const auto js = tmp_path("resonance_cz.json");
    REQUIRE(run_cli("find-resonance --model cz_gate --eta 0.1 --rabi 0.3 --detuning 1.0 "
                    "--n-fock 20 --window 0.75 1.2 --points 201 --json " + js,
                    "frcz").exit_code == 0);
    const auto report = json::parse(slurp(js));
    CHECK(report.at("dynamical_shift_negligible").get<bool>());
    CHECK_FALSE(report.contains("closed_form")); // tabulated forms are SS-only
}

TEST_CASE("config file overrides flags") {
    const auto cfg = tmp_path("cfg.json");
    {
        std::ofstream out(cfg);
        out << R"({"model": {"kind": "ss_gate", "eta": 0.3, "n_fock": 15},
                   "window": [0.85, 1.15], "points": 31})";
    }
    const auto js_flag = tmp_path("cfg_flag.json");
    const auto js_conf = tmp_path("cfg_conf.json");
    REQUIRE(run_cli("scan-spectrum --model ss_gate --eta 0.3 --n-fock 15 "
                    "--window 0.85 1.15 --points 31 --json " + js_flag, "c1").exit_code == 0);
    // eta flag says 0.05 but the config overrides it back to 0.3
    REQUIRE(run_cli("scan-spectrum --eta 0.05 --config " + cfg + " --json " + js_conf,
                    "c2").exit_code == 0);
    CHECK(json::parse(slurp(js_flag)).at("xi_S") == json::parse(slurp(js_conf)).at("xi_S"));
}

TEST_CASE("config errors exit with code 2 and a precise message") {
    SECTION("malformed JSON reports line and column") {
        const auto cfg = tmp_path("broken.json");
        {
            std::ofstream out(cfg);
            out << "{\n  \"model\": {\n";
        }
        const auto res = run_cli("scan-spectrum --config " + cfg, "b1");
        CHECK(res.exit_code == 2);
        CHECK(res.stderr_text.find(cfg + ":") != std::string::npos);
    }
    SECTION("invalid model parameters") {
        const auto res = run_cli("scan-spectrum --model ss_gate --eta -0.5", "b2");
        CHECK(res.exit_code == 2);
        CHECK(res.stderr_text.find("config error") != std::string::npos);
    }
    SECTION("unknown flag") {
        CHECK(run_cli("scan-spectrum --frobnicate", "b3").exit_code == 2);
    }
}

TEST_CASE("numeric failures exit with code 3") {
    // window excludes the resonance: the gap has no interior minimum
    const auto res = run_cli("scan-spectrum --model ss_gate --eta 0.2 --n-fock 15 "
                             "--window 1.4 1.8 --points 31", "n1");
    CHECK(res.exit_code == 3);
    CHECK(res.stderr_text.find("numeric error") != std::string::npos);
}

TEST_CASE("flip-prob writes the scan CSV with the pulse rule") {
    const auto csv = tmp_path("flip.csv");
    const auto js = tmp_path("flip.json");
    REQUIRE(run_cli("flip-prob --model ss_gate --eta 0.3 --n-fock 15 "
                    "--window 0.9 1.25 --points 41 --pulse ld_pi --csv " + csv +
                    " --json " + js, "fp").exit_code == 0);
    const auto text = slurp(csv);
    CHECK(text.rfind("xi[omega_T],P,pulse_rule\n", 0) == 0);
    CHECK(text.find(",ld_pi\n") != std::string::npos);
    const auto summary = json::parse(slurp(js));
    CHECK(summary.at("p_max").get<double>() > 0.9);
}

TEST_CASE("gate-error emits curves and fits for all three tunings") {
    const auto csv = tmp_path("gate.csv");
    const auto js = tmp_path("gate.json");
    const auto res = run_cli("gate-error --model ss_gate --n-fock 15 "
                             "--strength-min 0.05 --strength-max 0.2 --strength-points 4 "
                             "--csv " + csv + " --json " + js, "ge");
    REQUIRE(res.exit_code == 0);
    const auto fits = json::parse(slurp(js));
    CHECK(fits.at("fits").contains("bare"));
    CHECK(fits.at("fits").contains("structural"));
    CHECK(fits.at("fits").contains("dynamical"));
    CHECK(fits.at("slope_ratio_bare_over_dynamical").get<double>() > 1.0);
    const auto text = slurp(csv);
    CHECK(text.find("bare") != std::string::npos);
    CHECK(text.find("dynamical") != std::string::npos);
}

TEST_CASE("speed-bound reports admissible rates") {
    const auto js = tmp_path("speed.json");
    const auto res = run_cli("speed-bound --model ss_gate --n-fock 15 "
                             "--epsilon-t 0.05 --speed-eta 0.1 --n 0 "
                             "--strength-min 0.05 --strength-max 0.3 --strength-points 6 "
                             "--json " + js, "sb");
    REQUIRE(res.exit_code == 0);
    const auto rep = json::parse(slurp(js));
    CHECK(rep.at("rate").get<double>() == Catch::Approx(0.1 / M_PI));
    CHECK(rep.at("rate_ratio_dynamical_over_bare").get<double>() > 1.5);
    CHECK(rep.at("ss_over_cz_rate_ratio").get<double>() == Catch::Approx(10.0));
}
