#include <catch2/catch_amalgamated.hpp>

#include "aclab/spectra.hpp"

using namespace aclab;
using Catch::Approx;

namespace {

// Literal two-level family: h0 = diag(-d(xi), +d(xi)) with d = (xi - xi0)/2,
// V = [[vb, r],[r*, va]] in the (lower=b, upper=a) layout. The whole Hilbert
// space is the resonant pair, so the effective model is exact.
models::ScanModel two_level_model(double xi0,
                                  std::function<std::complex<double>(double)> r_of_xi,
                                  double va = 0.0, double vb = 0.0) {
    auto builder = [=](double xi) {
        Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(2, 2);
        h0(0, 0) = -(xi - xi0) / 2.0; // |b> = lower
        h0(1, 1) = (xi - xi0) / 2.0;  // |a> = upper
        Eigen::MatrixXcd v(2, 2);
        const std::complex<double> r = r_of_xi(xi);
        v << vb, std::conj(r), r, va;
        models::Partition part;
        part.h0 = HermitianOperator(h0, 1);
        part.v = HermitianOperator(v, 1);
        part.p_states = {BasisIndex{Spin::upper, 0}, BasisIndex{Spin::lower, 0}};
        return part;
    };
    return models::ScanModel(builder, xi0, 0.0, 0.0, [](double) { return 1.0; },
                             {0, 0}, "xi");
}

models::ScanModel ss_model(double eta, int n_fock = 25) {
    models::ModelSpec spec;
    spec.kind = models::ModelKind::ss_gate;
    spec.eta = eta;
    spec.n_fock = n_fock;
    return models::make_scan_model(spec);
}

} // namespace

TEST_CASE("scan of the unperturbed model gives straight crossing lines") {
    auto model = two_level_model(1.0, [](double) { return 0.0; });
    const auto track = spectra::scan_levels(model, 0.6, 1.4, 81);
    // tracked curves are the two straight bare lines
    for (std::size_t i = 0; i < track.size(); ++i) {
        CHECK(track.track_a_energy[i] == Approx((track.xi[i] - 1.0) / 2).margin(1e-12));
        CHECK(track.track_b_energy[i] == Approx(-(track.xi[i] - 1.0) / 2).margin(1e-12));
    }
    const auto res = spectra::find_structural_resonance(model, track, 1e-10);
    CHECK(res.min_gap == Approx(0.0).margin(1e-9));
    CHECK(res.xi_s == Approx(1.0).margin(1e-6));
}

TEST_CASE("constant coupling keeps the anti-crossing centered at xi0") {
    auto model = two_level_model(2.0, [](double) { return std::complex<double>(0.0, 0.08); });
    const auto track = spectra::scan_levels(model, 1.6, 2.4, 101);
    const auto res = spectra::find_structural_resonance(model, track);
    CHECK(res.xi_s == Approx(2.0).margin(1e-7));
    CHECK(res.min_gap == Approx(0.16).epsilon(1e-9));
    CHECK(res.cross_check_ok);
    CHECK(res.isolated);
    // minimal-gap property on the grid
    for (double g : track.gap) CHECK(res.min_gap <= g + 1e-12);
}

TEST_CASE("xi-dependent coupling shifts the gap minimum off xi0 (Eq.-8 balance)") {
    const double xi0 = 1.0, c0 = 0.01, c1 = 0.002;
    auto r_fn = [=](double xi) {
        return std::complex<double>(std::sqrt(c0 + c1 * (xi - xi0)), 0.0);
    };
    auto model = two_level_model(xi0, r_fn);
    const auto track = spectra::scan_levels(model, 0.7, 1.3, 201);
    const auto res = spectra::find_structural_resonance(model, track);
    // analytic minimum of delta^2 + |r|^2 sits at xi0 - 2 c1
    CHECK(res.xi_s == Approx(xi0 - 2 * c1).margin(1e-7));
    // Eq.-8 residual at the found point: 2 delta delta' + d|r|^2/dxi
    const double delta = (xi0 - res.xi_s) / 2.0;
    const double residual = 2.0 * delta * (-0.5) + c1;
    CHECK(std::abs(residual) < 1e-6);
}

TEST_CASE("diagonal-only shifts leave the crossing permitted") {
    // r_ab == 0 but r_aa, r_bb != 0: levels shift, do not repel
    auto model = two_level_model(1.0, [](double) { return 0.0; }, 0.03, -0.02);
    const auto track = spectra::scan_levels(model, 0.7, 1.3, 101);
    const auto res = spectra::find_structural_resonance(model, track, 1e-10);
    CHECK(res.min_gap <= 1e-9);
    // shifted crossing: delta = 0 at xi = xi0 + vb - va
    CHECK(res.xi_s == Approx(1.0 - 0.05).margin(1e-6));
}

TEST_CASE("SS-gate scan reproduces the shifted anti-crossing") {
    auto model = ss_model(0.3);
    const auto track = spectra::scan_levels(model, 0.8, 1.2, 201);
    const auto res = spectra::find_structural_resonance(model, track);

    CHECK(res.min_gap > 0.1); // avoided, not permitted
    // closed form xi_S = 1 - eta^2/4, accurate to O(eta^4)
    CHECK(std::abs(res.xi_s - 0.9775) < 2.0 * std::pow(0.3, 4));
    CHECK(res.cross_check_ok);
    CHECK(res.isolated);
    CHECK(track.min_track_continuity > 0.5);

    SECTION("structural-shift coefficient from an eta sweep") {
        std::vector<double> eta2, shift;
        for (double eta : {0.05, 0.1, 0.2}) {
            auto m = ss_model(eta);
            const auto t = spectra::scan_levels(m, 0.85, 1.1, 201);
            const auto r = spectra::find_structural_resonance(m, t);
            eta2.push_back(eta * eta);
            shift.push_back(r.xi_s - 1.0);
        }
        const auto fit = detail::linear_fit(eta2, shift);
        CHECK(fit.slope == Approx(-0.25).epsilon(0.15));
    }
}

TEST_CASE("character profile") {
    SECTION("all projections are 1/2 at the effective resonance") {
        auto model = two_level_model(1.0, [](double) { return std::complex<double>(0.05, 0.0); });
        const auto track = spectra::scan_levels(model, 0.8, 1.2, 101);
        const auto prof = spectra::character_profile(model, track);
        REQUIRE(prof.crossing_found);
        CHECK(prof.xi_char == Approx(1.0).margin(1e-7));
        const auto pair = spectra::dressed_pair_at(model, prof.xi_char);
        CHECK(std::norm(pair.v_plus(0)) == Approx(0.5).margin(1e-7));
        CHECK(std::norm(pair.v_plus(1)) == Approx(0.5).margin(1e-7));
        CHECK(std::norm(pair.v_minus(0)) == Approx(0.5).margin(1e-7));
        CHECK(std::norm(pair.v_minus(1)) == Approx(0.5).margin(1e-7));
    }
    SECTION("effective-model character symmetry p_a+ = p_b-") {
        auto model = two_level_model(1.0, [](double xi) {
            return std::complex<double>(0.04, 0.03 * (xi - 1.0));
        });
        const auto track = spectra::scan_levels(model, 0.8, 1.2, 51);
        for (std::size_t i = 0; i < track.size(); ++i) {
            CHECK(std::abs(track.p_a_plus[i] - track.p_b_minus[i]) < 1e-12);
            CHECK(std::abs(track.p_a_minus[i] - track.p_b_plus[i]) < 1e-12);
        }
    }
    SECTION("bare-state dominance far from the crossing") {
        auto model = ss_model(0.3);
        const auto track = spectra::scan_levels(model, 0.8, 1.2, 201);
        const double p_edge = std::max(track.p_a_plus.front(), track.p_a_minus.front());
        CHECK(p_edge > 1.0 - 2.0 * 0.3 * 0.3); // up to O(eta^2) leakage
        const auto prof = spectra::character_profile(model, track);
        REQUIRE(prof.crossing_found);
        // the character change sits on the dynamical-resonance side of xi_S
        CHECK(prof.xi_char > 1.0);
        CHECK(prof.xi_char == Approx(1.0675).margin(0.02));
    }
}

TEST_CASE("third-level intrusion is flagged") {
    // c level sweeps through the crossing energy and couples strongly to a
    auto builder = [](double xi) {
        Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(4, 4);
        h0(0, 0) = -(xi - 1.0) / 2.0;
        h0(1, 1) = (xi - 1.0) / 2.0;
        h0(2, 2) = 0.4 * (xi - 1.0); // intruder crossing E = 0 at xi = 1
        h0(3, 3) = 5.0;
        Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 4);
        v(0, 1) = v(1, 0) = 0.01;
        v(1, 2) = v(2, 1) = 0.2; // strong a-c mixing
        models::Partition part;
        part.h0 = HermitianOperator(h0, 2);
        part.v = HermitianOperator(v, 2);
        part.p_states = {BasisIndex{Spin::upper, 0}, BasisIndex{Spin::lower, 0}};
        return part;
    };
    models::ScanModel model(builder, 1.0, 0.0, 0.0, [](double) { return 1.0; }, {0, 0});
    const auto track = spectra::scan_levels(model, 0.8, 1.2, 101);
    CHECK(track.max_intrusion() > spectra::kIntrusionThreshold);
    CHECK_FALSE(track.isolated());
}

TEST_CASE("window without an interior minimum is rejected") {
    auto model = two_level_model(1.0, [](double) { return std::complex<double>(0.05, 0.0); });
    const auto track = spectra::scan_levels(model, 1.2, 1.6, 51); // minimum left of window
    CHECK_THROWS_AS(spectra::find_structural_resonance(model, track), NumericError);
    CHECK_THROWS_AS(spectra::scan_levels(model, 1.0, 1.2, 2), ConfigError);
}
