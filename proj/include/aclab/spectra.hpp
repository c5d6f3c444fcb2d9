// spectra.hpp — Dressed-spectrum scans: locating the anti-crossing center
// (minimal splitting / zero level slope) and tracking dressed-state character.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "aclab/detail/scan.hpp"
#include "aclab/models.hpp"

namespace aclab::spectra {

// Default probability threshold above which a third level is considered to
// intrude on the resonant pair (the crossing is then not well isolated).
inline constexpr double kIntrusionThreshold = 0.1;

// The two dressed levels carrying the most weight on the resonant pair at a
// single xi, energy ordered, plus the largest pair-weight of any other level.
struct DressedPair {
    double e_minus = 0.0;
    double e_plus = 0.0;
    Eigen::VectorXcd v_minus;
    Eigen::VectorXcd v_plus;
    double third_overlap = 0.0;
};

inline DressedPair dressed_pair_at(const models::ScanModel& model, double xi) {
    const auto part = model.at(xi);
    const auto eig = diagonalize(HermitianOperator(part.full(), part.h0.n_fock));
    const auto p = part.p_flat();
    const Eigen::Index dim = eig.eigenvalues.size();

    int best = -1, second = -1, third = -1;
    auto weight = [&](Eigen::Index k) {
        return std::norm(eig.eigenvectors(p[0], k)) + std::norm(eig.eigenvectors(p[1], k));
    };
    double w_best = -1.0, w_second = -1.0, w_third = -1.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double w = weight(k);
        if (w > w_best) {
            w_third = w_second; third = second;
            w_second = w_best; second = best;
            w_best = w; best = int(k);
        } else if (w > w_second) {
            w_third = w_second; third = second;
            w_second = w; second = int(k);
        } else if (w > w_third) {
            w_third = w; third = int(k);
        }
    }
    (void)third;
    DressedPair pair;
    const int lo = eig.eigenvalues(best) <= eig.eigenvalues(second) ? best : second;
    const int hi = (lo == best) ? second : best;
    pair.e_minus = eig.eigenvalues(lo);
    pair.e_plus = eig.eigenvalues(hi);
    pair.v_minus = eig.eigenvectors.col(lo);
    pair.v_plus = eig.eigenvectors.col(hi);
    pair.third_overlap = std::max(w_third, 0.0);
    return pair;
}

inline double gap_at(const models::ScanModel& model, double xi) {
    const auto pair = dressed_pair_at(model, xi);
    return pair.e_plus - pair.e_minus;
}

// Dressed-level curves over a xi grid. Track identity follows maximal
// eigenvector overlap with the previous grid point (not energy ordering), so
// each tracked curve is smooth even through a permitted crossing; the energy
// ordered e_plus/e_minus columns and the pair projections are derived per point.
struct LevelTrack {
    std::vector<double> xi;
    std::vector<double> track_a_energy; // starts on the |a>-dominant curve
    std::vector<double> track_b_energy;
    std::vector<double> e_plus;         // max(track energies)
    std::vector<double> e_minus;
    std::vector<double> gap;
    std::vector<double> p_a_plus, p_a_minus; // |<a|eps_+->|^2
    std::vector<double> p_b_plus, p_b_minus;
    std::vector<double> third_overlap;
    double min_track_continuity = 1.0;  // smallest successive |<v_i|v_{i-1}>|^2

    std::size_t size() const { return xi.size(); }
    double grid_spacing() const {
        return size() > 1 ? (xi.back() - xi.front()) / double(size() - 1) : 0.0;
    }
    double max_intrusion() const {
        double m = 0.0;
        for (double w : third_overlap) m = std::max(m, w);
        return m;
    }
    bool isolated(double threshold = kIntrusionThreshold) const {
        return max_intrusion() <= threshold;
    }
};

inline LevelTrack scan_levels(const models::ScanModel& model, double xi_lo,
                              double xi_hi, int points = 201) {
    if (points < 3) throw ConfigError("scan_levels: need at least 3 grid points");
    if (!(xi_hi > xi_lo)) throw ConfigError("scan_levels: empty window");

    std::vector<DressedPair> pairs(points);
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = xi_lo + (xi_hi - xi_lo) * double(i) / double(points - 1);
    detail::parallel_for(points, [&](std::size_t i) {
        pairs[i] = dressed_pair_at(model, grid[i]);
    });

    const auto p = model.at(grid[0]).p_flat();
    LevelTrack track;
    track.xi = grid;
    track.xi.shrink_to_fit();

    // start track a on the curve dominated by |a>
    bool a_is_plus = std::norm(pairs[0].v_plus(p[0])) >= std::norm(pairs[0].v_minus(p[0]));
    Eigen::VectorXcd prev_a = a_is_plus ? pairs[0].v_plus : pairs[0].v_minus;
    Eigen::VectorXcd prev_b = a_is_plus ? pairs[0].v_minus : pairs[0].v_plus;

    for (int i = 0; i < points; ++i) {
        const auto& pr = pairs[i];
        if (i > 0) {
            // continuity: keep each track on the eigenvector it overlaps most
            const double keep = std::norm(prev_a.dot(a_is_plus ? pr.v_plus : pr.v_minus));
            const double swap = std::norm(prev_a.dot(a_is_plus ? pr.v_minus : pr.v_plus));
            if (swap > keep) a_is_plus = !a_is_plus;
            const Eigen::VectorXcd& va = a_is_plus ? pr.v_plus : pr.v_minus;
            const Eigen::VectorXcd& vb = a_is_plus ? pr.v_minus : pr.v_plus;
            track.min_track_continuity =
                std::min({track.min_track_continuity, std::norm(prev_a.dot(va)),
                          std::norm(prev_b.dot(vb))});
            prev_a = va;
            prev_b = vb;
        }
        track.track_a_energy.push_back(a_is_plus ? pr.e_plus : pr.e_minus);
        track.track_b_energy.push_back(a_is_plus ? pr.e_minus : pr.e_plus);
        track.e_plus.push_back(pr.e_plus);
        track.e_minus.push_back(pr.e_minus);
        track.gap.push_back(pr.e_plus - pr.e_minus);
        track.p_a_plus.push_back(std::norm(pr.v_plus(p[0])));
        track.p_a_minus.push_back(std::norm(pr.v_minus(p[0])));
        track.p_b_plus.push_back(std::norm(pr.v_plus(p[1])));
        track.p_b_minus.push_back(std::norm(pr.v_minus(p[1])));
        track.third_overlap.push_back(pr.third_overlap);
    }
    return track;
}

struct StructuralResonance {
    double xi_s = 0.0;        // gap minimum
    double min_gap = 0.0;
    double xi_s_slope = 0.0;  // zero of the finite-difference level slope
    bool cross_check_ok = false;
    bool isolated = true;
    double tolerance = 0.0;           // absolute refinement tolerance used
    double agreement_tolerance = 0.0; // bound applied to the cross-check
};

// Gap minimum by coarse grid + golden section, cross-checked against the zero
// crossing of the finite-difference slope of the dressed levels. The slope
// root carries an O(h^2) centering bias from the grid-spacing FD step, so the
// agreement bound is max(10x refinement tolerance, h^2); disagreement beyond
// that signals a crossing that is not well isolated.
inline StructuralResonance find_structural_resonance(const models::ScanModel& model,
                                                     const LevelTrack& track,
                                                     double reltol = 1e-8) {
    const std::size_t n = track.size();
    if (n < 3) throw ConfigError("find_structural_resonance: track too short");

    std::size_t imin = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (track.gap[i] < track.gap[imin]) imin = i;
    if (imin == 0 || imin + 1 == n)
        throw NumericError("find_structural_resonance: no interior gap minimum in window");

    StructuralResonance res;
    res.isolated = track.isolated();
    res.tolerance = detail::absolute_tol(track.xi.front(), track.xi.back(), reltol);

    auto gap_fn = [&](double xi) { return gap_at(model, xi); };
    res.xi_s = detail::golden_section_min(gap_fn, track.xi[imin - 1], track.xi[imin + 1], reltol);
    res.min_gap = gap_fn(res.xi_s);

    // slope cross-check with central differences at the coarse grid spacing
    const double h = track.grid_spacing();
    res.agreement_tolerance = std::max(10.0 * res.tolerance, h * h);
    auto fd_slope = [&](double xi) { return (gap_fn(xi + h) - gap_fn(xi - h)) / (2.0 * h); };
    try {
        res.xi_s_slope =
            detail::bisect_root(fd_slope, track.xi[imin - 1], track.xi[imin + 1], reltol);
        res.cross_check_ok =
            std::abs(res.xi_s_slope - res.xi_s) <= res.agreement_tolerance;
    } catch (const NumericError&) {
        res.xi_s_slope = std::numeric_limits<double>::quiet_NaN();
        res.cross_check_ok = false;
    }
    return res;
}

struct CharacterProfile {
    std::vector<double> xi;
    std::vector<double> p_a_plus, p_a_minus, p_b_plus, p_b_minus;
    double xi_char = std::numeric_limits<double>::quiet_NaN();
    bool crossing_found = false;
};

// Per-xi projections of the bare pair onto the dressed pair, and the location
// where p_{a+} = p_{a-} (the character change of the dressed levels).
inline CharacterProfile character_profile(const models::ScanModel& model,
                                          const LevelTrack& track,
                                          double reltol = 1e-8) {
    CharacterProfile prof;
    prof.xi = track.xi;
    prof.p_a_plus = track.p_a_plus;
    prof.p_a_minus = track.p_a_minus;
    prof.p_b_plus = track.p_b_plus;
    prof.p_b_minus = track.p_b_minus;

    const auto p = model.at(track.xi.front()).p_flat();
    auto diff = [&](double xi) {
        const auto pair = dressed_pair_at(model, xi);
        return std::norm(pair.v_plus(p[0])) - std::norm(pair.v_minus(p[0]));
    };
    for (std::size_t i = 1; i < track.size(); ++i) {
        const double d0 = track.p_a_plus[i - 1] - track.p_a_minus[i - 1];
        const double d1 = track.p_a_plus[i] - track.p_a_minus[i];
        if (d0 == 0.0 || (d0 > 0) != (d1 > 0)) {
            prof.xi_char = detail::bisect_root(diff, track.xi[i - 1], track.xi[i], reltol);
            prof.crossing_found = true;
            break;
        }
    }
    return prof;
}

} // namespace aclab::spectra
