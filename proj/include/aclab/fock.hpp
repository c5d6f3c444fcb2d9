// fock.hpp — Truncated Fock-space operators, sideband coupling strengths,
// and the Hermitian eigendecomposition contract used everywhere else.
//
// Units: hbar = 1 and omega_T = 1; every energy below is a dimensionless
// multiple of the trap frequency.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "aclab/errors.hpp"

namespace aclab {

// Two-level label per model: upper = |e>, |+> or |a>; lower = |g>, |-> or |b>.
enum class Spin { lower = 0, upper = 1 };

// Composite basis label (spin, vibrational number n). The flat matrix index
// is 2n + s with s = 0 for lower and 1 for upper, a bijection onto
// [0, 2*n_fock) for n < n_fock.
struct BasisIndex {
    Spin spin = Spin::lower;
    int n = 0;
};

inline int flat_index(BasisIndex b) { return 2 * b.n + static_cast<int>(b.spin); }

inline BasisIndex basis_from_flat(int flat) {
    return BasisIndex{static_cast<Spin>(flat % 2), flat / 2};
}

inline double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Dense Hermitian operator on the truncated space, together with the Fock
// truncation it was built at. Construction enforces the 1e-12 absolute
// Hermiticity bound.
struct HermitianOperator {
    Eigen::MatrixXcd entries;
    int n_fock = 0;

    HermitianOperator() = default;
    HermitianOperator(Eigen::MatrixXcd m, int n_fock_, double tol = 1e-12)
        : entries(std::move(m)), n_fock(n_fock_) {
        const double defect = hermiticity_defect(entries);
        if (defect > tol) {
            std::ostringstream msg;
            msg << "HermitianOperator: symmetry violation, max |H - H^dag| = "
                << defect << " exceeds " << tol;
            throw ConfigError(msg.str());
        }
        // exact symmetrization so downstream solvers see H == H^dag
        entries = 0.5 * (entries + entries.adjoint()).eval();
    }

    Eigen::Index dim() const { return entries.rows(); }
};

struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // orthonormal columns, same order
};

// Annihilation/creation pair on the bare oscillator subspace,
// a|n> = sqrt(n)|n-1>, truncated at n_fock levels.
struct LadderOperators {
    Eigen::MatrixXd a;
    Eigen::MatrixXd adag;
};

inline LadderOperators build_ladder_operators(int n_fock) {
    if (n_fock < 2)
        throw ConfigError("build_ladder_operators: n_fock must be >= 2");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_fock, n_fock);
    for (int n = 1; n < n_fock; ++n)
        a(n - 1, n) = std::sqrt(double(n));
    return {a, a.transpose()};
}

// Sideband coupling strength Omega_{n,n'} = <n| exp(i eta (a + a^dag)) |n'>,
// dimensionless (per unit Omega_R). c()/s() are the cos/sin quadrature parts.
struct CouplingStrength {
    std::complex<double> value;
    double c() const { return value.real(); }
    double s() const { return value.imag(); }
};

namespace detail {

// Associated Laguerre L_k^alpha(x) by the stable three-term recurrence.
inline double assoc_laguerre(int k, int alpha, double x) {
    if (k == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + double(alpha) - x;
    for (int i = 1; i < k; ++i) {
        const double lp1 =
            ((2.0 * i + 1.0 + alpha - x) * l - (double(i) + alpha) * lm1) / (i + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

} // namespace detail

// Closed form: Omega_{n,n'} = e^{-eta^2/2} (i eta)^{|dn|} sqrt(n_<! / n_>!)
//              * L^{|dn|}_{n_<}(eta^2),
// with the factorial ratio evaluated in log space to stay finite at large n.
inline CouplingStrength coupling_strength(double eta, int n, int n_prime) {
    if (eta < 0.0 || n < 0 || n_prime < 0)
        throw ConfigError("coupling_strength: requires eta >= 0 and n, n' >= 0");
    if (eta == 0.0)
        return {n == n_prime ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 0.0)};
    const int lo = std::min(n, n_prime);
    const int hi = std::max(n, n_prime);
    const int dn = hi - lo;
    const double x = eta * eta;
    const double log_pref = -0.5 * x + dn * std::log(eta)
                          + 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0));
    const double magnitude = std::exp(log_pref) * detail::assoc_laguerre(lo, dn, x);
    // (i)^dn cycles 1, i, -1, -i
    static const std::complex<double> phase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return {magnitude * phase[dn % 4]};
}

// Full coupling matrix with the closed-form elements; this is the truncated
// representation of exp(i eta (a + a^dag)) used by the model builders.
inline Eigen::MatrixXcd coupling_matrix(double eta, int n_fock) {
    Eigen::MatrixXcd u(n_fock, n_fock);
    for (int i = 0; i < n_fock; ++i)
        for (int j = 0; j < n_fock; ++j)
            u(i, j) = coupling_strength(eta, i, j).value;
    return u;
}

inline EigenDecomposition diagonalize(const HermitianOperator& h) {
    const double defect = hermiticity_defect(h.entries);
    if (defect > 1e-12) {
        std::ostringstream msg;
        msg << "diagonalize: symmetry violation, max |H - H^dag| = " << defect;
        throw ConfigError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.entries);
    if (solver.info() != Eigen::Success)
        throw NumericError("diagonalize: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Brute-force oracle for coupling_strength: exponentiate the truncated
// quadrature a + a^dag through its eigendecomposition. Unitary up to
// truncation error; callers pick n_fock large enough that the states they
// read are negligibly coupled to the edge.
inline Eigen::MatrixXcd matrix_exponential_quadrature(double eta, int n_fock) {
    const auto ops = build_ladder_operators(n_fock);
    const Eigen::MatrixXd x = ops.a + ops.adag;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x);
    if (solver.info() != Eigen::Success)
        throw NumericError("matrix_exponential_quadrature: eigensolver failed");
    const Eigen::VectorXd w = solver.eigenvalues();
    const Eigen::MatrixXd v = solver.eigenvectors();
    Eigen::VectorXcd ph(n_fock);
    for (int k = 0; k < n_fock; ++k)
        ph(k) = std::exp(std::complex<double>(0.0, eta * w(k)));
    return v * ph.asDiagonal() * v.transpose();
}

struct ConvergenceReport {
    double max_shift = 0.0;
    bool converged = false;
    int n_fock = 0;
    int n_fock_doubled = 0;
};

// Doubles the truncation and compares the lowest tracked eigenvalues.
// Levels well below the truncation edge must be stable to `tol`.
inline ConvergenceReport check_truncation_convergence(
    const std::function<HermitianOperator(int)>& builder,
    int n_fock, int tracked_levels, double tol = 1e-8) {
    const auto base = diagonalize(builder(n_fock));
    const auto fine = diagonalize(builder(2 * n_fock));
    ConvergenceReport report;
    report.n_fock = n_fock;
    report.n_fock_doubled = 2 * n_fock;
    for (int k = 0; k < tracked_levels; ++k)
        report.max_shift =
            std::max(report.max_shift, std::abs(base.eigenvalues(k) - fine.eigenvalues(k)));
    report.converged = report.max_shift <= tol;
    return report;
}

} // namespace aclab
