// models.hpp — Concrete trapped-ion Hamiltonians, their H0 + V partitions,
// and the scan-parameter family each one exposes.
//
// Conventions (flat index 2n + s, s = 0 lower / 1 upper):
//   ion basis   : lower = |g>, upper = |e>;  H = wT n - (Delta/2) sz + drive
//   SS (tilde)  : lower = |->, upper = |+>;  H0 = wT n + (Omega_R/2) sz~
//   generic     : lower = |b>, upper = |a>;  H0 = w n + (xi/2) sz
// The resonant pair is ordered as {a, b}: a = |+, n> (SS), |g, n> (CZ).

#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "aclab/fock.hpp"

namespace aclab::models {

enum class ModelKind { generic, ss_gate, cz_gate };

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::generic: return "generic";
        case ModelKind::ss_gate: return "ss_gate";
        case ModelKind::cz_gate: return "cz_gate";
    }
    return "unknown";
}

// Rabi-resonance intensity where the dressed splitting matches k vibrational
// quanta; used to center scan windows.
inline double rabi_resonance(int k, double omega_t = 1.0) { return k * omega_t; }

struct ModelSpec {
    ModelKind kind = ModelKind::ss_gate;
    double eta = 0.1;             // Lamb-Dicke parameter
    double rabi = 1.0;            // Omega_R / omega_T
    double detuning = 0.0;        // Delta / omega_T (0 for the SS gate)
    int n_fock = 25;
    std::array<int, 2> transition{0, 1}; // vibrational numbers (n_a, n_b)
    double omega_t = 1.0;         // fixed internal unit

    void validate() const {
        if (eta < 0.0) throw ConfigError("ModelSpec: eta must be >= 0");
        if (n_fock < 2) throw ConfigError("ModelSpec: n_fock must be >= 2");
        if (kind == ModelKind::ss_gate && detuning != 0.0)
            throw ConfigError("ModelSpec: the SS gate requires Delta = 0");
        if (transition[0] < 0 || transition[1] < 0 ||
            transition[0] >= n_fock || transition[1] >= n_fock)
            throw ConfigError("ModelSpec: transition levels outside the truncation");
        if (transition[0] == transition[1] && kind != ModelKind::generic)
            throw ConfigError("ModelSpec: transition levels must differ");
    }

    // Bare crossing of the resonant pair in the scan parameter.
    double xi0() const { return (transition[1] - transition[0]) * omega_t; }
    // Energy of the bare crossing.
    double bare_crossing_energy() const {
        return 0.5 * (transition[0] + transition[1]) * omega_t;
    }
    // Which physical parameter plays the role of xi.
    std::string xi_name() const {
        switch (kind) {
            case ModelKind::ss_gate: return "rabi";
            case ModelKind::cz_gate: return "detuning";
            default: return "xi";
        }
    }
};

// H0 + V split with the two resonant states. p_states[0] plays the role of
// |a> and p_states[1] of |b> in the effective two-level formalism.
struct Partition {
    HermitianOperator h0;
    HermitianOperator v;
    std::array<BasisIndex, 2> p_states;

    Eigen::MatrixXcd full() const { return h0.entries + v.entries; }
    std::array<int, 2> p_flat() const {
        return {flat_index(p_states[0]), flat_index(p_states[1])};
    }
    double bare_energy(int which) const {
        const int i = p_flat()[which];
        return h0.entries(i, i).real();
    }
};

namespace detail {

inline Eigen::MatrixXd number_operator(int n_fock) {
    Eigen::VectorXd diag(n_fock);
    for (int n = 0; n < n_fock; ++n) diag(n) = double(n);
    return diag.asDiagonal();
}

inline Eigen::Matrix2d sigma_z() {
    Eigen::Matrix2d m;
    m << -1.0, 0.0, 0.0, 1.0; // diag(lower, upper)
    return m;
}

inline Eigen::Matrix2d sigma_plus() {
    Eigen::Matrix2d m;
    m << 0.0, 0.0, 1.0, 0.0; // |upper><lower|
    return m;
}

// i (sigma_+ - sigma_-) in the (lower, upper) layout
inline Eigen::Matrix2cd sigma_y_like() {
    Eigen::Matrix2cd m;
    m << std::complex<double>(0, 0), std::complex<double>(0, -1),
         std::complex<double>(0, 1), std::complex<double>(0, 0);
    return m;
}

} // namespace detail

// H = wT a^dag a - (Delta/2) sigma_z + (Omega_R/2)[exp(i eta (a+a^dag)) s+ + H.c.]
// in the {|g>,|e>} x Fock basis, with the closed-form coupling matrix.
inline HermitianOperator build_full_ion_hamiltonian(const ModelSpec& spec) {
    spec.validate();
    const int nf = spec.n_fock;
    const Eigen::MatrixXcd u = coupling_matrix(spec.eta, nf);
    const Eigen::MatrixXd id_f = Eigen::MatrixXd::Identity(nf, nf);
    Eigen::MatrixXcd h =
        spec.omega_t * Eigen::kroneckerProduct(detail::number_operator(nf),
                                               Eigen::Matrix2d::Identity())
        - 0.5 * spec.detuning * Eigen::kroneckerProduct(id_f, detail::sigma_z());
    const Eigen::MatrixXcd drive =
        Eigen::kroneckerProduct(u, detail::sigma_plus()).eval();
    h += 0.5 * spec.rabi * (drive + drive.adjoint());
    return HermitianOperator(std::move(h), nf);
}

// SS-gate split in the |+-> basis: H0 = wT n + (Omega_R/2) sz~ and
// V = (Omega_R/2)[(cos a - 1) sz~ + i sin a (s+~ - s-~)], a = eta (a + a^dag).
// V vanishes identically at eta = 0.
inline Partition build_ss_partition(const ModelSpec& spec) {
    spec.validate();
    if (spec.kind != ModelKind::ss_gate)
        throw ConfigError("build_ss_partition: spec.kind must be ss_gate");
    const int nf = spec.n_fock;
    const Eigen::MatrixXcd u = coupling_matrix(spec.eta, nf);
    const Eigen::MatrixXd cos_a = u.real();
    const Eigen::MatrixXd sin_a = u.imag();
    const Eigen::MatrixXd id_f = Eigen::MatrixXd::Identity(nf, nf);

    Eigen::MatrixXcd h0 =
        spec.omega_t * Eigen::kroneckerProduct(detail::number_operator(nf),
                                               Eigen::Matrix2d::Identity())
        + 0.5 * spec.rabi * Eigen::kroneckerProduct(id_f, detail::sigma_z());
    Eigen::MatrixXcd v =
        0.5 * spec.rabi *
        (Eigen::kroneckerProduct(Eigen::MatrixXd(cos_a - id_f), detail::sigma_z())
             .cast<std::complex<double>>() +
         Eigen::kroneckerProduct(sin_a, detail::sigma_y_like()));

    Partition part;
    part.h0 = HermitianOperator(std::move(h0), nf);
    part.v = HermitianOperator(std::move(v), nf);
    part.p_states = {BasisIndex{Spin::upper, spec.transition[0]},
                     BasisIndex{Spin::lower, spec.transition[1]}};
    return part;
}

// CZ split in the bare {|g>,|e>} basis: H0 = wT n - (Delta/2) sz, V = drive.
inline Partition build_cz_partition(const ModelSpec& spec) {
    spec.validate();
    if (spec.kind != ModelKind::cz_gate)
        throw ConfigError("build_cz_partition: spec.kind must be cz_gate");
    const int nf = spec.n_fock;
    const Eigen::MatrixXcd u = coupling_matrix(spec.eta, nf);
    const Eigen::MatrixXd id_f = Eigen::MatrixXd::Identity(nf, nf);

    Eigen::MatrixXcd h0 =
        spec.omega_t * Eigen::kroneckerProduct(detail::number_operator(nf),
                                               Eigen::Matrix2d::Identity())
        - 0.5 * spec.detuning * Eigen::kroneckerProduct(id_f, detail::sigma_z());
    const Eigen::MatrixXcd drive =
        Eigen::kroneckerProduct(u, detail::sigma_plus()).eval();
    Eigen::MatrixXcd v = 0.5 * spec.rabi * (drive + drive.adjoint());

    Partition part;
    part.h0 = HermitianOperator(std::move(h0), nf);
    part.v = HermitianOperator(std::move(v), nf);
    part.p_states = {BasisIndex{Spin::lower, spec.transition[0]},
                     BasisIndex{Spin::upper, spec.transition[1]}};
    return part;
}

// Generic two-level + oscillator split: H0 = w n + (xi/2) sz with a caller
// supplied perturbation. Bare levels eps_{a,n} = n w + xi/2, eps_{b,n} = n w - xi/2.
inline Partition build_generic_partition(double omega, double xi,
                                         const HermitianOperator& v,
                                         std::array<int, 2> transition) {
    if (omega <= 0.0) throw ConfigError("build_generic_partition: omega must be > 0");
    const int nf = v.n_fock;
    Eigen::MatrixXcd h0 =
        omega * Eigen::kroneckerProduct(detail::number_operator(nf),
                                        Eigen::Matrix2d::Identity())
        + 0.5 * xi * Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(nf, nf),
                                             detail::sigma_z());
    Partition part;
    part.h0 = HermitianOperator(std::move(h0), nf);
    part.v = v;
    part.p_states = {BasisIndex{Spin::upper, transition[0]},
                     BasisIndex{Spin::lower, transition[1]}};
    return part;
}

// A one-parameter family of partitions over the scan parameter xi, plus the
// metadata scans need (bare crossing, pulse parameters). Shared state behind
// the builder is immutable, so concurrent at() calls are safe.
class ScanModel {
public:
    using Builder = std::function<Partition(double)>;

    ScanModel(Builder builder, double xi0, double e0, double eta,
              std::function<double(double)> rabi_at, std::array<int, 2> transition,
              std::string xi_name = "xi")
        : builder_(std::move(builder)), xi0_(xi0), e0_(e0), eta_(eta),
          rabi_at_(std::move(rabi_at)), transition_(transition),
          xi_name_(std::move(xi_name)) {}

    Partition at(double xi) const { return builder_(xi); }
    double xi0() const { return xi0_; }
    double bare_crossing_energy() const { return e0_; }
    double eta() const { return eta_; }
    double rabi_at(double xi) const { return rabi_at_(xi); }
    const std::array<int, 2>& transition() const { return transition_; }
    const std::string& xi_name() const { return xi_name_; }

private:
    Builder builder_;
    double xi0_;
    double e0_;
    double eta_;
    std::function<double(double)> rabi_at_;
    std::array<int, 2> transition_;
    std::string xi_name_;
};

// Builds the scan family for a concrete model. The eta-dependent coupling
// matrix is computed once and shared by every at(xi) call.
inline ScanModel make_scan_model(const ModelSpec& spec) {
    spec.validate();
    if (spec.kind == ModelKind::generic)
        throw ConfigError("make_scan_model: generic models take a custom builder");

    const auto shared = std::make_shared<const ModelSpec>(spec);
    ScanModel::Builder builder;
    std::function<double(double)> rabi_at;
    if (spec.kind == ModelKind::ss_gate) {
        builder = [shared](double xi) {
            ModelSpec s = *shared;
            s.rabi = xi;
            return build_ss_partition(s);
        };
        rabi_at = [](double xi) { return xi; };
    } else {
        builder = [shared](double xi) {
            ModelSpec s = *shared;
            s.detuning = xi;
            return build_cz_partition(s);
        };
        rabi_at = [shared](double) { return shared->rabi; };
    }
    return ScanModel(std::move(builder), spec.xi0(), spec.bare_crossing_energy(),
                     spec.eta, std::move(rabi_at), spec.transition, spec.xi_name());
}

} // namespace aclab::models
