#include "jcs/jc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jcs {

namespace {

// Bare product space used for exact operator algebra: photons 0..n_max with
// both atomic states, index 2*n + s (s = 0 ground, 1 excited). It contains
// |n_max, e>, one state beyond the kept couplets, so products such as
// a sigma+ pass through couplet n_max + 1 before projection.
int bare_dim(int n_max) { return 2 * (n_max + 1); }

Eigen::MatrixXd bare_lower(int n_max) {
    const int d = bare_dim(n_max);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (int n = 1; n <= n_max; ++n)
        for (int s = 0; s < 2; ++s) a(2 * (n - 1) + s, 2 * n + s) = std::sqrt(double(n));
    return a;
}

Eigen::MatrixXd bare_sigma_minus(int n_max) {
    const int d = bare_dim(n_max);
    Eigen::MatrixXd sm = Eigen::MatrixXd::Zero(d, d);
    for (int n = 0; n <= n_max; ++n) sm(2 * n, 2 * n + 1) = 1.0;
    return sm;
}

Eigen::MatrixXd bare_sigma3(int n_max) {
    const int d = bare_dim(n_max);
    Eigen::VectorXd diag(d);
    for (int n = 0; n <= n_max; ++n) {
        diag(2 * n) = -0.5;
        diag(2 * n + 1) = 0.5;
    }
    return diag.asDiagonal();
}

// Excitation number built directly from its eigenvalues: couplet n for
// |n, g>, couplet n + 1 for |n, e>.
Eigen::MatrixXd bare_excitation(int n_max) {
    const int d = bare_dim(n_max);
    Eigen::VectorXd diag(d);
    for (int n = 0; n <= n_max; ++n) {
        diag(2 * n) = double(n);
        diag(2 * n + 1) = double(n + 1);
    }
    return diag.asDiagonal();
}

// Rows select the kept bare states: |n, g> -> 2n, |n, e> -> 2n + 1 for
// n < n_max, plus |n_max, g>. Only |n_max, e> is dropped.
Eigen::MatrixXd keep_projector(int n_max) {
    const int kept = 2 * n_max + 1;
    Eigen::MatrixXd pr = Eigen::MatrixXd::Zero(kept, bare_dim(n_max));
    for (int i = 0; i < kept; ++i) pr(i, i) = 1.0;
    return pr;
}

Eigen::MatrixXd to_dressed(const Eigen::MatrixXd& bare_op, const DressedBasis& basis) {
    const Eigen::MatrixXd pr = keep_projector(basis.n_max);
    return basis.transform.transpose() * pr * bare_op * pr.transpose() * basis.transform;
}

int check_sign(int n, int sign) {
    if (n == 0) {
        if (sign != 0) throw std::invalid_argument("ground state takes sign 0");
        return 0;
    }
    if (sign != 1 && sign != -1) throw std::invalid_argument("couplet sign must be +1 or -1");
    return sign;
}

}  // namespace

// ---- basis ----

int DressedBasis::index(int n, int sign) const {
    if (n < 0 || n > n_max)
        throw std::invalid_argument("couplet " + std::to_string(n) + " outside [0, " +
                                    std::to_string(n_max) + "]");
    check_sign(n, sign);
    if (n == 0) return 0;
    return 1 + 2 * (n - 1) + (sign > 0 ? 0 : 1);
}

int DressedBasis::couplet_of(int idx) const {
    if (idx < 0 || idx >= dim()) throw std::invalid_argument("dressed index out of range");
    return idx == 0 ? 0 : 1 + (idx - 1) / 2;
}

int DressedBasis::sign_of(int idx) const {
    if (idx < 0 || idx >= dim()) throw std::invalid_argument("dressed index out of range");
    return idx == 0 ? 0 : ((idx - 1) % 2 == 0 ? 1 : -1);
}

DressedBasis build_basis(int n_couplets) {
    if (n_couplets < 1) throw std::invalid_argument("basis needs at least one couplet");
    DressedBasis basis;
    basis.n_max = n_couplets;
    const int d = basis.dim();
    const double r = 1.0 / std::sqrt(2.0);
    basis.transform = Eigen::MatrixXd::Zero(d, d);
    basis.transform(0, 0) = 1.0;  // |0) = |0, g>
    for (int n = 1; n <= n_couplets; ++n) {
        // kept-bare rows: |n-1, e> -> 2n - 1, |n, g> -> 2n
        basis.transform(2 * n - 1, basis.index(n, +1)) = r;
        basis.transform(2 * n, basis.index(n, +1)) = r;
        basis.transform(2 * n - 1, basis.index(n, -1)) = r;
        basis.transform(2 * n, basis.index(n, -1)) = -r;
    }
    return basis;
}

// ---- energies ----

double dressed_energy(int n, int sign, double g) {
    if (n < 0) throw std::invalid_argument("couplet number must be non-negative");
    if (n == 0) return 0.0;
    return check_sign(n, sign) * std::sqrt(double(n)) * g;
}

double dressed_energy_lab(int n, int sign, double g, double omega) {
    return double(n) * omega + dressed_energy(n, sign, g);
}

double dressed_energy_frame(int n, int sign, double g, double g_f) {
    return -double(n) * g_f + dressed_energy(n, sign, g);
}

// ---- operators ----

OperatorMatrix op_matrix(Op kind, const DressedBasis& basis) {
    const int n_max = basis.n_max;
    Eigen::MatrixXd bare;
    switch (kind) {
        case Op::Lower: bare = bare_lower(n_max); break;
        case Op::Raise: bare = bare_lower(n_max).transpose(); break;
        case Op::SigmaMinus: bare = bare_sigma_minus(n_max); break;
        case Op::SigmaPlus: bare = bare_sigma_minus(n_max).transpose(); break;
        case Op::Sigma3: bare = bare_sigma3(n_max); break;
        case Op::Excitation: bare = bare_excitation(n_max); break;
        case Op::Coupling: {
            const Eigen::MatrixXd a = bare_lower(n_max);
            const Eigen::MatrixXd sm = bare_sigma_minus(n_max);
            bare = a.transpose() * sm + a * sm.transpose();
            break;
        }
        case Op::CouplingAsym: {
            const Eigen::MatrixXd a = bare_lower(n_max);
            const Eigen::MatrixXd sm = bare_sigma_minus(n_max);
            bare = a.transpose() * sm - a * sm.transpose();
            break;
        }
    }
    return {kind, to_dressed(bare, basis).cast<std::complex<double>>()};
}

Eigen::MatrixXcd multiphoton_op(const DressedBasis& basis, int n_photons) {
    if (n_photons < 1) throw std::invalid_argument("photon order must be positive");
    const Eigen::MatrixXd a = bare_lower(basis.n_max);
    Eigen::MatrixXd an = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    for (int i = 0; i < n_photons; ++i) an = a * an;
    return to_dressed(an.transpose() * an, basis).cast<std::complex<double>>();
}

Eigen::MatrixXcd hamiltonian_frame(double g, const SystemParams& p, const DressedBasis& basis) {
    const int d = basis.dim();
    Eigen::VectorXd diag(d);
    for (int i = 0; i < d; ++i)
        diag(i) = dressed_energy_frame(basis.couplet_of(i), basis.sign_of(i), g, p.g_f);
    return diag.asDiagonal().toDenseMatrix().cast<std::complex<double>>();
}

Eigen::MatrixXcd hamiltonian_lab(double g, double omega, const DressedBasis& basis) {
    const int n_max = basis.n_max;
    const Eigen::MatrixXd a = bare_lower(n_max);
    const Eigen::MatrixXd sm = bare_sigma_minus(n_max);
    const Eigen::MatrixXd h =
        omega * bare_excitation(n_max) + g * (a.transpose() * sm + a * sm.transpose());
    return to_dressed(h, basis).cast<std::complex<double>>();
}

}  // namespace jcs
