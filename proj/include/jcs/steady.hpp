#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

#include "jcs/jc.hpp"
#include "jcs/params.hpp"

namespace jcs {

using Complex = std::complex<double>;

// ---- superoperators ----
//
// Density matrices are column-stacked: element (i, j) of a d x d matrix lands
// at vec index j*d + i, so vec(A rho B) = (B^T kron A) vec(rho).

struct Superoperator {
    int dim = 0;  // d; the matrix is d^2 x d^2
    Eigen::SparseMatrix<Complex> mat;
};

// Generator of the static part of the in-frame evolution at coupling g:
//
//   Q rho = -i [H_frame, rho] + E_1 ([sigma+, rho] - [sigma-, rho])
//           + (gamma_i/2)(2 sigma- rho sigma+ - sigma+sigma- rho - rho sigma+sigma-)
//           + kappa (2 a rho a+ - a+a rho - rho a+a)
//
// Tone 1 rotates with the frame, so its drive is time independent and lives
// here. Q annihilates the trace of any argument.
Superoperator assemble_Q(double g, const SystemParams& p);

// Commutator superoperator [sigma+, .] (direction = +1) or [sigma-, .] (-1).
Superoperator sigma_commutator(int direction, const DressedBasis& basis);

// ---- harmonic block lattice ----

// Harmonic indices k of the steady-state expansion rho(t) = sum_k rho_k
// exp(-i k . Delta t), where Delta_j = tone_offset(j + 2). Ordered graded
// lexicographically: by |k|_1, then lexicographic within a grade, so k = 0
// comes first. Closed under negation.
struct BlochIndexSet {
    int n_axes = 0;  // n_tones - 1
    int q = 0;       // |k|_1 cutoff
    std::vector<std::vector<int>> ks;

    int count() const { return static_cast<int>(ks.size()); }
    int find(const std::vector<int>& k) const;  // -1 when absent
};

BlochIndexSet bloch_indices(int n_tones, int q);

// ---- assembled linear system ----

// One row block per harmonic k:
//
//   [i (k . Delta) + Q'] rho_k
//     + sum_m E_m ([sigma+, rho_{k - I_m}] - [sigma-, rho_{k + I_m}]) = 0
//
// with the sum over oscillating tones m >= 2 and I_m the unit vector of axis
// m - 2. Out-of-range neighbors are zero. Tones whose in-frame offset
// vanishes (|Delta_m| <= 1e-9 g_f) are static: their drive joins Q' and their
// axis is frozen at k = 0, which removes the degenerate harmonic layers that
// would otherwise make the system singular. One scalar row of the k = 0 block
// is replaced by the closure Tr rho_0 = 1.
struct BlochSystem {
    BlochIndexSet indices;
    std::vector<char> active;  // blocks frozen to zero are inactive
    std::vector<int> offset;   // unknown offset of each block, -1 when inactive
    int dim = 0;               // dressed dimension d
    int n_unknowns = 0;
    int trace_row = -1;
    Eigen::SparseMatrix<Complex> mat;
    Eigen::VectorXcd rhs;
};

BlochSystem assemble_system(double g, const SystemParams& p, int q);

// ---- solution ----

struct BlochSolution {
    BlochIndexSet indices;
    std::vector<Eigen::MatrixXcd> rho;  // aligned with indices.ks; frozen blocks are zero
    double g = 0.0;
    double residual = 0.0;        // scaled residual |Ax - b| / (|A|_F |x| + |b|)
    double rho0_min_eig = 0.0;    // smallest eigenvalue of the Hermitian part of rho_0
    bool positivity_flagged = false;

    const Eigen::MatrixXcd& rho0() const { return rho[0]; }
    // nullptr when k is outside the index set
    const Eigen::MatrixXcd* rho_at(const std::vector<int>& k) const;
};

// Direct sparse solve of the assembled system. Throws SolverError when the
// factorization fails or the scaled residual exceeds 1e-10. A steady state
// whose rho_0 has an eigenvalue below -1e-4 is returned with
// positivity_flagged set.
BlochSolution solve_steady(double g, const SystemParams& p, int q);

// Tr(rho_0 (a+)^n a^n). Values in [-1e-12, 0) clamp to zero; anything more
// negative throws PositivityError.
double npcr(const BlochSolution& sol, int n_photons);

// Dressed-basis element of rho_0; ground state is (0, 0).
Complex density_element(const BlochSolution& sol, int n_row, int sign_row, int n_col,
                        int sign_col);
double rho00(const BlochSolution& sol);

}  // namespace jcs
