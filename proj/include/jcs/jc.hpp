#pragma once

#include <Eigen/Dense>

#include "jcs/params.hpp"

namespace jcs {

// ---- dressed ladder ----
//
// At exact atom-cavity resonance the coupled eigenstates group into couplets
//
//   |n)± = (|n-1, e> ± |n, g>) / sqrt(2),   n >= 1,       |0) = |0, g>,
//
// with lab energies n*omega ± sqrt(n)*g. We work in the mode phase where the
// interaction reads g (a+ sigma- + a sigma+); the antisymmetric form
// i g (a+ sigma- - a sigma+) is the same operator after a quarter-cycle
// rotation of the mode quadratures, and this choice keeps every dressed
// vector and ladder matrix element real. States above couplet n_max are
// projected out; matrix elements reaching past them are dropped.
struct DressedBasis {
    int n_max = 0;             // highest kept couplet
    Eigen::MatrixXd transform; // bare -> dressed, orthogonal; columns ordered as index()

    int dim() const { return 2 * n_max + 1; }

    // Dressed order: |0), |1)+, |1)-, |2)+, |2)-, ... Ground state is (0, 0);
    // couplets take sign +1 or -1. Throws std::invalid_argument on bad labels.
    int index(int n, int sign) const;

    // Inverse of index(): couplet number and sign of a dressed slot.
    int couplet_of(int idx) const;
    int sign_of(int idx) const;
};

DressedBasis build_basis(int n_couplets);

// ---- dressed energies ----

// Ladder energy with the photon carrier removed (omega taken as 0): ±sqrt(n)*g.
double dressed_energy(int n, int sign, double g);
// Full lab value n*omega ± sqrt(n)*g.
double dressed_energy_lab(int n, int sign, double g, double omega);
// In the frame rotating at the tone-1 frequency omega + g_f: -n*g_f ± sqrt(n)*g.
double dressed_energy_frame(int n, int sign, double g, double g_f);

// ---- operators ----

enum class Op {
    Lower,         // a
    Raise,         // a+
    SigmaMinus,    // sigma-
    SigmaPlus,     // sigma+
    Sigma3,        // sigma3 = (|e><e| - |g><g|) / 2
    Excitation,    // N = sigma3 + a+a + 1/2; counts the couplet number
    Coupling,      // a+ sigma- + a sigma+; the interaction in our mode phase
    CouplingAsym,  // A = a+ sigma- - a sigma+; anti-Hermitian conjugate-phase form
};

struct OperatorMatrix {
    Op kind;
    Eigen::MatrixXcd mat;  // dim x dim in the dressed order of DressedBasis
};

// Operator products are formed exactly in the bare product space (which holds
// one extra state above the kept couplets) before projecting, so composites
// like a+ sigma- keep their matrix elements through the ladder edge.
OperatorMatrix op_matrix(Op kind, const DressedBasis& basis);

// (a+)^n a^n, the weight whose steady-state trace gives the n-photon
// coincidence rate.
Eigen::MatrixXcd multiphoton_op(const DressedBasis& basis, int n_photons);

// In-frame Hamiltonian at coupling g: -g_f * N + g (a+ sigma- + a sigma+).
// Diagonal in the dressed basis with entries dressed_energy_frame(n, s, g, g_f).
Eigen::MatrixXcd hamiltonian_frame(double g, const SystemParams& p, const DressedBasis& basis);

// Lab-frame Hamiltonian omega * N + g (a+ sigma- + a sigma+), for spectral
// cross-checks against dressed_energy_lab.
Eigen::MatrixXcd hamiltonian_lab(double g, double omega, const DressedBasis& basis);

}  // namespace jcs
