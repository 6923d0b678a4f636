#include "jcs/steady.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "jcs/errors.hpp"

namespace jcs {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Accumulates w * (B^T kron A), the vectorized form of rho -> A rho B.
void add_kron(std::vector<Triplet>& out, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
              Complex w) {
    const int d = static_cast<int>(a.rows());
    for (int jcol = 0; jcol < d; ++jcol)
        for (int l = 0; l < d; ++l) {
            const Complex bw = b(l, jcol);
            if (bw == 0.0) continue;
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) {
                    const Complex av = a(i, k);
                    if (av == 0.0) continue;
                    out.emplace_back(jcol * d + i, l * d + k, w * av * bw);
                }
        }
}

Superoperator from_triplets(int d, std::vector<Triplet>& trips) {
    Superoperator s;
    s.dim = d;
    s.mat.resize(d * d, d * d);
    s.mat.setFromTriplets(trips.begin(), trips.end());
    s.mat.prune(0.0, 0.0);
    return s;
}

// Tones whose in-frame frequency is numerically zero rotate with the frame.
bool tone_is_static(const SystemParams& p, int m) {
    return std::abs(p.tone_offset(m)) <= 1e-9 * p.g_f;
}

}  // namespace

// ---- superoperators ----

Superoperator assemble_Q(double g, const SystemParams& p) {
    p.validate();
    const DressedBasis basis = build_basis(p.n_couplets);
    const int d = basis.dim();
    const Eigen::MatrixXcd idm = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd a = op_matrix(Op::Lower, basis).mat;
    const Eigen::MatrixXcd ad = op_matrix(Op::Raise, basis).mat;
    const Eigen::MatrixXcd sm = op_matrix(Op::SigmaMinus, basis).mat;
    const Eigen::MatrixXcd sp = op_matrix(Op::SigmaPlus, basis).mat;
    const Eigen::MatrixXcd h = hamiltonian_frame(g, p, basis);
    // Products of the projected factors; keeps the trace identity of each
    // dissipator exact on the truncated ladder.
    const Eigen::MatrixXcd spsm = sp * sm;
    const Eigen::MatrixXcd ada = ad * a;

    const Complex iu(0.0, 1.0);
    const double e1 = p.amps[0];
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(d) * d * d * 4);

    add_kron(trips, h, idm, -iu);
    add_kron(trips, idm, h, iu);

    add_kron(trips, sp, idm, e1);
    add_kron(trips, idm, sp, -e1);
    add_kron(trips, sm, idm, -e1);
    add_kron(trips, idm, sm, e1);

    add_kron(trips, sm, sp, p.gamma_i);
    add_kron(trips, spsm, idm, -0.5 * p.gamma_i);
    add_kron(trips, idm, spsm, -0.5 * p.gamma_i);

    add_kron(trips, a, ad, 2.0 * p.kappa);
    add_kron(trips, ada, idm, -p.kappa);
    add_kron(trips, idm, ada, -p.kappa);

    return from_triplets(d, trips);
}

Superoperator sigma_commutator(int direction, const DressedBasis& basis) {
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("direction must be +1 or -1");
    const int d = basis.dim();
    const Eigen::MatrixXcd idm = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd s =
        op_matrix(direction == 1 ? Op::SigmaPlus : Op::SigmaMinus, basis).mat;
    std::vector<Triplet> trips;
    add_kron(trips, s, idm, 1.0);
    add_kron(trips, idm, s, -1.0);
    return from_triplets(d, trips);
}

// ---- index lattice ----

int BlochIndexSet::find(const std::vector<int>& k) const {
    for (int i = 0; i < count(); ++i)
        if (ks[static_cast<size_t>(i)] == k) return i;
    return -1;
}

BlochIndexSet bloch_indices(int n_tones, int q) {
    if (n_tones < 1) throw std::invalid_argument("need at least one tone");
    if (q < 0) throw std::invalid_argument("q must be non-negative");
    BlochIndexSet set;
    set.n_axes = n_tones - 1;
    set.q = q;
    std::vector<int> k(static_cast<size_t>(set.n_axes), 0);
    // enumerate |k|_1 <= q recursively, then order graded lexicographically
    std::function<void(int, int)> fill = [&](int axis, int budget) {
        if (axis == set.n_axes) {
            set.ks.push_back(k);
            return;
        }
        for (int v = -budget; v <= budget; ++v) {
            k[static_cast<size_t>(axis)] = v;
            fill(axis + 1, budget - std::abs(v));
        }
        k[static_cast<size_t>(axis)] = 0;
    };
    fill(0, q);
    std::sort(set.ks.begin(), set.ks.end(), [](const std::vector<int>& x, const std::vector<int>& y) {
        int gx = 0, gy = 0;
        for (int v : x) gx += std::abs(v);
        for (int v : y) gy += std::abs(v);
        if (gx != gy) return gx < gy;
        return x < y;
    });
    return set;
}

// ---- system assembly ----

BlochSystem assemble_system(double g, const SystemParams& p, int q) {
    p.validate();
    const DressedBasis basis = build_basis(p.n_couplets);
    const int d = basis.dim();
    const int d2 = d * d;
    const int n_tones = p.n_tones();

    Superoperator q_static = assemble_Q(g, p);
    const Superoperator splus = sigma_commutator(+1, basis);
    const Superoperator sminus = sigma_commutator(-1, basis);

    std::vector<char> is_static(static_cast<size_t>(n_tones) + 1, 0);
    for (int m = 2; m <= n_tones; ++m)
        if (tone_is_static(p, m)) {
            is_static[static_cast<size_t>(m)] = 1;
            q_static.mat =
                (q_static.mat + p.amps[static_cast<size_t>(m) - 1] * (splus.mat - sminus.mat))
                    .pruned(0.0, 0.0);
        }

    BlochSystem sys;
    sys.indices = bloch_indices(n_tones, q);
    sys.dim = d;
    const int nb = sys.indices.count();
    sys.active.assign(static_cast<size_t>(nb), 1);
    sys.offset.assign(static_cast<size_t>(nb), -1);
    for (int b = 0; b < nb; ++b)
        for (int m = 2; m <= n_tones; ++m)
            if (is_static[static_cast<size_t>(m)] &&
                sys.indices.ks[static_cast<size_t>(b)][static_cast<size_t>(m) - 2] != 0)
                sys.active[static_cast<size_t>(b)] = 0;

    int off = 0;
    for (int b = 0; b < nb; ++b)
        if (sys.active[static_cast<size_t>(b)]) {
            sys.offset[static_cast<size_t>(b)] = off;
            off += d2;
        }
    sys.n_unknowns = off;
    sys.trace_row = sys.offset[0];  // k = 0 is first in graded order and always active

    const Complex iu(0.0, 1.0);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(nb) * static_cast<size_t>(q_static.mat.nonZeros() + 4 * d2));

    auto push = [&](int row, int col, Complex v) {
        if (row == sys.trace_row) return;  // replaced by the closure row
        trips.emplace_back(row, col, v);
    };

    for (int b = 0; b < nb; ++b) {
        if (!sys.active[static_cast<size_t>(b)]) continue;
        const int ob = sys.offset[static_cast<size_t>(b)];
        const std::vector<int>& k = sys.indices.ks[static_cast<size_t>(b)];

        double beat = 0.0;
        for (int j = 0; j < sys.indices.n_axes; ++j)
            beat += k[static_cast<size_t>(j)] * p.tone_offset(j + 2);

        for (int c = 0; c < d2; ++c)
            for (Eigen::SparseMatrix<Complex>::InnerIterator it(q_static.mat, c); it; ++it)
                push(ob + static_cast<int>(it.row()), ob + c, it.value());
        for (int i = 0; i < d2; ++i) push(ob + i, ob + i, iu * beat);

        for (int m = 2; m <= n_tones; ++m) {
            if (is_static[static_cast<size_t>(m)]) continue;
            const double em = p.amps[static_cast<size_t>(m) - 1];
            if (em == 0.0) continue;
            std::vector<int> kk = k;
            kk[static_cast<size_t>(m) - 2] -= 1;
            int nb_lo = sys.indices.find(kk);
            if (nb_lo >= 0 && sys.active[static_cast<size_t>(nb_lo)]) {
                const int oc = sys.offset[static_cast<size_t>(nb_lo)];
                for (int c = 0; c < d2; ++c)
                    for (Eigen::SparseMatrix<Complex>::InnerIterator it(splus.mat, c); it; ++it)
                        push(ob + static_cast<int>(it.row()), oc + c, em * it.value());
            }
            kk[static_cast<size_t>(m) - 2] += 2;
            int nb_hi = sys.indices.find(kk);
            if (nb_hi >= 0 && sys.active[static_cast<size_t>(nb_hi)]) {
                const int oc = sys.offset[static_cast<size_t>(nb_hi)];
                for (int c = 0; c < d2; ++c)
                    for (Eigen::SparseMatrix<Complex>::InnerIterator it(sminus.mat, c); it; ++it)
                        push(ob + static_cast<int>(it.row()), oc + c, -em * it.value());
            }
        }
    }

    for (int j = 0; j < d; ++j) trips.emplace_back(sys.trace_row, sys.offset[0] + j * d + j, 1.0);

    sys.mat.resize(sys.n_unknowns, sys.n_unknowns);
    sys.mat.setFromTriplets(trips.begin(), trips.end());
    sys.rhs = Eigen::VectorXcd::Zero(sys.n_unknowns);
    sys.rhs(sys.trace_row) = 1.0;
    return sys;
}

// ---- solve ----

const Eigen::MatrixXcd* BlochSolution::rho_at(const std::vector<int>& k) const {
    const int i = indices.find(k);
    return i < 0 ? nullptr : &rho[static_cast<size_t>(i)];
}

BlochSolution solve_steady(double g, const SystemParams& p, int q) {
    BlochSystem sys = assemble_system(g, p, q);
    sys.mat.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(sys.mat);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse factorization of the harmonic block system failed");
    const Eigen::VectorXcd x = lu.solve(sys.rhs);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse back-substitution failed");

    const double residual =
        (sys.mat * x - sys.rhs).norm() / (sys.mat.norm() * x.norm() + sys.rhs.norm());
    if (!(residual <= 1e-10))
        throw SolverError("steady-state residual " + std::to_string(residual) +
                              " exceeds 1e-10",
                          residual);

    BlochSolution sol;
    sol.indices = sys.indices;
    sol.g = g;
    sol.residual = residual;
    const int d = sys.dim;
    sol.rho.assign(static_cast<size_t>(sys.indices.count()), Eigen::MatrixXcd::Zero(d, d));
    for (int b = 0; b < sys.indices.count(); ++b) {
        if (!sys.active[static_cast<size_t>(b)]) continue;
        sol.rho[static_cast<size_t>(b)] =
            Eigen::Map<const Eigen::MatrixXcd>(x.data() + sys.offset[static_cast<size_t>(b)], d, d);
    }

    const Eigen::MatrixXcd herm = 0.5 * (sol.rho[0] + sol.rho[0].adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    sol.rho0_min_eig = es.eigenvalues().minCoeff();
    sol.positivity_flagged = sol.rho0_min_eig < -1e-4;
    return sol;
}

// ---- observables ----

double npcr(const BlochSolution& sol, int n_photons) {
    const int d = static_cast<int>(sol.rho0().rows());
    const DressedBasis basis = build_basis((d - 1) / 2);
    const double value = (sol.rho0() * multiphoton_op(basis, n_photons)).trace().real();
    if (value >= 0.0) return value;
    if (value >= -1e-12) return 0.0;
    throw PositivityError("coincidence rate " + std::to_string(value) +
                              " is negative beyond the clamping tolerance",
                          value);
}

Complex density_element(const BlochSolution& sol, int n_row, int sign_row, int n_col,
                        int sign_col) {
    const int d = static_cast<int>(sol.rho0().rows());
    const DressedBasis basis = build_basis((d - 1) / 2);
    return sol.rho0()(basis.index(n_row, sign_row), basis.index(n_col, sign_col));
}

double rho00(const BlochSolution& sol) { return sol.rho0()(0, 0).real(); }

}  // namespace jcs
