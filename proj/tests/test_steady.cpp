#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "jcs/errors.hpp"
#include "jcs/jc.hpp"
#include "jcs/params.hpp"
#include "jcs/steady.hpp"

using jcs::Complex;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;

jcs::SystemParams fig2_params(double delta3) {
    jcs::SystemParams p;
    p.deltas_tilde[1] = delta3;
    return p;
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, int d) {
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Eigen::MatrixXcd random_hermitian(int d, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Complex(u(rng), u(rng));
    return 0.5 * (m + m.adjoint().eval());
}

// Equation-of-motion right-hand side written with plain matrix products,
// sharing nothing with the vectorized assembly path.
Eigen::MatrixXcd direct_rhs(const Eigen::MatrixXcd& rho, double g, const jcs::SystemParams& p,
                            const jcs::DressedBasis& basis) {
    const Eigen::MatrixXcd h = jcs::hamiltonian_frame(g, p, basis);
    const Eigen::MatrixXcd a = jcs::op_matrix(jcs::Op::Lower, basis).mat;
    const Eigen::MatrixXcd ad = jcs::op_matrix(jcs::Op::Raise, basis).mat;
    const Eigen::MatrixXcd sm = jcs::op_matrix(jcs::Op::SigmaMinus, basis).mat;
    const Eigen::MatrixXcd sp = jcs::op_matrix(jcs::Op::SigmaPlus, basis).mat;
    const Complex iu(0.0, 1.0);
    Eigen::MatrixXcd out = -iu * (h * rho - rho * h);
    out += p.amps[0] * ((sp * rho - rho * sp) - (sm * rho - rho * sm));
    out += 0.5 * p.gamma_i * (2.0 * sm * rho * sp - sp * sm * rho - rho * sp * sm);
    out += p.kappa * (2.0 * a * rho * ad - ad * a * rho - rho * ad * a);
    return out;
}

}  // namespace

TEST_CASE("generator annihilates trace and matches the direct equation of motion") {
    jcs::SystemParams p;
    p.deltas_tilde[1] = kSqrt3 - kSqrt2;
    const jcs::DressedBasis basis = jcs::build_basis(p.n_couplets);
    const int d = basis.dim();
    const jcs::Superoperator q = jcs::assemble_Q(63.0, p);
    REQUIRE(q.dim == d);

    std::mt19937 rng(7201);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXcd rho = random_hermitian(d, rng);
        const Eigen::MatrixXcd dot = unvec(q.mat * vec(rho), d);
        CHECK(std::abs(dot.trace()) <= 1e-12 * rho.norm());
        const Eigen::MatrixXcd ref = direct_rhs(rho, 63.0, p, basis);
        CHECK((dot - ref).cwiseAbs().maxCoeff() <= 1e-10 * ref.norm());
    }
}

TEST_CASE("undriven generator is dissipative with a stationary vacuum") {
    jcs::SystemParams p;
    p.amps = {0.0, 0.0, 0.0};
    p.deltas_tilde[1] = kSqrt3 - kSqrt2;
    const jcs::DressedBasis basis = jcs::build_basis(p.n_couplets);
    const int d = basis.dim();
    const jcs::Superoperator q = jcs::assemble_Q(63.0, p);

    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(d, d);
    vac(0, 0) = 1.0;
    CHECK((q.mat * vec(vac)).cwiseAbs().maxCoeff() <= 1e-14);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(q.mat));
    double abscissa = -1e300;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        abscissa = std::max(abscissa, es.eigenvalues()(i).real());
    CHECK(abscissa <= 1e-12);
}

TEST_CASE("raising and lowering commutator superoperators act as written") {
    const jcs::DressedBasis basis = jcs::build_basis(4);
    const int d = basis.dim();
    const jcs::Superoperator sp = jcs::sigma_commutator(+1, basis);
    const jcs::Superoperator sm = jcs::sigma_commutator(-1, basis);
    const Eigen::MatrixXcd plus = jcs::op_matrix(jcs::Op::SigmaPlus, basis).mat;
    const Eigen::MatrixXcd minus = jcs::op_matrix(jcs::Op::SigmaMinus, basis).mat;

    std::mt19937 rng(40002);
    const Eigen::MatrixXcd rho = random_hermitian(d, rng);
    CHECK((unvec(sp.mat * vec(rho), d) - (plus * rho - rho * plus)).cwiseAbs().maxCoeff() <=
          1e-13);
    CHECK((unvec(sm.mat * vec(rho), d) - (minus * rho - rho * minus)).cwiseAbs().maxCoeff() <=
          1e-13);
    CHECK_THROWS_AS(jcs::sigma_commutator(0, basis), std::invalid_argument);
}

TEST_CASE("harmonic index lattice has the graded count and symmetry") {
    const jcs::BlochIndexSet q0 = jcs::bloch_indices(3, 0);
    REQUIRE(q0.count() == 1);
    CHECK(q0.ks[0] == std::vector<int>({0, 0}));

    const jcs::BlochIndexSet q1 = jcs::bloch_indices(3, 1);
    REQUIRE(q1.count() == 5);
    CHECK(q1.ks[0] == std::vector<int>({0, 0}));
    CHECK(q1.find({1, 0}) >= 0);
    CHECK(q1.find({-1, 0}) >= 0);
    CHECK(q1.find({0, 1}) >= 0);
    CHECK(q1.find({0, -1}) >= 0);
    CHECK(q1.find({1, 1}) == -1);

    CHECK(jcs::bloch_indices(3, 2).count() == 13);
    CHECK(jcs::bloch_indices(3, 3).count() == 25);

    const jcs::BlochIndexSet q2 = jcs::bloch_indices(3, 2);
    for (const std::vector<int>& k : q2.ks) {
        std::vector<int> neg(k.size());
        for (size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
        CHECK(q2.find(neg) >= 0);
    }
    // graded order: the L1 norm never decreases along the list
    int prev = 0;
    for (const std::vector<int>& k : q2.ks) {
        int grade = std::abs(k[0]) + std::abs(k[1]);
        CHECK(grade >= prev);
        prev = grade;
    }

    CHECK(jcs::bloch_indices(1, 2).count() == 1);  // single tone, no beat axes
    CHECK_THROWS_AS(jcs::bloch_indices(3, -1), std::invalid_argument);
}

TEST_CASE("assembled block system has the documented size and structure") {
    jcs::SystemParams p = fig2_params(kSqrt3 - kSqrt2);
    const jcs::BlochSystem sys = jcs::assemble_system(63.0, p, 1);
    const int d = sys.dim;
    const int d2 = d * d;
    REQUIRE(d == 9);
    REQUIRE(sys.n_unknowns == 405);
    CHECK(sys.trace_row == 0);
    for (char a : sys.active) CHECK(a == 1);

    const Eigen::MatrixXcd full(sys.mat);
    const jcs::DressedBasis basis = jcs::build_basis(p.n_couplets);
    const Eigen::MatrixXcd qd(jcs::assemble_Q(63.0, p).mat);
    const Eigen::MatrixXcd spd(jcs::sigma_commutator(+1, basis).mat);
    const Eigen::MatrixXcd smd(jcs::sigma_commutator(-1, basis).mat);

    // k=(0,1) diagonal block is Q shifted by i(delta_3 - g_f)
    const int b01 = sys.indices.find({0, 1});
    REQUIRE(b01 >= 0);
    const int o01 = sys.offset[static_cast<size_t>(b01)];
    const Complex shift(0.0, p.tone_offset(3));
    Eigen::MatrixXcd expect = qd + shift * Eigen::MatrixXcd::Identity(d2, d2);
    CHECK((full.block(o01, o01, d2, d2) - expect).cwiseAbs().maxCoeff() <= 1e-12 * 63.0);

    // block (1,0) reaches k=0 through the raising commutator scaled by E_2,
    // and its (2,0) neighbour is outside the q=1 lattice
    const int b10 = sys.indices.find({1, 0});
    const int o10 = sys.offset[static_cast<size_t>(b10)];
    CHECK((full.block(o10, 0, d2, d2) - p.amps[1] * spd).cwiseAbs().maxCoeff() <= 1e-12);

    // k=0 receives the lowering commutator from (1,0), except on the trace row
    Eigen::MatrixXcd low = -p.amps[1] * smd;
    low.row(0).setZero();
    CHECK((full.block(0, o10, d2, d2) - low).cwiseAbs().maxCoeff() <= 1e-12);

    // trace closure row selects the diagonal of the k=0 block
    for (int c = 0; c < sys.n_unknowns; ++c) {
        const bool diag = c < d2 && (c % (d + 1)) == 0;
        CHECK(full(0, c) == (diag ? Complex(1.0) : Complex(0.0)));
    }
    CHECK(sys.rhs(0) == Complex(1.0));
}

TEST_CASE("tone at the frame frequency is folded statically instead of spawning blocks") {
    jcs::SystemParams p = fig2_params(1.0);  // third tone exactly on-frame
    const jcs::BlochSystem sys = jcs::assemble_system(63.0, p, 1);
    CHECK(sys.n_unknowns == 3 * 81);
    const int b01 = sys.indices.find({0, 1});
    REQUIRE(b01 >= 0);
    CHECK(sys.active[static_cast<size_t>(b01)] == 0);

    const jcs::BlochSolution sol = jcs::solve_steady(63.0, p, 1);
    CHECK(sol.rho_at({0, 1})->norm() == 0.0);
    CHECK(std::abs(sol.rho0().trace() - Complex(1.0)) <= 1e-12);
}

TEST_CASE("undriven steady state is the vacuum") {
    jcs::SystemParams p;
    p.amps = {0.0, 0.0, 0.0};
    p.deltas_tilde[1] = kSqrt3 - kSqrt2;
    const jcs::BlochSolution sol = jcs::solve_steady(63.0, p, 1);
    CHECK(jcs::rho00(sol) == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::MatrixXcd rest = sol.rho0();
    rest(0, 0) = 0.0;
    CHECK(rest.cwiseAbs().maxCoeff() <= 1e-12);
    for (int b = 1; b < sol.indices.count(); ++b)
        CHECK(sol.rho[static_cast<size_t>(b)].cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("steady solution satisfies every block equation of motion") {
    jcs::SystemParams p = fig2_params(kSqrt3 - kSqrt2);
    const double g = 63.0;
    const int q = 2;
    const jcs::BlochSolution sol = jcs::solve_steady(g, p, q);

    const jcs::DressedBasis basis = jcs::build_basis(p.n_couplets);
    const int d = basis.dim();
    const Eigen::MatrixXcd sp = jcs::op_matrix(jcs::Op::SigmaPlus, basis).mat;
    const Eigen::MatrixXcd sm = jcs::op_matrix(jcs::Op::SigmaMinus, basis).mat;
    const Complex iu(0.0, 1.0);

    auto rho_or_zero = [&](std::vector<int> k) -> Eigen::MatrixXcd {
        const Eigen::MatrixXcd* m = sol.rho_at(k);
        return m ? *m : Eigen::MatrixXcd::Zero(d, d);
    };

    double worst = 0.0;
    for (int b = 0; b < sol.indices.count(); ++b) {
        const std::vector<int>& k = sol.indices.ks[static_cast<size_t>(b)];
        double beat = 0.0;
        for (size_t j = 0; j < k.size(); ++j)
            beat += k[j] * p.tone_offset(static_cast<int>(j) + 2);
        Eigen::MatrixXcd r = iu * beat * sol.rho[static_cast<size_t>(b)] +
                             direct_rhs(sol.rho[static_cast<size_t>(b)], g, p, basis);
        for (int m = 2; m <= p.n_tones(); ++m) {
            std::vector<int> kk = k;
            kk[static_cast<size_t>(m) - 2] -= 1;
            Eigen::MatrixXcd lo = rho_or_zero(kk);
            kk[static_cast<size_t>(m) - 2] += 2;
            Eigen::MatrixXcd hi = rho_or_zero(kk);
            r += p.amps[static_cast<size_t>(m) - 1] *
                 ((sp * lo - lo * sp) - (sm * hi - hi * sm));
        }
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-9);

    SUBCASE("trace, conjugation and hermiticity invariants") {
        CHECK(std::abs(sol.rho0().trace() - Complex(1.0)) <= 1e-12);
        for (int b = 0; b < sol.indices.count(); ++b) {
            const std::vector<int>& k = sol.indices.ks[static_cast<size_t>(b)];
            bool zero = true;
            for (int v : k) zero = zero && v == 0;
            if (!zero) CHECK(std::abs(sol.rho[static_cast<size_t>(b)].trace()) <= 1e-10);
            std::vector<int> neg(k.size());
            for (size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
            const Eigen::MatrixXcd* conj_block = sol.rho_at(neg);
            REQUIRE(conj_block != nullptr);
            CHECK((*conj_block - sol.rho[static_cast<size_t>(b)].adjoint())
                      .cwiseAbs()
                      .maxCoeff() <= 1e-10);
        }
        CHECK((sol.rho0() - sol.rho0().adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(sol.residual <= 1e-10);
        CHECK_FALSE(sol.positivity_flagged);
    }
}

TEST_CASE("single resonant drive saturates the lowest transition") {
    // Two-level saturation of |0> -> |1)+ whose width is kappa + gamma_i/2.
    jcs::SystemParams p;
    p.amps = {1.0 / kSqrt2, 0.0, 0.0};
    p.deltas_tilde[1] = kSqrt3 - kSqrt2;
    const jcs::BlochSolution sol1 = jcs::solve_steady(63.0, p, 1);
    CHECK(jcs::rho00(sol1) == doctest::Approx(13.0 / 17.0).epsilon(0.05));

    p.amps = {0.0, kSqrt2, 0.0};
    p.deltas_tilde = {kSqrt2 - 1.0, kSqrt3 - kSqrt2};
    const jcs::BlochSolution sol2 = jcs::solve_steady((kSqrt2 - 1.0) * 63.0, p, 1);
    CHECK(jcs::rho00(sol2) == doctest::Approx(25.0 / 41.0).epsilon(0.05));
}

TEST_CASE("far detuned third tone leaves depletion to the frame-resonant drive") {
    const jcs::BlochSolution sol = jcs::solve_steady(63.0, fig2_params(4.0), 1);
    CHECK(std::abs(jcs::rho00(sol) - 13.0 / 17.0) <= 0.05);
}

TEST_CASE("three-photon rate reproduces tabulated anchor points") {
    // Row (1, 1): the static-fold path.  Row (1, -1): a generic beating point.
    const jcs::BlochSolution on_frame = jcs::solve_steady(63.0, fig2_params(1.0), 2);
    const double r1 = jcs::npcr(on_frame, 3);
    CHECK(r1 >= 1.7e-3 / 2.0);
    CHECK(r1 <= 1.7e-3 * 2.0);

    const jcs::BlochSolution detuned = jcs::solve_steady(63.0, fig2_params(-1.0), 2);
    const double r2 = jcs::npcr(detuned, 3);
    CHECK(r2 >= 2.4e-4 / 2.0);
    CHECK(r2 <= 2.4e-4 * 2.0);
}

TEST_CASE("truncation order q converges at the working drive strengths") {
    const double probes[5] = {-3.1, -1.0, 0.32, 1.0, 1.8};
    for (double d3 : probes) {
        const double n1 = jcs::npcr(jcs::solve_steady(63.0, fig2_params(d3), 1), 3);
        const double n2 = jcs::npcr(jcs::solve_steady(63.0, fig2_params(d3), 2), 3);
        REQUIRE(n2 > 0.0);
        CHECK(std::abs(n2 - n1) / n2 <= 0.5);
    }
}

TEST_CASE("coincidence rate of hand-built states") {
    const jcs::DressedBasis basis = jcs::build_basis(4);
    const int d = basis.dim();

    jcs::BlochSolution sol;
    sol.indices = jcs::bloch_indices(3, 0);
    sol.rho.assign(1, Eigen::MatrixXcd::Zero(d, d));

    sol.rho[0](0, 0) = 1.0;  // vacuum
    CHECK(jcs::npcr(sol, 3) == 0.0);

    sol.rho[0].setZero();
    sol.rho[0](basis.index(3, +1), basis.index(3, +1)) = 1.0;
    CHECK(jcs::npcr(sol, 3) == doctest::Approx(3.0).epsilon(1e-12));

    sol.rho[0].setZero();  // population confined below three photons
    sol.rho[0](basis.index(2, +1), basis.index(2, +1)) = 0.5;
    sol.rho[0](basis.index(2, -1), basis.index(2, -1)) = 0.5;
    CHECK(jcs::npcr(sol, 3) == 0.0);

    sol.rho[0].setZero();
    sol.rho[0](basis.index(3, +1), basis.index(3, +1)) = -0.3e-12;
    CHECK(jcs::npcr(sol, 3) == 0.0);  // clamped round-off, rate -0.9e-12

    sol.rho[0](basis.index(3, +1), basis.index(3, +1)) = -1e-6;
    CHECK_THROWS_AS(jcs::npcr(sol, 3), jcs::PositivityError);
}

TEST_CASE("density element accessor respects labels and hermiticity") {
    const jcs::BlochSolution sol = jcs::solve_steady(63.0, fig2_params(kSqrt3 - kSqrt2), 1);
    CHECK(jcs::density_element(sol, 0, 0, 0, 0).real() == doctest::Approx(jcs::rho00(sol)));
    const Complex up = jcs::density_element(sol, 0, 0, 1, +1);
    const Complex dn = jcs::density_element(sol, 1, +1, 0, 0);
    CHECK(std::abs(up - std::conj(dn)) <= 1e-12);
    CHECK_THROWS_AS(jcs::density_element(sol, 5, +1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(jcs::density_element(sol, 1, 2, 0, 0), std::invalid_argument);
}

TEST_CASE("repeated solves are bitwise reproducible") {
    jcs::SystemParams p = fig2_params(-3.1);
    const double a = jcs::npcr(jcs::solve_steady(63.0, p, 2), 3);
    const double b = jcs::npcr(jcs::solve_steady(63.0, p, 2), 3);
    CHECK(a == b);
}
