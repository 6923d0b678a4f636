#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jcs/jc.hpp"
#include "jcs/params.hpp"

namespace jcs {

// One oscillation group of the amplitude-evolution generator.  `m_minus`
// multiplies e^{-i omega t}, `m_plus` multiplies e^{+i omega t}; conjugate
// element pairs always live in the same group so every kept truncation of
// the drive stays Hermitian and the amplitude norm cannot grow.
struct HarmonicTerm {
    double omega = 0.0;
    Eigen::MatrixXcd m_minus, m_plus;
};

// Amplitude-evolution generator for the no-jump state expansion, written in
// the interaction picture of the dressed in-frame energies.  Element (j,k)
// of a drive term oscillates at the pathway detuning (frame energy gap
// minus tone offset); the static group omega = 0 carries the diagonal decay
// and every exactly resonant transition element.  `frame_energies` holds
// the phases stripped by the picture; reattach them to recover lab-basis
// amplitudes c_j(t) = exp(-i E_j t) b_j(t).
struct HarmonicTerms {
    std::vector<HarmonicTerm> terms;  // omega strictly increasing from 0
    Eigen::VectorXd frame_energies;
    int dim = 0;

    // Sum of the groups with index <= cutoff at time t.
    Eigen::MatrixXcd generator(double t, int cutoff) const;
    double max_kept_frequency(int cutoff) const;
    double max_element_scale(int cutoff) const;
};

// Enumerates the oscillation groups for the truncated ladder that keeps
// couplets up to the tone count (one state fewer per edge than the solver
// basis, matching the state expansion this formalism is defined on).
// Within-couplet dissipative mixing oscillates at the couplet splitting
// 2*sqrt(n)*g and is dropped with the other counter-rotating terms; its
// relative weight is |gamma_i/4 - kappa/2| / (2 sqrt(n) g).
HarmonicTerms build_heff_terms(double g, const SystemParams& p);

// Amplitudes of the truncated state expansion over time, frame phases
// reattached.  norm(t) can only shrink: losses model undetected decays.
struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> coeffs;
    double dt = 0.0;

    double norm_at(size_t i) const { return coeffs[i].norm(); }
};

// Fixed-step 4th-order integration of b' = M(t) b, keeping harmonic groups
// with index <= cutoff.  Starts from the ground state unless `start` is
// given (a unit vector of matching dimension).  Requires
// dt * max(kept frequency, element scale) <= 0.05.
AmplitudeTrajectory integrate_amplitudes(const HarmonicTerms& terms, int cutoff, double t_final,
                                         double dt,
                                         const Eigen::VectorXcd& start = Eigen::VectorXcd());

// Survival-weighted time average of <psi| (a+)^n a^n |psi> on the raw
// amplitudes: the integral of the raw expectation over the integral of the
// squared norm.  Losses stay in as weights, and the ratio saturates once the
// norm has drained, so long horizons all give the same value.  Rejects a
// trajectory whose half-horizon and full-horizon ratios disagree by more
// than 5 percent: the estimate has not converged yet.
double estimate_npcr(const AmplitudeTrajectory& traj, const DressedBasis& basis, int n_photons);

// Step sitting 10 percent under the resolution ceiling of
// integrate_amplitudes: 0.045 over the fastest kept scale.
double default_step(const HarmonicTerms& terms, int cutoff);

// Closed-form ground-state occupation of a saturated two-state transition
// whose upper level decays at kappa + gamma_i/2.
double two_state_rho00(double e_amp, double kappa, double gamma_i);

}  // namespace jcs
