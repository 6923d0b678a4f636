#pragma once

#include <vector>

namespace jcs {

// Physical parameters of the driven atom-cavity system.
//
// Units: hbar = 1 and every rate or frequency is quoted in units of the cavity
// field decay rate kappa (so kappa = 1 in practice). The cavity intensity
// decay rate is 2*kappa and the atomic one is gamma_i, matching the Lindblad
// forms kappa(2 a rho a+ - ...) and (gamma_i/2)(2 sigma- rho sigma+ - ...).
//
// The drive has n_tones() monochromatic components. Tone m carries a real
// non-negative amplitude amps[m-1] and a detuning from the bare resonance
// delta_m = omega_m - omega, expressed as delta_tilde(m) = delta_m / g_f.
// Tone 1 is pinned to the first-couplet resonance of the reference coupling,
// delta_tilde(1) = 1, and defines the rotating frame. The in-frame frequency
// of tone m is tone_offset(m) = delta_m - g_f.
struct SystemParams {
    double kappa = 1.0;    // cavity field decay rate; the rate unit
    double gamma_i = 1.0;  // atomic energy decay rate
    double g_f = 63.0;     // reference atom-cavity coupling (peak value)

    std::vector<double> amps;          // tone amplitudes E_1 .. E_N
    std::vector<double> deltas_tilde;  // normalized detunings of tones 2 .. N

    // Couplets kept in the dressed ladder. The steady-state solver wants
    // n_tones() + 1 so the observable ladder has one buffer couplet above the
    // highest drive-accessible one.
    int n_couplets = 4;

    SystemParams();  // three-tone defaults, see params.cpp

    int n_tones() const { return static_cast<int>(amps.size()); }
    double delta_tilde(int m) const;  // m in [1, n_tones()], delta_tilde(1) == 1
    double tone_offset(int m) const;  // (delta_tilde(m) - 1) * g_f

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

}  // namespace jcs
