#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jcs/params.hpp"

namespace jcs {

// Sampled density-matrix history from a fixed-step integration.  Samples are
// uniformly spaced in time (the integrator may take several internal steps
// between samples) and always include the final instant.
struct DensityTrajectory {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> rhos;
    double dt = 0.0;  // internal integrator step, not the sample spacing

    double sample_spacing() const;
    const Eigen::MatrixXcd& final_state() const { return rhos.back(); }
};

// Integrates the in-frame master equation with the explicit multichromatic
// drive, fourth-order fixed step.  This is the brute-force reference path:
// no harmonic expansion, no superoperator, plain matrix products.
//
// Requires dt * (largest frame energy, tone offset, or decay scale) <= 0.05.
// Aborts if the trace drifts from 1 by more than 1e-6 at any sample.
DensityTrajectory integrate_master(double g, const SystemParams& p, const Eigen::MatrixXcd& rho0,
                                   double t_final, double dt);

// Time average of the sampled trajectory over the trailing `window`,
// trapezoid weights.  The caller picks a window spanning whole beat
// periods of the slowest tone when a dc reading is wanted.
Eigen::MatrixXcd dc_component(const DensityTrajectory& traj, double window);

// 2*pi over the smallest nonzero in-frame tone offset; 0 when every tone
// rotates with the frame (no beat to average over).
double slowest_beat_period(const SystemParams& p);

}  // namespace jcs
