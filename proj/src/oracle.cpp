#include "jcs/oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "jcs/errors.hpp"
#include "jcs/jc.hpp"

namespace jcs {

namespace {

constexpr int kMaxSamples = 32768;

struct Rhs {
    Eigen::MatrixXcd h;
    Eigen::MatrixXcd a, ad, sm, sp;
    Eigen::MatrixXcd spsm, ada;
    std::vector<double> amp;
    std::vector<double> offset;
    double gamma_i, kappa;

    Rhs(double g, const SystemParams& p) {
        const DressedBasis basis = build_basis(p.n_couplets);
        h = hamiltonian_frame(g, p, basis);
        a = op_matrix(Op::Lower, basis).mat;
        ad = op_matrix(Op::Raise, basis).mat;
        sm = op_matrix(Op::SigmaMinus, basis).mat;
        sp = op_matrix(Op::SigmaPlus, basis).mat;
        spsm = sp * sm;
        ada = ad * a;
        gamma_i = p.gamma_i;
        kappa = p.kappa;
        for (int m = 1; m <= p.n_tones(); ++m) {
            amp.push_back(p.amps[static_cast<size_t>(m) - 1]);
            offset.push_back(p.tone_offset(m));
        }
    }

    Eigen::MatrixXcd operator()(double t, const Eigen::MatrixXcd& rho) const {
        const std::complex<double> iu(0.0, 1.0);
        Eigen::MatrixXcd out = -iu * (h * rho - rho * h);
        for (size_t m = 0; m < amp.size(); ++m) {
            if (amp[m] == 0.0) continue;
            const std::complex<double> e = amp[m] * std::exp(-iu * offset[m] * t);
            out += e * (sp * rho - rho * sp) - std::conj(e) * (sm * rho - rho * sm);
        }
        out += 0.5 * gamma_i * (2.0 * sm * rho * sp - spsm * rho - rho * spsm);
        out += kappa * (2.0 * a * rho * ad - ada * rho - rho * ada);
        return out;
    }

    double fastest_scale() const {
        double s = 0.0;
        for (int i = 0; i < h.rows(); ++i) s = std::max(s, std::abs(h(i, i).real()));
        for (double o : offset) s = std::max(s, std::abs(o));
        s = std::max(s, 2.0 * kappa * ada.real().diagonal().maxCoeff() + gamma_i);
        return s;
    }
};

}  // namespace

double DensityTrajectory::sample_spacing() const {
    if (times.size() < 2) throw std::invalid_argument("trajectory holds fewer than two samples");
    return times[1] - times[0];
}

DensityTrajectory integrate_master(double g, const SystemParams& p, const Eigen::MatrixXcd& rho0,
                                   double t_final, double dt) {
    p.validate();
    const int d = 2 * p.n_couplets + 1;
    if (rho0.rows() != d || rho0.cols() != d)
        throw std::invalid_argument("initial state dimension does not match the basis");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-9 || std::abs(rho0.trace().imag()) > 1e-9)
        throw std::invalid_argument("initial state must have unit trace");
    if (!(dt > 0.0) || !(t_final > 0.0))
        throw std::invalid_argument("step and horizon must be positive");

    const Rhs rhs(g, p);
    const double scale = rhs.fastest_scale();
    if (dt * scale > 0.05)
        throw std::invalid_argument("step " + std::to_string(dt) +
                                    " too coarse for the fastest model scale " +
                                    std::to_string(scale));

    const long n_steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    const long stride = std::max(1L, (n_steps + kMaxSamples - 1) / kMaxSamples);

    DensityTrajectory traj;
    traj.dt = dt;
    traj.times.reserve(static_cast<size_t>(n_steps / stride) + 2);
    traj.rhos.reserve(static_cast<size_t>(n_steps / stride) + 2);

    Eigen::MatrixXcd rho = rho0;
    auto record = [&](double t) {
        const std::complex<double> tr = rho.trace();
        const double drift = std::abs(tr - std::complex<double>(1.0));
        if (drift > 1e-6)
            throw SolverError("trace drifted by " + std::to_string(drift) + " at t = " +
                                  std::to_string(t),
                              drift);
        traj.times.push_back(t);
        traj.rhos.push_back(rho);
    };
    record(0.0);

    Eigen::MatrixXcd k1(d, d), k2(d, d), k3(d, d), k4(d, d);
    for (long s = 0; s < n_steps; ++s) {
        const double t = static_cast<double>(s) * dt;
        k1 = rhs(t, rho);
        k2 = rhs(t + 0.5 * dt, rho + (0.5 * dt) * k1);
        k3 = rhs(t + 0.5 * dt, rho + (0.5 * dt) * k2);
        k4 = rhs(t + dt, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s + 1) % stride == 0 || s + 1 == n_steps) record(static_cast<double>(s + 1) * dt);
    }
    return traj;
}

Eigen::MatrixXcd dc_component(const DensityTrajectory& traj, double window) {
    if (traj.times.size() < 2) throw std::invalid_argument("trajectory too short to average");
    const double t_end = traj.times.back();
    if (!(window > 0.0)) throw std::invalid_argument("window must be positive");
    if (window > t_end - traj.times.front() + 1e-12)
        throw std::invalid_argument("window exceeds the trajectory span");

    const double t_start = t_end - window;
    size_t i0 = 0;
    while (i0 + 1 < traj.times.size() && traj.times[i0] < t_start - 1e-12) ++i0;

    const int d = static_cast<int>(traj.rhos.front().rows());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (size_t i = i0; i + 1 < traj.times.size(); ++i) {
        const double h = traj.times[i + 1] - traj.times[i];
        acc += (0.5 * h) * (traj.rhos[i] + traj.rhos[i + 1]);
    }
    return acc / (t_end - traj.times[i0]);
}

double slowest_beat_period(const SystemParams& p) {
    double best = 0.0;
    for (int m = 1; m <= p.n_tones(); ++m) {
        const double o = std::abs(p.tone_offset(m));
        if (o <= 1e-9 * p.g_f) continue;
        if (best == 0.0 || o < best) best = o;
    }
    return best == 0.0 ? 0.0 : 2.0 * M_PI / best;
}

}  // namespace jcs
