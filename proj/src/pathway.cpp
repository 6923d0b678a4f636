#include "jcs/pathway.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include "jcs/errors.hpp"

namespace jcs {

namespace {

using Complex = std::complex<double>;

// Raw drive element before grouping: position, weight, signed detuning.
struct Entry {
    int row, col;
    Complex weight;
    double omega;  // signed; the element carries e^{+i omega t}
};

}  // namespace

// ---- generator assembly ----

Eigen::MatrixXcd HarmonicTerms::generator(double t, int cutoff) const {
    if (terms.empty()) throw std::invalid_argument("no harmonic terms");
    const int last = std::min<int>(cutoff, static_cast<int>(terms.size()) - 1);
    if (last < 0) throw std::invalid_argument("cutoff must be non-negative");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    const Complex iu(0.0, 1.0);
    for (int l = 0; l <= last; ++l) {
        const HarmonicTerm& h = terms[static_cast<size_t>(l)];
        if (h.omega == 0.0) {
            out += h.m_minus;
            continue;
        }
        out += std::exp(-iu * h.omega * t) * h.m_minus + std::exp(iu * h.omega * t) * h.m_plus;
    }
    return out;
}

double HarmonicTerms::max_kept_frequency(int cutoff) const {
    if (terms.empty()) throw std::invalid_argument("no harmonic terms");
    const int last = std::min<int>(std::max(cutoff, 0), static_cast<int>(terms.size()) - 1);
    return terms[static_cast<size_t>(last)].omega;
}

double HarmonicTerms::max_element_scale(int cutoff) const {
    if (terms.empty()) throw std::invalid_argument("no harmonic terms");
    const int last = std::min<int>(std::max(cutoff, 0), static_cast<int>(terms.size()) - 1);
    double s = 0.0;
    for (int l = 0; l <= last; ++l) {
        s = std::max(s, terms[static_cast<size_t>(l)].m_minus.cwiseAbs().maxCoeff());
        s = std::max(s, terms[static_cast<size_t>(l)].m_plus.cwiseAbs().maxCoeff());
    }
    return s;
}

HarmonicTerms build_heff_terms(double g, const SystemParams& p) {
    p.validate();
    const int n = p.n_tones();
    const DressedBasis basis = build_basis(n);
    const int d = basis.dim();

    HarmonicTerms out;
    out.dim = d;
    out.frame_energies.resize(d);
    for (int j = 0; j < d; ++j)
        out.frame_energies(j) =
            dressed_energy_frame(basis.couplet_of(j), j == 0 ? 0 : basis.sign_of(j), g, p.g_f);

    const Eigen::MatrixXcd sp = op_matrix(Op::SigmaPlus, basis).mat;
    const Eigen::MatrixXcd ada = (op_matrix(Op::Raise, basis).mat * op_matrix(Op::Lower, basis).mat);
    const Eigen::MatrixXcd spsm = sp * op_matrix(Op::SigmaMinus, basis).mat;

    const double zero_tol = 1e-9 * p.g_f;
    std::vector<Entry> entries;
    for (int m = 1; m <= n; ++m) {
        const double em = p.amps[static_cast<size_t>(m) - 1];
        if (em == 0.0) continue;
        const double dm = p.tone_offset(m);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const Complex s = em * sp(j, k);
                if (s == 0.0) continue;
                // raising element e^{+i Omega t} at (j,k), its adjoint
                // partner at (k,j) with the opposite phase and sign
                const double omega = out.frame_energies(j) - out.frame_energies(k) - dm;
                entries.push_back({j, k, s, std::abs(omega) <= zero_tol ? 0.0 : omega});
                entries.push_back({k, j, -s, std::abs(omega) <= zero_tol ? 0.0 : -omega});
            }
    }

    // group by |omega|; conjugate pairs land together by construction
    std::map<long long, size_t> group_of;
    auto group_key = [&](double w) {
        return static_cast<long long>(std::llround(std::abs(w) / std::max(zero_tol, 1e-12)));
    };
    HarmonicTerm base;
    base.m_minus = Eigen::MatrixXcd::Zero(d, d);
    base.m_plus = Eigen::MatrixXcd::Zero(d, d);

    out.terms.push_back(base);  // static group, index 0
    out.terms[0].omega = 0.0;
    group_of[0] = 0;

    for (const Entry& e : entries) {
        const long long key = group_key(e.omega);
        auto it = group_of.find(key);
        if (it == group_of.end()) {
            it = group_of.emplace(key, out.terms.size()).first;
            out.terms.push_back(base);
            out.terms.back().omega = std::abs(e.omega);
        }
        HarmonicTerm& h = out.terms[it->second];
        if (e.omega >= 0.0 && h.omega > 0.0)
            h.m_plus(e.row, e.col) += e.weight;
        else
            h.m_minus(e.row, e.col) += e.weight;
    }

    for (int j = 0; j < d; ++j)
        out.terms[0].m_minus(j, j) -=
            p.kappa * ada(j, j).real() + 0.5 * p.gamma_i * spsm(j, j).real();

    std::sort(out.terms.begin(), out.terms.end(),
              [](const HarmonicTerm& a, const HarmonicTerm& b) { return a.omega < b.omega; });
    return out;
}

// ---- amplitude integration ----

AmplitudeTrajectory integrate_amplitudes(const HarmonicTerms& terms, int cutoff, double t_final,
                                         double dt, const Eigen::VectorXcd& start) {
    if (terms.terms.empty() || terms.dim <= 0)
        throw std::invalid_argument("harmonic terms are empty");
    if (cutoff < 0) throw std::invalid_argument("cutoff must be non-negative");
    if (!(dt > 0.0) || !(t_final > 0.0))
        throw std::invalid_argument("step and horizon must be positive");
    if (start.size() != 0 && start.size() != terms.dim)
        throw std::invalid_argument("start vector dimension mismatch");
    if (start.size() != 0 && std::abs(start.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("start vector must be normalized");
    const double scale =
        std::max(terms.max_kept_frequency(cutoff), terms.max_element_scale(cutoff));
    if (dt * scale > 0.05)
        throw std::invalid_argument("step " + std::to_string(dt) +
                                    " too coarse for the kept oscillation scale " +
                                    std::to_string(scale));

    const int d = terms.dim;
    const long n_steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    constexpr long kMaxSamples = 65536;
    const long stride = std::max(1L, (n_steps + kMaxSamples - 1) / kMaxSamples);

    AmplitudeTrajectory traj;
    traj.dt = dt;
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(d);
    if (start.size() != 0)
        b = start;
    else
        b(0) = 1.0;

    const Complex iu(0.0, 1.0);
    auto record = [&](double t) {
        const double norm = b.norm();
        if (norm > 1.0 + 1e-9)
            throw SolverError("amplitude norm " + std::to_string(norm) + " exceeds 1 at t = " +
                                  std::to_string(t),
                              norm);
        Eigen::VectorXcd c(d);
        for (int j = 0; j < d; ++j) c(j) = std::exp(-iu * terms.frame_energies(j) * t) * b(j);
        traj.times.push_back(t);
        traj.coeffs.push_back(std::move(c));
    };
    record(0.0);

    for (long s = 0; s < n_steps; ++s) {
        const double t = static_cast<double>(s) * dt;
        const Eigen::VectorXcd k1 = terms.generator(t, cutoff) * b;
        const Eigen::MatrixXcd g_mid = terms.generator(t + 0.5 * dt, cutoff);
        const Eigen::VectorXcd k2 = g_mid * (b + (0.5 * dt) * k1);
        const Eigen::VectorXcd k3 = g_mid * (b + (0.5 * dt) * k2);
        const Eigen::VectorXcd k4 = terms.generator(t + dt, cutoff) * (b + dt * k3);
        b += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s + 1) % stride == 0 || s + 1 == n_steps) record(static_cast<double>(s + 1) * dt);
    }
    return traj;
}

// ---- readout ----

namespace {

double integrate_window(const std::vector<double>& t, const std::vector<double>& v, size_t i0,
                        size_t i1) {
    double acc = 0.0;
    for (size_t i = i0; i < i1; ++i) acc += 0.5 * (t[i + 1] - t[i]) * (v[i] + v[i + 1]);
    return acc;
}

}  // namespace

double estimate_npcr(const AmplitudeTrajectory& traj, const DressedBasis& basis, int n_photons) {
    if (traj.times.size() < 16)
        throw std::invalid_argument("trajectory too short for a converged estimate");
    const Eigen::MatrixXcd w = multiphoton_op(basis, n_photons);
    if (w.rows() != traj.coeffs.front().size())
        throw std::invalid_argument("basis dimension does not match the trajectory");

    // The raw coefficients only lose norm, so a plain time average of the raw
    // signal dies with the horizon.  The estimate instead weights each instant
    // by the surviving population: integral of the raw expectation over the
    // integral of the squared norm.  For dynamics that reset to the ground
    // state after an emission this ratio is the regenerative-cycle average of
    // the observable, and it stops depending on the horizon once the norm has
    // drained.
    const size_t n = traj.times.size();
    std::vector<double> raw(n), weight(n);
    for (size_t i = 0; i < n; ++i) {
        weight[i] = traj.coeffs[i].squaredNorm();
        raw[i] = (traj.coeffs[i].adjoint() * w * traj.coeffs[i])(0).real();
    }

    auto ratio_up_to = [&](size_t i1) {
        const double denom = integrate_window(traj.times, weight, 0, i1);
        if (denom <= 0.0)
            throw SolverError("survival weight integral vanished", denom);
        return integrate_window(traj.times, raw, 0, i1) / denom;
    };
    size_t half = 0;
    while (half + 1 < n && traj.times[half] < 0.5 * traj.times.back() - 1e-12) ++half;
    if (n - half < 8) throw std::invalid_argument("trailing half holds too few samples");

    const double est_half = ratio_up_to(half);
    const double est_full = ratio_up_to(n - 1);
    const double scale = std::max(std::abs(est_half), std::abs(est_full));
    if (scale > 1e-30) {
        const double drift = std::abs(est_full - est_half) / scale;
        if (drift > 0.05)
            throw SolverError("estimate still drifts by " + std::to_string(drift) +
                                  " when the horizon is doubled; extend the trajectory",
                              drift);
    }
    return est_full;
}

double default_step(const HarmonicTerms& terms, int cutoff) {
    const double scale =
        std::max(terms.max_kept_frequency(cutoff), terms.max_element_scale(cutoff));
    return scale > 0.0 ? 0.045 / scale : 0.045;
}

double two_state_rho00(double e_amp, double kappa, double gamma_i) {
    if (e_amp < 0.0) throw std::invalid_argument("drive amplitude must be non-negative");
    if (!(kappa > 0.0) || gamma_i < 0.0) throw std::invalid_argument("rates out of range");
    const double width = kappa + 0.5 * gamma_i;
    return 1.0 - e_amp * e_amp / (0.5 * width * width + 2.0 * e_amp * e_amp);
}

}  // namespace jcs
