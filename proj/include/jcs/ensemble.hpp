#pragma once

#include <string>
#include <vector>

#include "jcs/params.hpp"

namespace jcs {

enum class DistKind { Delta, Tem00, Tabulated };

// Discrete quadrature model of the coupling-strength distribution P(g).
struct CouplingDistribution {
    struct Node {
        double g = 0.0;
        double weight = 0.0;
    };

    std::vector<Node> nodes;  // ascending g >= 0, weights >= 0 summing to 1
    DistKind kind = DistKind::Delta;
    double g_max = 0.0;

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

// Point distribution: every atom couples at exactly g_f.
CouplingDistribution pg_delta(double g_f);

// Atom pinned at random transverse positions of a standing-wave TEM00 mode:
// g(x, y) = g_max cos(2 pi x / wavelength) exp(-(y / waist)^2), sampled on a
// deterministic midpoint grid over the mask |x| <= x_half, |y| <= y_half and
// histogrammed into node_count bins over (0, g_max]. Zero-weight bins are
// dropped. x_half may not exceed wavelength/4: the mask must stay inside one
// antinode so g never changes sign.
CouplingDistribution pg_tem00(double g_max, double x_half, double y_half, double waist,
                              double wavelength, int node_count);

// Canonical mask: a quarter-wavelength across the standing wave and two waists
// along it, 24 bins.
CouplingDistribution pg_tem00(double g_max);

// Two-column CSV (g, weight), '#' comments allowed. Weights are renormalized;
// if their sum is off unity by more than 1e-6 a note is appended to *warning
// (when given). Throws ConfigError with the offending line number.
CouplingDistribution pg_table(const std::string& path, std::string* warning = nullptr);

// One scan over the third-tone detuning. For plain averages npcr is
// non-negative; background_subtracted stores a signed combination in it.
struct Spectrum {
    std::vector<double> delta3;  // strictly increasing
    std::vector<double> npcr;
    std::vector<double> rho00;
    std::vector<double> rho33pp;
    std::vector<double> active_amps;  // drive amplitudes the run used
};

// Rectangular (g_tilde, delta3) sweep at the delta distribution.
// Values are row-major: v[ig * delta3.size() + id].
struct SpectrumSurface {
    std::vector<double> g_tilde;
    std::vector<double> delta3;
    std::vector<double> npcr;
    std::vector<double> rho00;
    std::vector<double> rho33pp;
};

// P(g)-weighted steady-state observables per grid point. Solves run
// concurrently across workers; aggregation order is fixed by grid index, so
// the result is byte-identical for any worker count. A point whose truncated
// three-photon trace breaches the round-off clamp is re-solved with up to
// two extra harmonic layers; solver failures that survive the retries are
// rethrown with the offending (g, delta3) attached.
Spectrum average_spectrum(const SystemParams& p, const CouplingDistribution& dist,
                          const std::vector<double>& grid, int q, int workers);

// Four-run combination isolating the genuinely three-tone pathways:
// all drives on, minus tone 1 off, minus tone 2 off, plus tones 1 and 2 off.
// rho00/rho33pp carry the all-on run for context.
Spectrum background_subtracted(const SystemParams& p, const CouplingDistribution& dist,
                               const std::vector<double>& grid, int q, int workers);

// The combination step of background_subtracted, exposed so the telescoping
// identity can be exercised on synthetic inputs. Grids must match exactly.
Spectrum combine_background(const Spectrum& all_on, const Spectrum& no_tone1,
                            const Spectrum& no_tone2, const Spectrum& neither);

SpectrumSurface surface(const SystemParams& p, const std::vector<double>& g_tilde_grid,
                        const std::vector<double>& delta3_grid, int q, int workers);

struct Extremum {
    int index = 0;
    double delta3 = 0.0;
    double value = 0.0;
    bool is_peak = true;  // false: dip
    double prominence = 0.0;
};

// Discrete local extrema on a uniform grid whose topographic prominence
// reaches min_prominence, ordered by grid position.
std::vector<Extremum> find_extrema(const std::vector<double>& grid,
                                   const std::vector<double>& values, double min_prominence);

}  // namespace jcs
