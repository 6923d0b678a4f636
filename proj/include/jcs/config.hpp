#pragma once

#include <string>
#include <vector>

#include "jcs/params.hpp"

namespace jcs {

// Inclusive scan range written as "lo:hi:step" in configs and flags.
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    // lo, lo + step, ... up to hi (a slack of 1e-9 * step keeps the endpoint).
    std::vector<double> expand() const;
    std::string text() const;
};

// "lo:hi:step" -> GridSpec. step must be positive and hi >= lo.
GridSpec parse_grid_spec(const std::string& text, int line_no = 0);

enum class DistChoice { Delta, Tem00, Table };

// Coupling-distribution selector: "delta", "tem00", or "table:PATH".
struct DistSpec {
    DistChoice choice = DistChoice::Delta;
    std::string table_path;

    std::string text() const;
};

DistSpec parse_dist_spec(const std::string& text, int line_no = 0);

// One fully validated run description. The defaults reproduce the reference
// operating point: kappa = gamma_I = 1, g_f = 63, E_1 = 1/sqrt(2),
// E_2 = E_3 = sqrt(2), tone 2 fixed on the second ladder step, tone 3
// scanned over delta3_grid. All rates are in units of kappa and all
// normalized detunings in units of g_f.
struct RunConfig {
    SystemParams params;
    GridSpec delta3_grid{-4.0, 2.0, 0.02};
    GridSpec g_grid{0.05, 1.25, 0.02};  // g-tilde, in units of g_f
    int q = 0;                          // harmonic cutoff; 0 = auto per command
    DistSpec dist;
    double g_max_ratio = 1.25;  // tem00 antinode coupling over g_f
    int dist_nodes = 24;        // tem00 histogram bins
    int est_cutoff = 2;         // pathway groups kept beyond the static block
    double est_t_final = 40.0;  // estimator horizon
    double est_dt = 0.0;        // estimator step; 0 derives one from the model scales
    int workers = 0;            // 0 = all hardware threads
    std::string out_dir = ".";

    // Effective harmonic cutoffs when q is left on auto. Grid scans are well
    // converged one harmonic deep; the survey rows need the second layer.
    int scan_q() const { return q > 0 ? q : 1; }
    int table_q() const { return q > 0 ? q : 2; }
};

// Parses a key = value document ('#' comments and blank lines allowed) into
// a validated RunConfig. Unknown keys, malformed values, and violated
// parameter constraints raise ConfigError carrying the offending line.
RunConfig parse_config(const std::string& text);

// Echo of the configuration, one "key = value" line per entry in a fixed
// order, with `effective_q` in place of the auto marker. Output metadata
// embeds these lines; workers and out_dir are omitted on purpose so the
// emitted bytes never depend on where or how wide the run executed.
std::vector<std::string> describe(const RunConfig& cfg, int effective_q);

}  // namespace jcs
