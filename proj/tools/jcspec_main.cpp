// Command-line front end: deterministic CSV emission of spectra, surfaces,
// background-subtracted scans, the six-point survey table, and a built-in
// validation pass. All rates are expressed in units of kappa, all normalized
// detunings in units of g_f, so the emitted files are unit-free.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "jcs/config.hpp"
#include "jcs/csv.hpp"
#include "jcs/ensemble.hpp"
#include "jcs/errors.hpp"
#include "jcs/jc.hpp"
#include "jcs/oracle.hpp"
#include "jcs/pathway.hpp"
#include "jcs/steady.hpp"
#include "jcs/threading.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw jcs::ConfigError("cannot read config file '" + path + "'");
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

jcs::CouplingDistribution make_distribution(const jcs::RunConfig& cfg) {
    switch (cfg.dist.choice) {
        case jcs::DistChoice::Delta:
            return jcs::pg_delta(cfg.params.g_f);
        case jcs::DistChoice::Tem00:
            return jcs::pg_tem00(cfg.g_max_ratio * cfg.params.g_f, 0.25, 2.0, 1.0, 1.0,
                                 cfg.dist_nodes);
        case jcs::DistChoice::Table: {
            std::string warning;
            jcs::CouplingDistribution d = jcs::pg_table(cfg.dist.table_path, &warning);
            if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
            return d;
        }
    }
    throw jcs::ConfigError("unreachable distribution kind");
}

std::string out_path(const jcs::RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::vector<std::string> meta_lines(const jcs::RunConfig& cfg, const std::string& command,
                                    int effective_q) {
    std::vector<std::string> meta = {"command = " + command};
    for (std::string& line : jcs::describe(cfg, effective_q)) meta.push_back(std::move(line));
    return meta;
}

void report_written(const std::string& path, size_t rows) {
    std::cout << "wrote " << path << " (" << rows << " rows)\n";
}

int cmd_spectrum(const jcs::RunConfig& cfg) {
    const int q = cfg.scan_q();
    const jcs::Spectrum s = jcs::average_spectrum(cfg.params, make_distribution(cfg),
                                                  cfg.delta3_grid.expand(), q,
                                                  jcs::resolve_workers(cfg.workers));
    jcs::CsvTable t;
    t.meta = meta_lines(cfg, "spectrum", q);
    t.columns = {"delta3_tilde", "npcr", "rho00", "rho33pp"};
    for (size_t i = 0; i < s.delta3.size(); ++i)
        t.rows.push_back({s.delta3[i], s.npcr[i], s.rho00[i], s.rho33pp[i]});
    const std::string path = out_path(cfg, "spectrum.csv");
    jcs::write_text_file(path, jcs::render_csv(t));
    report_written(path, t.rows.size());
    return 0;
}

int cmd_surface(const jcs::RunConfig& cfg) {
    const int q = cfg.scan_q();
    const std::vector<double> gg = cfg.g_grid.expand();
    const std::vector<double> dd = cfg.delta3_grid.expand();
    const jcs::SpectrumSurface s =
        jcs::surface(cfg.params, gg, dd, q, jcs::resolve_workers(cfg.workers));

    jcs::CsvTable t;
    t.meta = meta_lines(cfg, "surface", q);
    t.columns = {"g_tilde", "delta3_tilde", "npcr", "rho00", "rho33pp"};
    for (size_t ig = 0; ig < gg.size(); ++ig)
        for (size_t id = 0; id < dd.size(); ++id) {
            const size_t at = ig * dd.size() + id;
            t.rows.push_back({gg[ig], dd[id], s.npcr[at], s.rho00[at], s.rho33pp[at]});
        }
    const std::string path = out_path(cfg, "surface.csv");
    jcs::write_text_file(path, jcs::render_csv(t));
    report_written(path, t.rows.size());
    return 0;
}

int cmd_background(const jcs::RunConfig& cfg) {
    const int q = cfg.scan_q();
    const int workers = jcs::resolve_workers(cfg.workers);
    const jcs::CouplingDistribution dist = make_distribution(cfg);
    const std::vector<double> grid = cfg.delta3_grid.expand();

    jcs::SystemParams no1 = cfg.params;
    no1.amps[0] = 0.0;
    jcs::SystemParams no2 = cfg.params;
    no2.amps[1] = 0.0;
    jcs::SystemParams neither = no1;
    neither.amps[1] = 0.0;

    const jcs::Spectrum all_on = jcs::average_spectrum(cfg.params, dist, grid, q, workers);
    const jcs::Spectrum s1 = jcs::average_spectrum(no1, dist, grid, q, workers);
    const jcs::Spectrum s2 = jcs::average_spectrum(no2, dist, grid, q, workers);
    const jcs::Spectrum s0 = jcs::average_spectrum(neither, dist, grid, q, workers);
    const jcs::Spectrum diff = jcs::combine_background(all_on, s1, s2, s0);

    jcs::CsvTable t;
    t.meta = meta_lines(cfg, "background", q);
    t.columns = {"delta3_tilde",  "npcr_all_on",     "npcr_tone1_off", "npcr_tone2_off",
                 "npcr_both_off", "npcr_subtracted", "rho00",          "rho33pp"};
    for (size_t i = 0; i < grid.size(); ++i)
        t.rows.push_back({grid[i], all_on.npcr[i], s1.npcr[i], s2.npcr[i], s0.npcr[i],
                          diff.npcr[i], all_on.rho00[i], all_on.rho33pp[i]});
    const std::string path = out_path(cfg, "background.csv");
    jcs::write_text_file(path, jcs::render_csv(t));
    report_written(path, t.rows.size());
    return 0;
}

// The six survey operating points: the three-step cascade, the first ladder
// step, and the prominent off-resonant features on either side.
struct SurveyRow {
    double g_tilde;
    double delta3;
};

const std::vector<SurveyRow>& survey_rows() {
    static const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
    static const std::vector<SurveyRow> rows = {
        {s2 - 1.0, (s2 - 1.0) * (s2 - 1.0)},
        {1.0, 1.0},
        {1.0, s3 - s2},
        {1.0, -1.0},
        {1.0, -(s2 + 1.0)},
        {1.0, -(s3 + s2)},
    };
    return rows;
}

int cmd_table1(const jcs::RunConfig& cfg) {
    const int q = cfg.table_q();
    const int n = cfg.params.n_tones();
    const jcs::DressedBasis basis = jcs::build_basis(n);

    jcs::CsvTable t;
    t.meta = meta_lines(cfg, "table1", q);
    t.columns = {"g_tilde", "delta3_tilde", "npcr_solver", "npcr_estimator", "ratio"};
    std::printf("%10s %14s %14s %14s %8s\n", "g_tilde", "delta3_tilde", "solver", "estimator",
                "ratio");
    for (const SurveyRow& row : survey_rows()) {
        jcs::SystemParams p = cfg.params;
        p.deltas_tilde.back() = row.delta3;
        const double g = row.g_tilde * p.g_f;

        const double sol = jcs::npcr(jcs::solve_steady(g, p, q), n);
        const jcs::HarmonicTerms terms = jcs::build_heff_terms(g, p);
        const double dt =
            cfg.est_dt > 0.0 ? cfg.est_dt : jcs::default_step(terms, cfg.est_cutoff);
        const double est = jcs::estimate_npcr(
            jcs::integrate_amplitudes(terms, cfg.est_cutoff, cfg.est_t_final, dt), basis, n);

        t.rows.push_back({row.g_tilde, row.delta3, sol, est, est / sol});
        std::printf("%10.6f %14.6f %14.6e %14.6e %8.3f\n", row.g_tilde, row.delta3, sol, est,
                    est / sol);
    }
    const std::string path = out_path(cfg, "table1.csv");
    jcs::write_text_file(path, jcs::render_csv(t));
    report_written(path, t.rows.size());
    return 0;
}

// Built-in sanity pass over the reference operating point. Runs regardless
// of the configured physics so its anchors stay meaningful.
int cmd_validate(const jcs::RunConfig& cfg) {
    const int workers = jcs::resolve_workers(cfg.workers);
    bool all_ok = true;
    const auto check = [&all_ok](const std::string& name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        all_ok = all_ok && ok;
    };

    jcs::SystemParams ref;

    {
        jcs::SystemParams p = ref;
        p.amps = {ref.amps[0], 0.0, 0.0};
        const double r1 = jcs::rho00(jcs::solve_steady(p.g_f, p, 1));
        p.amps = {0.0, ref.amps[1], 0.0};
        const double r2 =
            jcs::rho00(jcs::solve_steady((std::sqrt(2.0) - 1.0) * p.g_f, p, 1));
        check("single-tone ground depletion matches the two-state closed forms",
              std::abs(r1 / (13.0 / 17.0) - 1.0) <= 0.05 &&
                  std::abs(r2 / (25.0 / 41.0) - 1.0) <= 0.05);
    }

    {
        const jcs::BlochSolution sol = jcs::solve_steady(ref.g_f, ref, cfg.table_q());
        bool ok = std::abs(sol.rho0().trace().real() - 1.0) <= 1e-10 && sol.residual <= 1e-10 &&
                  !sol.positivity_flagged;
        for (int i = 1; i < sol.indices.count(); ++i)
            ok = ok && std::abs(sol.rho[static_cast<size_t>(i)].trace()) <= 1e-10;
        for (int i = 0; i < sol.indices.count(); ++i) {
            std::vector<int> neg = sol.indices.ks[static_cast<size_t>(i)];
            for (int& c : neg) c = -c;
            const Eigen::MatrixXcd* partner = sol.rho_at(neg);
            ok = ok && partner &&
                 (*partner - sol.rho[static_cast<size_t>(i)].adjoint()).cwiseAbs().maxCoeff() <=
                     1e-10;
        }
        check("steady solution satisfies trace, pairing, and residual bounds", ok);
    }

    {
        const jcs::Superoperator Q = jcs::assemble_Q(ref.g_f, ref);
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Q.dim, Q.dim);
        for (int i = 0; i < Q.dim; ++i)
            for (int j = 0; j < Q.dim; ++j)
                m(i, j) = jcs::Complex(1.0 / (1.0 + i + j), 0.1 * (i - j));
        const Eigen::VectorXcd out =
            Q.mat * Eigen::Map<const Eigen::VectorXcd>(m.data(), Q.dim * Q.dim);
        jcs::Complex tr = 0.0;
        for (int i = 0; i < Q.dim; ++i) tr += out[i * Q.dim + i];
        check("static generator annihilates the trace", std::abs(tr) <= 1e-10);
    }

    {
        jcs::Spectrum a;
        a.delta3 = {0.0, 1.0};
        a.npcr = {2e-3, 3e-3};
        a.rho00 = {0.9, 0.9};
        a.rho33pp = {1e-3, 1e-3};
        const jcs::Spectrum diff = jcs::combine_background(a, a, a, a);
        check("background combination telescopes to zero on identical runs",
              diff.npcr[0] == 0.0 && diff.npcr[1] == 0.0);
    }

    {
        const std::vector<double> grid = {0.9, 1.0, 1.1};
        const jcs::CouplingDistribution dist = jcs::pg_delta(ref.g_f);
        const jcs::Spectrum s1 = jcs::average_spectrum(ref, dist, grid, 1, 1);
        const jcs::Spectrum s2 = jcs::average_spectrum(ref, dist, grid, 1, workers);
        jcs::CsvTable t1, t2;
        t1.columns = t2.columns = {"delta3_tilde", "npcr"};
        for (size_t i = 0; i < grid.size(); ++i) {
            t1.rows.push_back({s1.delta3[i], s1.npcr[i]});
            t2.rows.push_back({s2.delta3[i], s2.npcr[i]});
        }
        check("scan bytes are identical for any worker count",
              jcs::render_csv(t1) == jcs::render_csv(t2));
    }

    {
        jcs::SystemParams weak = ref;
        for (double& e : weak.amps) e *= 0.2;
        const int dim = 2 * weak.n_couplets + 1;
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(dim, dim);
        rho0(0, 0) = 1.0;
        const jcs::DensityTrajectory traj =
            jcs::integrate_master(weak.g_f, weak, rho0, 8.0, 1.2e-4);
        const double beat = jcs::slowest_beat_period(weak);
        const Eigen::MatrixXcd dc = jcs::dc_component(traj, 18.0 * beat);
        const jcs::BlochSolution sol = jcs::solve_steady(weak.g_f, weak, 2);
        check("time-domain average matches the harmonic steady state",
              (dc - sol.rho0()).cwiseAbs().maxCoeff() <= 1e-3);
    }

    std::cout << (all_ok ? "validation passed\n" : "validation FAILED\n");
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Driven cavity-ladder spectroscopy toolkit.\n"
        "Rates are in units of kappa; normalized detunings in units of g_f."};
    app.require_subcommand(1);

    std::string config_path, out_dir, grid, distribution;
    int workers = -1, q = -1;
    bool seedless = false;
    app.add_option("--config", config_path, "Key = value configuration file");
    app.add_option("--out", out_dir, "Output directory (default '.')");
    app.add_option("--workers", workers, "Worker threads; wall time only, never output bytes");
    app.add_option("--q", q, "Harmonic cutoff (default: 1 for scans, 2 for table1/validate)");
    app.add_option("--grid", grid, "delta3_tilde scan grid, 'lo:hi:step'");
    app.add_option("--distribution", distribution,
                   "Coupling distribution: delta | tem00 | table:PATH");
    app.add_flag("--seedless", seedless,
                 "Assert the run uses no randomness (always true; there is no RNG)");

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "Distribution-averaged spectrum over the delta3 grid");
    CLI::App* surface =
        app.add_subcommand("surface", "Pointwise spectrum surface over (g_tilde, delta3)");
    CLI::App* background =
        app.add_subcommand("background", "Four-run background-subtracted three-photon scan");
    CLI::App* table1 = app.add_subcommand(
        "table1", "Solver and pathway-estimator rates at the six survey points");
    CLI::App* validate =
        app.add_subcommand("validate", "Re-check reference anchors and structural invariants");
    // Global flags may follow the subcommand on the command line.
    for (CLI::App* sub : {spectrum, surface, background, table1, validate}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        jcs::RunConfig cfg =
            config_path.empty() ? jcs::parse_config("") : jcs::parse_config(read_file(config_path));
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (workers >= 0) cfg.workers = workers;
        if (q >= 0) cfg.q = q;
        if (!grid.empty()) cfg.delta3_grid = jcs::parse_grid_spec(grid);
        if (!distribution.empty()) cfg.dist = jcs::parse_dist_spec(distribution);

        if (spectrum->parsed()) return cmd_spectrum(cfg);
        if (surface->parsed()) return cmd_surface(cfg);
        if (background->parsed()) return cmd_background(cfg);
        if (table1->parsed()) return cmd_table1(cfg);
        if (validate->parsed()) return cmd_validate(cfg);
        return 1;
    } catch (const jcs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const jcs::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
