#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "jcs/ensemble.hpp"
#include "jcs/errors.hpp"
#include "jcs/params.hpp"
#include "jcs/steady.hpp"

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;

std::vector<double> make_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double x = lo; x <= hi + 1e-12; x += step) g.push_back(x);
    return g;
}

std::string write_temp(const char* name, const char* text) {
    const std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("delta distribution is a single unit node") {
    const jcs::CouplingDistribution d = jcs::pg_delta(63.0);
    REQUIRE(d.nodes.size() == 1);
    CHECK(d.nodes[0].g == 63.0);
    CHECK(d.nodes[0].weight == 1.0);
    CHECK(d.kind == jcs::DistKind::Delta);
    d.validate();
    CHECK_THROWS_AS(jcs::pg_delta(0.0), std::invalid_argument);
}

TEST_CASE("tem00 quadrature weights the low couplings") {
    const jcs::CouplingDistribution d = jcs::pg_tem00(78.75);
    double sum = 0.0, low = 0.0, high = 0.0;
    for (const auto& n : d.nodes) {
        sum += n.weight;
        if (n.g < 0.5 * 78.75) low += n.weight;
        if (n.g > 0.9 * 78.75) high += n.weight;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(low > high);
    for (size_t i = 1; i < d.nodes.size(); ++i) CHECK(d.nodes[i].g > d.nodes[i - 1].g);

    // Mask shrunk onto the antinode: all weight lands in the top bin.
    const jcs::CouplingDistribution point = jcs::pg_tem00(63.0, 1e-9, 1e-9, 1.0, 1.0, 24);
    REQUIRE(point.nodes.size() == 1);
    CHECK(point.nodes[0].weight == 1.0);
    CHECK(point.nodes[0].g > 63.0 * (1.0 - 1.0 / 24.0));

    CHECK_THROWS_AS(jcs::pg_tem00(63.0, 0.0, 1.0, 1.0, 1.0, 24), std::invalid_argument);
    CHECK_THROWS_AS(jcs::pg_tem00(63.0, 0.3, 1.0, 1.0, 1.0, 24), std::invalid_argument);
    CHECK_THROWS_AS(jcs::pg_tem00(-1.0, 0.25, 1.0, 1.0, 1.0, 24), std::invalid_argument);
    CHECK_THROWS_AS(jcs::pg_tem00(63.0, 0.25, 1.0, 1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("tabulated distribution parses, sorts, and renormalizes") {
    const std::string ok =
        write_temp("dist_ok.csv", "# coupling, weight\n63.0, 2.0\n31.5, 1.0\n47.25, 1.0\n");
    std::string warning;
    const jcs::CouplingDistribution d = jcs::pg_table(ok, &warning);
    REQUIRE(d.nodes.size() == 3);
    CHECK(d.nodes[0].g == 31.5);
    CHECK(d.nodes[2].g == 63.0);
    CHECK(d.nodes[2].weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.g_max == 63.0);
    CHECK(!warning.empty());

    const std::string exact = write_temp("dist_exact.csv", "63.0 0.25\n31.5 0.75\n");
    warning.clear();
    jcs::pg_table(exact, &warning);
    CHECK(warning.empty());

    CHECK_THROWS_AS(jcs::pg_table("/tmp/does_not_exist_dist.csv"), jcs::ConfigError);
    CHECK_THROWS_AS(jcs::pg_table(write_temp("dist_bad.csv", "63.0\n")), jcs::ConfigError);
    CHECK_THROWS_AS(jcs::pg_table(write_temp("dist_neg.csv", "63.0 -0.5\n31.5 1.5\n")),
                    jcs::ConfigError);
    CHECK_THROWS_AS(jcs::pg_table(write_temp("dist_dup.csv", "63.0 0.5\n63.0 0.5\n")),
                    jcs::ConfigError);
    CHECK_THROWS_AS(jcs::pg_table(write_temp("dist_empty.csv", "# nothing\n")), jcs::ConfigError);
    CHECK_THROWS_AS(jcs::pg_table(write_temp("dist_extra.csv", "63.0 0.5 9\n")), jcs::ConfigError);

    try {
        jcs::pg_table(write_temp("dist_line.csv", "63.0 0.5\noops 0.5\n"));
        FAIL("expected ConfigError");
    } catch (const jcs::ConfigError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("averaging over the delta distribution is the pointwise scan") {
    jcs::SystemParams p;
    const std::vector<double> grid = make_grid(-1.1, -0.9, 0.05);
    const jcs::Spectrum s = jcs::average_spectrum(p, jcs::pg_delta(p.g_f), grid, 1, 1);

    REQUIRE(s.delta3 == grid);
    for (size_t i = 0; i < grid.size(); ++i) {
        jcs::SystemParams pi = p;
        pi.deltas_tilde.back() = grid[i];
        const jcs::BlochSolution sol = jcs::solve_steady(p.g_f, pi, 1);
        CHECK(s.npcr[i] == jcs::npcr(sol, 3));
        CHECK(s.rho00[i] == jcs::rho00(sol));
        CHECK(s.rho33pp[i] == jcs::density_element(sol, 3, 1, 3, 1).real());
        CHECK(s.npcr[i] >= 0.0);
    }
}

TEST_CASE("two equal nodes average to the arithmetic mean") {
    jcs::SystemParams p;
    const std::vector<double> grid = make_grid(0.9, 1.1, 0.1);

    jcs::CouplingDistribution two;
    two.kind = jcs::DistKind::Tabulated;
    two.g_max = p.g_f;
    two.nodes = {{0.9 * p.g_f, 0.5}, {p.g_f, 0.5}};

    const jcs::Spectrum s2 = jcs::average_spectrum(p, two, grid, 1, 1);
    const jcs::Spectrum sa = jcs::average_spectrum(p, jcs::pg_delta(0.9 * p.g_f), grid, 1, 1);
    const jcs::Spectrum sb = jcs::average_spectrum(p, jcs::pg_delta(p.g_f), grid, 1, 1);
    for (size_t i = 0; i < grid.size(); ++i)
        CHECK(s2.npcr[i] ==
              doctest::Approx(0.5 * sa.npcr[i] + 0.5 * sb.npcr[i]).epsilon(1e-12));
}

TEST_CASE("averaging is linear in the distribution") {
    jcs::SystemParams p;
    const std::vector<double> grid = make_grid(0.95, 1.05, 0.05);
    const double alpha = 0.3;

    const jcs::CouplingDistribution d1 = jcs::pg_delta(0.8 * p.g_f);
    const jcs::CouplingDistribution d2 = jcs::pg_delta(1.1 * p.g_f);
    jcs::CouplingDistribution mix;
    mix.kind = jcs::DistKind::Tabulated;
    mix.g_max = 1.1 * p.g_f;
    mix.nodes = {{0.8 * p.g_f, alpha}, {1.1 * p.g_f, 1.0 - alpha}};

    const jcs::Spectrum sm = jcs::average_spectrum(p, mix, grid, 1, 1);
    const jcs::Spectrum s1 = jcs::average_spectrum(p, d1, grid, 1, 1);
    const jcs::Spectrum s2 = jcs::average_spectrum(p, d2, grid, 1, 1);
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(sm.npcr[i] ==
              doctest::Approx(alpha * s1.npcr[i] + (1.0 - alpha) * s2.npcr[i]).epsilon(1e-12));
        CHECK(sm.rho00[i] ==
              doctest::Approx(alpha * s1.rho00[i] + (1.0 - alpha) * s2.rho00[i]).epsilon(1e-12));
    }
}

TEST_CASE("worker count never changes the numbers") {
    jcs::SystemParams p;
    const std::vector<double> grid = make_grid(-3.2, -3.0, 0.05);
    jcs::CouplingDistribution two;
    two.kind = jcs::DistKind::Tabulated;
    two.g_max = p.g_f;
    two.nodes = {{0.9 * p.g_f, 0.5}, {p.g_f, 0.5}};

    const jcs::Spectrum s1 = jcs::average_spectrum(p, two, grid, 1, 1);
    const jcs::Spectrum s4 = jcs::average_spectrum(p, two, grid, 1, 4);
    CHECK(s1.npcr == s4.npcr);
    CHECK(s1.rho00 == s4.rho00);
    CHECK(s1.rho33pp == s4.rho33pp);
}

TEST_CASE("background combination telescopes to zero when tones 1 and 2 are idle") {
    // Synthetic runs whose rate ignores the first two drive amplitudes.
    jcs::Spectrum a, b, c, d;
    a.delta3 = b.delta3 = c.delta3 = d.delta3 = {0.0, 0.5, 1.0};
    a.npcr = b.npcr = c.npcr = d.npcr = {3e-3, 4e-3, 5e-3};
    a.rho00 = b.rho00 = c.rho00 = d.rho00 = {0.9, 0.9, 0.9};
    a.rho33pp = b.rho33pp = c.rho33pp = d.rho33pp = {1e-3, 1e-3, 1e-3};

    const jcs::Spectrum diff = jcs::combine_background(a, b, c, d);
    for (double v : diff.npcr) CHECK(v == 0.0);

    jcs::Spectrum shifted = b;
    shifted.delta3 = {0.0, 0.25, 1.0};
    CHECK_THROWS_AS(jcs::combine_background(a, shifted, c, d), std::invalid_argument);
}

TEST_CASE("background of an undriven system vanishes") {
    jcs::SystemParams p;
    p.amps = {0.0, 0.0, 0.0};
    const std::vector<double> grid = make_grid(0.9, 1.1, 0.1);
    const jcs::Spectrum diff =
        jcs::background_subtracted(p, jcs::pg_delta(p.g_f), grid, 1, 1);
    for (double v : diff.npcr) CHECK(v == 0.0);
}

TEST_CASE("surface layout is row-major over the coupling grid") {
    jcs::SystemParams p;
    const std::vector<double> gg = {0.9, 1.0, 1.1};
    const std::vector<double> dd = {0.95, 1.0, 1.05};
    const jcs::SpectrumSurface s = jcs::surface(p, gg, dd, 1, 2);

    REQUIRE(s.npcr.size() == 9);
    for (size_t ig : {size_t{0}, size_t{2}}) {
        for (size_t id : {size_t{0}, size_t{1}}) {
            jcs::SystemParams pi = p;
            pi.deltas_tilde.back() = dd[id];
            const jcs::BlochSolution sol = jcs::solve_steady(gg[ig] * p.g_f, pi, 1);
            CHECK(s.npcr[ig * dd.size() + id] == jcs::npcr(sol, 3));
            CHECK(std::isfinite(s.npcr[ig * dd.size() + id]));
        }
    }
}

TEST_CASE("extrema detection walks topographic prominence") {
    const std::vector<double> grid = make_grid(0.0, 2.0, 0.1);

    std::vector<double> mono;
    for (double x : grid) mono.push_back(0.3 * x);
    CHECK(jcs::find_extrema(grid, mono, 0.0).empty());

    std::vector<double> bump;
    for (double x : grid) bump.push_back(std::exp(-(x - 1.0) * (x - 1.0) / 0.02));
    const auto peaks = jcs::find_extrema(grid, bump, 0.5);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].is_peak);
    CHECK(peaks[0].delta3 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(peaks[0].prominence == doctest::Approx(1.0).epsilon(1e-3));

    std::vector<double> valley;
    for (double x : grid) valley.push_back(-std::exp(-(x - 1.0) * (x - 1.0) / 0.02));
    const auto dips = jcs::find_extrema(grid, valley, 0.5);
    REQUIRE(dips.size() == 1);
    CHECK(!dips[0].is_peak);

    // A tiny ripple is filtered out by the threshold.
    std::vector<double> ripple(grid.size(), 0.5);
    ripple[10] += 1e-4;
    CHECK(jcs::find_extrema(grid, ripple, 1e-3).empty());
    CHECK(jcs::find_extrema(grid, ripple, 1e-5).size() == 1);

    std::vector<double> bad_grid = {0.0, 0.1, 0.3, 0.4};
    CHECK_THROWS_AS(jcs::find_extrema(bad_grid, {0, 1, 0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("three-photon peaks sit on the resonance algebra") {
    jcs::SystemParams p;
    const double targets[] = {kSqrt3 - kSqrt2, -(kSqrt3 + kSqrt2)};
    const double lo[] = {0.24, -3.24};
    for (int t = 0; t < 2; ++t) {
        const std::vector<double> grid = make_grid(lo[t], lo[t] + 0.16, 0.02);
        const jcs::Spectrum s = jcs::average_spectrum(p, jcs::pg_delta(p.g_f), grid, 1, 1);
        const auto found = jcs::find_extrema(s.delta3, s.npcr, 0.0);
        REQUIRE(!found.empty());
        bool hit = false;
        for (const auto& e : found)
            if (e.is_peak && std::abs(e.delta3 - targets[t]) <= 0.0201) hit = true;
        CHECK(hit);
    }
}
