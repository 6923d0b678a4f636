#include "jcs/config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "jcs/csv.hpp"
#include "jcs/errors.hpp"

namespace jcs {
namespace {

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value, int line_no) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
        throw ConfigError("value for '" + key + "' is not a number: '" + v + "'", line_no);
    return x;
}

int parse_int(const std::string& key, const std::string& value, int line_no) {
    const double x = parse_double(key, value, line_no);
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 0.0)
        throw ConfigError("value for '" + key + "' must be an integer: '" + trim(value) + "'",
                          line_no);
    return i;
}

void require(bool ok, const std::string& invariant, int line_no) {
    if (!ok) throw ConfigError(invariant, line_no);
}

}  // namespace

std::vector<double> GridSpec::expand() const {
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
    return out;
}

std::string GridSpec::text() const {
    return format_g9(lo) + ":" + format_g9(hi) + ":" + format_g9(step);
}

GridSpec parse_grid_spec(const std::string& text, int line_no) {
    std::string t = trim(text);
    for (char& c : t)
        if (c == ':') c = ' ';
    std::istringstream in(t);
    GridSpec g;
    char extra;
    if (!(in >> g.lo >> g.hi >> g.step) || (in >> extra))
        throw ConfigError("grid must be 'lo:hi:step': '" + trim(text) + "'", line_no);
    require(g.step > 0.0, "grid step must be positive", line_no);
    require(g.hi >= g.lo, "grid upper bound must not be below the lower bound", line_no);
    require((g.hi - g.lo) / g.step <= 2e6, "grid has too many points", line_no);
    return g;
}

std::string DistSpec::text() const {
    switch (choice) {
        case DistChoice::Delta: return "delta";
        case DistChoice::Tem00: return "tem00";
        case DistChoice::Table: return "table:" + table_path;
    }
    return {};
}

DistSpec parse_dist_spec(const std::string& text, int line_no) {
    const std::string t = trim(text);
    DistSpec d;
    if (t == "delta") {
        d.choice = DistChoice::Delta;
    } else if (t == "tem00") {
        d.choice = DistChoice::Tem00;
    } else if (t.rfind("table:", 0) == 0) {
        d.choice = DistChoice::Table;
        d.table_path = trim(t.substr(6));
        require(!d.table_path.empty(), "table distribution needs a path: 'table:PATH'", line_no);
    } else {
        throw ConfigError("distribution must be delta, tem00, or table:PATH; got '" + t + "'",
                          line_no);
    }
    return d;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);

        if (key == "gamma_I") {
            cfg.params.gamma_i = parse_double(key, value, line_no);
            require(cfg.params.gamma_i >= 0.0, "gamma_I must be non-negative", line_no);
        } else if (key == "g_f") {
            cfg.params.g_f = parse_double(key, value, line_no);
            require(cfg.params.g_f > 0.0, "g_f must be positive", line_no);
        } else if (key == "E1" || key == "E2" || key == "E3") {
            const size_t m = static_cast<size_t>(key[1] - '1');
            cfg.params.amps[m] = parse_double(key, value, line_no);
            require(cfg.params.amps[m] >= 0.0, key + " must be non-negative", line_no);
        } else if (key == "delta2_tilde") {
            cfg.params.deltas_tilde[0] = parse_double(key, value, line_no);
        } else if (key == "delta3_tilde") {
            cfg.params.deltas_tilde[1] = parse_double(key, value, line_no);
        } else if (key == "n_couplets") {
            cfg.params.n_couplets = parse_int(key, value, line_no);
            require(cfg.params.n_couplets >= 1, "n_couplets must be at least 1", line_no);
        } else if (key == "q") {
            cfg.q = parse_int(key, value, line_no);
            require(cfg.q >= 0, "q must be non-negative", line_no);
        } else if (key == "delta3_grid") {
            cfg.delta3_grid = parse_grid_spec(value, line_no);
        } else if (key == "g_grid") {
            cfg.g_grid = parse_grid_spec(value, line_no);
            require(cfg.g_grid.lo > 0.0, "g_grid couplings must be positive", line_no);
        } else if (key == "distribution") {
            cfg.dist = parse_dist_spec(value, line_no);
        } else if (key == "g_max_ratio") {
            cfg.g_max_ratio = parse_double(key, value, line_no);
            require(cfg.g_max_ratio > 0.0, "g_max_ratio must be positive", line_no);
        } else if (key == "dist_nodes") {
            cfg.dist_nodes = parse_int(key, value, line_no);
            require(cfg.dist_nodes >= 1, "dist_nodes must be at least 1", line_no);
        } else if (key == "est_cutoff") {
            cfg.est_cutoff = parse_int(key, value, line_no);
            require(cfg.est_cutoff >= 0, "est_cutoff must be non-negative", line_no);
        } else if (key == "est_t_final") {
            cfg.est_t_final = parse_double(key, value, line_no);
            require(cfg.est_t_final > 0.0, "est_t_final must be positive", line_no);
        } else if (key == "est_dt") {
            cfg.est_dt = parse_double(key, value, line_no);
            require(cfg.est_dt >= 0.0, "est_dt must be non-negative", line_no);
        } else if (key == "workers") {
            cfg.workers = parse_int(key, value, line_no);
            require(cfg.workers >= 0, "workers must be non-negative", line_no);
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
    }

    try {
        cfg.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::vector<std::string> describe(const RunConfig& cfg, int effective_q) {
    std::vector<std::string> out;
    out.push_back(std::string("version = ") + kArtifactVersion);
    out.push_back("kappa = 1");
    out.push_back("gamma_I = " + format_g9(cfg.params.gamma_i));
    out.push_back("g_f = " + format_g9(cfg.params.g_f));
    for (size_t m = 0; m < cfg.params.amps.size(); ++m)
        out.push_back("E" + std::to_string(m + 1) + " = " + format_g9(cfg.params.amps[m]));
    out.push_back("delta2_tilde = " + format_g9(cfg.params.deltas_tilde[0]));
    out.push_back("delta3_tilde = " + format_g9(cfg.params.deltas_tilde[1]));
    out.push_back("n_couplets = " + std::to_string(cfg.params.n_couplets));
    out.push_back("q = " + std::to_string(effective_q));
    out.push_back("delta3_grid = " + cfg.delta3_grid.text());
    out.push_back("g_grid = " + cfg.g_grid.text());
    out.push_back("distribution = " + cfg.dist.text());
    out.push_back("g_max_ratio = " + format_g9(cfg.g_max_ratio));
    out.push_back("dist_nodes = " + std::to_string(cfg.dist_nodes));
    out.push_back("est_cutoff = " + std::to_string(cfg.est_cutoff));
    out.push_back("est_t_final = " + format_g9(cfg.est_t_final));
    out.push_back(cfg.est_dt > 0.0 ? "est_dt = " + format_g9(cfg.est_dt) : "est_dt = auto");
    return out;
}

}  // namespace jcs
