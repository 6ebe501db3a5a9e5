// Run configuration: sectioned key = value files, per-case defaults and
// validation. Every run is reproducible from its resolved configuration.

#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "poismg/benchmark.hpp"
#include "poismg/boundary.hpp"

namespace poismg {

enum class Command { None, Solve, Benchmark, Converge, Timing, Gengrid, Beam, Flow };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string command_name(Command c) {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::Benchmark: return "benchmark";
        case Command::Converge: return "converge";
        case Command::Timing: return "timing";
        case Command::Gengrid: return "gengrid";
        case Command::Beam: return "beam";
        case Command::Flow: return "flow";
        default: return "none";
    }
}

inline Command command_from_name(const std::string& s) {
    if (s == "solve") return Command::Solve;
    if (s == "benchmark") return Command::Benchmark;
    if (s == "converge") return Command::Converge;
    if (s == "timing") return Command::Timing;
    if (s == "gengrid") return Command::Gengrid;
    if (s == "beam") return Command::Beam;
    if (s == "flow") return Command::Flow;
    throw ConfigError("unknown command '" + s + "'");
}

struct RunConfig {
    Command command = Command::None;
    std::string case_name;  // per-command default applied by finalize_config

    // solver section
    SolverKind solver = SolverKind::Mg;
    double tol = 1e-10;
    double omega = 1.875;
    int levels = 32;
    int nu1 = 3;
    int nu2 = 3;
    int coarse_sweeps = 50;
    double omega_smooth = 1.0;
    int max_cycles = 200;
    int max_iters = 2000000;
    int reps = 3;
    NeumannTreatment neumann = NeumannTreatment::ZeroGradientCopy;
    ConvergenceCriterion criterion = ConvergenceCriterion::ResidualRms;

    // case section (0 / unset values resolved by finalize_config)
    int n = 0;
    std::vector<int> resolutions;
    double a = 2.0;
    double R = 5.0;
    double phi0 = 1.0;     // semi-annulus inner potential
    double b = 0.0;        // circle radius
    int n_mode = 8;
    double s = 5.0;        // beam stretch scale
    double alpha = 0.6;    // beam stretch rate
    double L = 0.0;        // domain edge length (beam / flow / gengrid)
    double rho0 = 100.0;
    double sigma = 0.5;
    double x0 = 0.0, y0 = 0.0;  // beam center
    std::vector<int> n_ref;     // beam reference resolutions
    double sub_x0 = -2.5, sub_xc = 2.5, sub_y0 = -2.5, sub_yc = 2.5;
    double amp = 10.0;     // sinusoidal deformation amplitude (spacings)
    int n_osc = 3;
    double phi_bottom = -1.0;
    double phi_top = 1.0;

    // output section
    std::string out_dir = "out";

    [[nodiscard]] SolveSpec solve_spec() const {
        SolveSpec spec;
        spec.kind = solver;
        spec.tol = tol;
        spec.omega = omega;
        spec.mg.nu1 = nu1;
        spec.mg.nu2 = nu2;
        spec.mg.coarse_sweeps = coarse_sweeps;
        spec.mg.omega_smooth = omega_smooth;
        spec.mg.max_levels = levels;
        spec.mg.max_cycles = max_cycles;
        spec.sor_max_iters = max_iters;
        return spec;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct ConfigParser {
    RunConfig& cfg;
    int line_no = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
    }

    double number(const std::string& key, const std::string& v) const {
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
            fail("key '" + key + "' expects a number, got '" + v + "'");
        return x;
    }

    int integer(const std::string& key, const std::string& v) const {
        const double x = number(key, v);
        if (x != std::floor(x)) fail("key '" + key + "' expects an integer, got '" + v + "'");
        return static_cast<int>(x);
    }

    std::vector<int> int_list(const std::string& key, const std::string& v) const {
        std::vector<int> out;
        std::istringstream ss(v);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) out.push_back(integer(key, tok));
        }
        if (out.empty()) fail("key '" + key + "' expects a comma-separated integer list");
        return out;
    }

    void set(const std::string& section, const std::string& key, const std::string& v) {
        if (section.empty()) {
            if (key == "command") cfg.command = command_from_name(v);
            else if (key == "case") cfg.case_name = v;
            else fail("unknown key '" + key + "' outside a section");
            return;
        }
        if (section == "solver") {
            if (key == "type") {
                if (v == "mg") cfg.solver = SolverKind::Mg;
                else if (v == "sor") cfg.solver = SolverKind::Sor;
                else fail("solver type must be 'mg' or 'sor', got '" + v + "'");
            } else if (key == "tol") cfg.tol = number(key, v);
            else if (key == "omega") cfg.omega = number(key, v);
            else if (key == "levels") cfg.levels = integer(key, v);
            else if (key == "nu1") cfg.nu1 = integer(key, v);
            else if (key == "nu2") cfg.nu2 = integer(key, v);
            else if (key == "coarse_sweeps") cfg.coarse_sweeps = integer(key, v);
            else if (key == "omega_smooth") cfg.omega_smooth = number(key, v);
            else if (key == "max_cycles") cfg.max_cycles = integer(key, v);
            else if (key == "max_iters") cfg.max_iters = integer(key, v);
            else if (key == "reps") cfg.reps = integer(key, v);
            else if (key == "neumann") {
                if (v == "copy") cfg.neumann = NeumannTreatment::ZeroGradientCopy;
                else if (v == "mirror") cfg.neumann = NeumannTreatment::MirrorGhost;
                else fail("neumann must be 'copy' or 'mirror', got '" + v + "'");
            } else if (key == "criterion") {
                if (v == "residual") cfg.criterion = ConvergenceCriterion::ResidualRms;
                else if (v == "update") cfg.criterion = ConvergenceCriterion::IterateDifference;
                else fail("criterion must be 'residual' or 'update', got '" + v + "'");
            } else fail("unknown key '" + key + "' in [solver]");
            return;
        }
        if (section == "case") {
            if (key == "name") cfg.case_name = v;
            else if (key == "n") cfg.n = integer(key, v);
            else if (key == "resolutions") cfg.resolutions = int_list(key, v);
            else if (key == "a") cfg.a = number(key, v);
            else if (key == "R") cfg.R = number(key, v);
            else if (key == "phi0") cfg.phi0 = number(key, v);
            else if (key == "b") cfg.b = number(key, v);
            else if (key == "n_mode") cfg.n_mode = integer(key, v);
            else if (key == "s") cfg.s = number(key, v);
            else if (key == "alpha") cfg.alpha = number(key, v);
            else if (key == "L") cfg.L = number(key, v);
            else if (key == "rho0") cfg.rho0 = number(key, v);
            else if (key == "sigma") cfg.sigma = number(key, v);
            else if (key == "x0") cfg.x0 = number(key, v);
            else if (key == "y0") cfg.y0 = number(key, v);
            else if (key == "n_ref") cfg.n_ref = int_list(key, v);
            else if (key == "sub_x0") cfg.sub_x0 = number(key, v);
            else if (key == "sub_xc") cfg.sub_xc = number(key, v);
            else if (key == "sub_y0") cfg.sub_y0 = number(key, v);
            else if (key == "sub_yc") cfg.sub_yc = number(key, v);
            else if (key == "amp") cfg.amp = number(key, v);
            else if (key == "n_osc") cfg.n_osc = integer(key, v);
            else if (key == "phi_bottom") cfg.phi_bottom = number(key, v);
            else if (key == "phi_top") cfg.phi_top = number(key, v);
            else fail("unknown key '" + key + "' in [case]");
            return;
        }
        if (section == "output") {
            if (key == "dir") cfg.out_dir = v;
            else fail("unknown key '" + key + "' in [output]");
            return;
        }
        fail("unknown section [" + section + "]");
    }
};

}  // namespace detail

/// Fills per-command and per-case defaults for fields left unset.
inline void finalize_config(RunConfig& cfg) {
    if (cfg.case_name.empty()) {
        switch (cfg.command) {
            case Command::Benchmark:
            case Command::Converge:
            case Command::Timing:
            case Command::Solve: cfg.case_name = "semi_annulus"; break;
            case Command::Gengrid: cfg.case_name = "square_to_circle"; break;
            case Command::Flow: cfg.case_name = "circle"; break;
            default: break;
        }
    }
    if (cfg.b == 0.0) cfg.b = cfg.case_name == "circle_laplace" ? 1.0 : 2.0;
    if (cfg.L == 0.0) cfg.L = cfg.command == Command::Beam ? 6.0 : 10.0;
    if (cfg.n == 0) {
        if (cfg.case_name == "semi_annulus") cfg.n = 201;
        else if (cfg.command == Command::Beam) cfg.n = 129;
        else cfg.n = 257;
    }
    if (cfg.resolutions.empty()) {
        if (cfg.command == Command::Timing)
            cfg.resolutions = cfg.case_name == "semi_annulus" ? std::vector<int>{101, 201}
                                                              : std::vector<int>{129, 257};
        else
            cfg.resolutions = {33, 65, 129, 257};
    }
    if (cfg.n_ref.empty()) cfg.n_ref = {129, 257, 513};
}

/// Validates invariants shared by every command.
inline void validate_config(const RunConfig& cfg) {
    if (cfg.command == Command::None) throw ConfigError("no command given");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive, got " + std::to_string(cfg.tol));
    if (!(cfg.omega >= 1.0 && cfg.omega < 2.0))
        throw ConfigError("omega must lie in [1, 2), got " + std::to_string(cfg.omega));
    if (cfg.levels < 2) throw ConfigError("levels must be at least 2");
    if (cfg.nu1 < 0 || cfg.nu2 < 0 || cfg.nu1 + cfg.nu2 < 1)
        throw ConfigError("nu1/nu2 must be nonnegative with at least one sweep");
    if (cfg.coarse_sweeps < 1) throw ConfigError("coarse_sweeps must be positive");
    if (cfg.reps < 1) throw ConfigError("reps must be positive");
    if (cfg.n != 0 && cfg.n < 3) throw ConfigError("n must be at least 3");
    if (cfg.out_dir.empty()) throw ConfigError("output dir must not be empty");

    auto one_of = [&](std::initializer_list<const char*> names) {
        for (const char* s : names)
            if (cfg.case_name == s) return true;
        return false;
    };
    switch (cfg.command) {
        case Command::Solve:
        case Command::Benchmark:
        case Command::Converge:
        case Command::Timing:
            if (!one_of({"semi_annulus", "circle_poisson", "circle_laplace"}))
                throw ConfigError("unknown benchmark case '" + cfg.case_name + "'");
            break;
        case Command::Gengrid:
            if (!one_of({"square_to_circle", "embedded_circle", "arbitrary"}))
                throw ConfigError("unknown gengrid spec '" + cfg.case_name + "'");
            break;
        case Command::Flow:
            if (!one_of({"circle", "arbitrary"}))
                throw ConfigError("unknown flow obstacle '" + cfg.case_name + "'");
            break;
        default: break;
    }
}

/// Parses sectioned key = value text. Unknown keys, malformed values and
/// violated invariants are reported with the offending key and line.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    detail::ConfigParser p{cfg};
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        ++p.line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') p.fail("unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) p.fail("expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) p.fail("empty key");
        p.set(section, key, value);
    }
    if (cfg.command != Command::None) {
        finalize_config(cfg);
        validate_config(cfg);
    }
    return cfg;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["command"] = command_name(c.command);
    j["case"] = c.case_name;
    j["solver"] = {{"type", c.solver == SolverKind::Mg ? "mg" : "sor"},
                   {"tol", c.tol},
                   {"omega", c.omega},
                   {"levels", c.levels},
                   {"nu1", c.nu1},
                   {"nu2", c.nu2},
                   {"coarse_sweeps", c.coarse_sweeps},
                   {"omega_smooth", c.omega_smooth},
                   {"max_cycles", c.max_cycles},
                   {"max_iters", c.max_iters},
                   {"reps", c.reps},
                   {"neumann", c.neumann == NeumannTreatment::ZeroGradientCopy ? "copy" : "mirror"},
                   {"criterion",
                    c.criterion == ConvergenceCriterion::ResidualRms ? "residual" : "update"}};
    j["case_params"] = {{"n", c.n},
                        {"resolutions", c.resolutions},
                        {"a", c.a},
                        {"R", c.R},
                        {"phi0", c.phi0},
                        {"b", c.b},
                        {"n_mode", c.n_mode},
                        {"s", c.s},
                        {"alpha", c.alpha},
                        {"L", c.L},
                        {"rho0", c.rho0},
                        {"sigma", c.sigma},
                        {"x0", c.x0},
                        {"y0", c.y0},
                        {"n_ref", c.n_ref},
                        {"sub_x0", c.sub_x0},
                        {"sub_xc", c.sub_xc},
                        {"sub_y0", c.sub_y0},
                        {"sub_yc", c.sub_yc},
                        {"amp", c.amp},
                        {"n_osc", c.n_osc},
                        {"phi_bottom", c.phi_bottom},
                        {"phi_top", c.phi_top}};
    j["output"] = {{"dir", c.out_dir}};
    return j;
}

}  // namespace poismg
