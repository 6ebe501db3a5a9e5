// Command execution: turns a validated RunConfig into artifacts on disk.
// Exit codes: 0 success, 1 runtime/I-O failure, 2 invalid configuration,
// 3 solver non-convergence, 4 convergence slopes outside the accepted band.

#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <variant>

#include <json.hpp>

#include "poismg/benchmark.hpp"
#include "poismg/cases.hpp"
#include "poismg/config.hpp"
#include "poismg/gridgen.hpp"
#include "poismg/io.hpp"

namespace poismg {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int runtime_error = 1;
inline constexpr int bad_config = 2;
inline constexpr int no_convergence = 3;
inline constexpr int out_of_band = 4;
}  // namespace exit_code

namespace detail {

inline BenchmarkCase benchmark_from_config(const RunConfig& cfg) {
    if (cfg.case_name == "semi_annulus") return semi_annulus_case(cfg.a, cfg.R, cfg.phi0);
    if (cfg.case_name == "circle_poisson") return circle_poisson_case(cfg.b);
    if (cfg.case_name == "circle_laplace") return circle_laplace_case(cfg.b, cfg.n_mode);
    throw ConfigError("unknown benchmark case '" + cfg.case_name + "'");
}

inline BuiltCase with_neumann(BuiltCase built, const RunConfig& cfg) {
    if (cfg.neumann == built.inst.bc.neumann) return built;
    BoundarySpec bc = built.inst.bc;
    bc.neumann = cfg.neumann;
    built.inst = make_instance(built.inst.grid, std::move(built.inst.tensor),
                              std::move(built.inst.rho), std::move(bc));
    return built;
}

inline nlohmann::json solve_summary(const RunConfig& cfg, const SolveResult& res) {
    nlohmann::json j;
    j["solver"] = cfg.solver == SolverKind::Mg ? "mg" : "sor";
    j[cfg.solver == SolverKind::Mg ? "cycles" : "iterations"] = res.iterations;
    j["final_residual"] = res.final_residual;
    j["converged"] = res.converged;
    j["wall_seconds"] = res.seconds;
    return j;
}

inline nlohmann::json hierarchy_summary(const MultigridHierarchy& h) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const ProblemInstance& lvl : h.levels)
        nodes.push_back({{"nx", lvl.grid.nx}, {"ny", lvl.grid.ny}});
    return {{"levels", h.depth()},
            {"nodes_per_level", nodes},
            {"nu1", h.opts.nu1},
            {"nu2", h.opts.nu2},
            {"coarse_sweeps", h.opts.coarse_sweeps},
            {"omega_smooth", h.opts.omega_smooth}};
}

inline void write_solution_files(const std::filesystem::path& dir, const RunConfig& cfg,
                                 const BuiltCase& built, const SolveResult& res,
                                 nlohmann::json& summary) {
    write_field_csv(dir / "field_computational.csv", res.phi);
    const auto [xp, yp] = map_nodes(built.map, built.inst.grid);
    write_field_csv(dir / "field_physical.csv", potential_passthrough(res.phi), &xp, &yp);
    write_residual_csv(dir / "residual_history.csv", res.residual_history);
    if (cfg.solver == SolverKind::Mg) {
        MgOptions mg = cfg.solve_spec().mg;
        mg.tol = cfg.tol;
        summary["hierarchy"] = hierarchy_summary(build_hierarchy(built.inst, built.map, mg));
    }
}

inline int run_solve(const RunConfig& cfg, const std::filesystem::path& dir, bool with_norms) {
    const BenchmarkCase c = benchmark_from_config(cfg);
    const BuiltCase built = with_neumann(c.build(cfg.n), cfg);
    SolveSpec spec = cfg.solve_spec();
    const SolveResult res = solve_case(built, spec);
    nlohmann::json summary = solve_summary(cfg, res);
    summary["case"] = c.name;
    summary["n"] = cfg.n;
    if (!res.converged) {
        write_json(dir / "summary.json", summary);
        throw SolveFailure("solve did not converge within the iteration budget");
    }
    write_solution_files(dir, cfg, built, res, summary);
    if (with_norms) {
        const ErrorNorms norms = error_norms(res.phi, exact_field(c, built));
        summary["norms"] = {{"l1", norms.l1}, {"l2", norms.l2}, {"linf", norms.l_inf}};
        std::ofstream os = detail::open_out(dir / "norms.csv");
        os << "N,dx,l1,l2,linf\n";
        os << cfg.n << "," << format_double(built.inst.grid.dx) << ","
           << format_double(norms.l1) << "," << format_double(norms.l2) << ","
           << format_double(norms.l_inf) << "\n";
    }
    write_json(dir / "summary.json", summary);
    return exit_code::ok;
}

inline int run_converge(const RunConfig& cfg, const std::filesystem::path& dir) {
    const BenchmarkCase c = benchmark_from_config(cfg);
    const ConvergenceStudy study = run_convergence_study(c, cfg.resolutions, cfg.solve_spec());
    {
        std::ofstream os = detail::open_out(dir / "convergence.csv");
        os << "N,dx,l1,l2,linf\n";
        for (const StudyRow& r : study.rows)
            os << r.n << "," << format_double(r.dx) << "," << format_double(r.l1) << ","
               << format_double(r.l2) << "," << format_double(r.l_inf) << "\n";
    }
    nlohmann::json summary;
    summary["case"] = c.name;
    summary["resolutions"] = cfg.resolutions;
    summary["slopes"] = {{"l1", study.slope_l1},
                         {"l2", study.slope_l2},
                         {"linf", study.slope_l_inf}};
    const bool in_band = study.slope_l1 >= 1.8 && study.slope_l1 <= 2.2 &&
                         study.slope_l2 >= 1.8 && study.slope_l2 <= 2.2 &&
                         study.slope_l_inf >= 1.8 && study.slope_l_inf <= 2.2;
    summary["second_order_band"] = in_band;
    write_json(dir / "summary.json", summary);
    return in_band ? exit_code::ok : exit_code::out_of_band;
}

inline int run_timing(const RunConfig& cfg, const std::filesystem::path& dir) {
    const BenchmarkCase c = benchmark_from_config(cfg);
    const auto rows = run_timing_comparison(c, cfg.resolutions, cfg.solve_spec(), cfg.reps);
    {
        std::ofstream os = detail::open_out(dir / "timing.csv");
        os << "N,t_mg_ms,t_sor_ms,cycles,iters\n";
        for (const TimingRow& r : rows)
            os << r.n << "," << format_double(r.t_mg_ms) << "," << format_double(r.t_sor_ms)
               << "," << r.cycles << "," << r.iters << "\n";
    }
    nlohmann::json jrows = nlohmann::json::array();
    for (const TimingRow& r : rows)
        jrows.push_back({{"n", r.n},
                         {"t_mg_ms", r.t_mg_ms},
                         {"t_sor_ms", r.t_sor_ms},
                         {"cycles", r.cycles},
                         {"iters", r.iters}});
    write_json(dir / "summary.json",
               {{"case", c.name}, {"reps", cfg.reps}, {"rows", jrows}});
    return exit_code::ok;
}

inline int run_gengrid(const RunConfig& cfg, const std::filesystem::path& dir) {
    const double half = cfg.L / 2.0;
    UniformGrid g = cfg.case_name == "square_to_circle"
                        ? make_grid(cfg.n, cfg.n, Extents{-cfg.b, cfg.b, -cfg.b, cfg.b})
                        : make_grid(cfg.n, cfg.n, Extents{-half, half, -half, half});
    BoundaryMap bm;
    if (cfg.case_name == "square_to_circle")
        bm = square_to_circle_boundary(SquareToCircle{cfg.b});
    else if (cfg.case_name == "embedded_circle")
        bm = embedded_circle_boundary(g, cfg.sub_x0, cfg.sub_xc, cfg.sub_y0, cfg.sub_yc);
    else
        bm = sinusoidal_obstacle_boundary(
            g, SinusoidalDeform{cfg.amp, cfg.n_osc, cfg.sub_x0, cfg.sub_xc, cfg.sub_y0,
                                cfg.sub_yc});
    GenOptions gen;
    gen.tol = cfg.tol;
    gen.max_cycles = cfg.max_cycles;
    gen.mg = cfg.solve_spec().mg;
    const CoordinateMap map = generate_map(bm, g, gen);
    const TabulatedMap& tab = std::get<TabulatedMap>(map);
    write_map_csv(dir / "map.csv", tab);
    const MeshQuality q = mesh_quality(tab);
    write_json(dir / "quality.json", {{"min_det", q.min_det},
                                      {"max_det", q.max_det},
                                      {"min_spacing", q.min_spacing},
                                      {"orientation_ok", q.orientation_ok}});
    return exit_code::ok;
}

inline int run_beam(const RunConfig& cfg, const std::filesystem::path& dir) {
    StretchedBeamConfig bc;
    bc.s = cfg.s;
    bc.alpha = cfg.alpha;
    bc.L = cfg.L;
    bc.n = cfg.n;
    bc.rho0 = cfg.rho0;
    bc.sigma_x = bc.sigma_y = cfg.sigma;
    bc.x0 = cfg.x0;
    bc.y0 = cfg.y0;
    const BeamResult beam = run_stretched_beam(bc, cfg.solve_spec());
    write_field_csv(dir / "field_computational.csv", beam.phi);
    write_field_csv(dir / "field_physical.csv", beam.phi, &beam.xp, &beam.yp);
    write_residual_csv(dir / "residual_history.csv", beam.solve.residual_history);

    nlohmann::json summary = solve_summary(cfg, beam.solve);
    summary["n"] = cfg.n;
    summary["n_equiv"] = beam.n_equiv;
    summary["physical_extent"] = beam.physical_extent;
    summary["min_spacing"] = beam.min_spacing;

    std::ofstream os = detail::open_out(dir / "comparison.csv");
    os << "n_ref,linf_diff\n";
    nlohmann::json refs = nlohmann::json::array();
    for (int n_ref : cfg.n_ref) {
        const SolveResult ref = reference_uniform_solve(bc, n_ref, cfg.solve_spec());
        const double diff = beam_comparison_linf(beam, ref.phi);
        os << n_ref << "," << format_double(diff) << "\n";
        refs.push_back(
            {{"n_ref", n_ref}, {"linf_diff", diff}, {"wall_seconds", ref.seconds}});
    }
    summary["references"] = refs;
    write_json(dir / "summary.json", summary);
    return exit_code::ok;
}

inline int run_flow(const RunConfig& cfg, const std::filesystem::path& dir) {
    FlowConfig fc;
    fc.L = cfg.L;
    fc.n = cfg.n;
    fc.phi0 = cfg.phi_bottom;
    fc.phi1 = cfg.phi_top;
    if (cfg.case_name == "circle")
        fc.obstacle = FlowConfig::CircleObstacle{cfg.sub_x0, cfg.sub_xc, cfg.sub_y0, cfg.sub_yc};
    else
        fc.obstacle = FlowConfig::ArbitraryObstacle{cfg.amp, cfg.n_osc, cfg.sub_x0, cfg.sub_xc,
                                                    cfg.sub_y0, cfg.sub_yc};
    GenOptions gen;
    gen.tol = cfg.tol;
    gen.max_cycles = cfg.max_cycles;
    gen.mg = cfg.solve_spec().mg;
    const FlowResult flow = run_potential_flow(fc, cfg.solve_spec(), gen);
    write_field_csv(dir / "psi_computational.csv", flow.psi);
    write_field_csv(dir / "psi_physical.csv", flow.psi, &flow.xp, &flow.yp);
    write_residual_csv(dir / "residual_history.csv", flow.solve.residual_history);
    {
        std::ofstream os = detail::open_out(dir / "velocity.csv");
        os << "xprime,yprime,u,v\n";
        const UniformGrid& g = flow.psi.grid;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                os << format_double(flow.xp.at(i, j)) << "," << format_double(flow.yp.at(i, j))
                   << "," << format_double(flow.u.at(i, j)) << ","
                   << format_double(flow.v.at(i, j)) << "\n";
    }
    nlohmann::json summary = solve_summary(cfg, flow.solve);
    summary["obstacle"] = cfg.case_name;
    summary["n"] = cfg.n;
    write_json(dir / "summary.json", summary);
    return exit_code::ok;
}

}  // namespace detail

/// Executes a validated configuration; returns the process exit code. The
/// resolved configuration is recorded as manifest.json before any solve so
/// a run can be reproduced exactly.
inline int run(const RunConfig& cfg, std::ostream& log = std::cerr) {
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        log << nlohmann::json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump()
            << "\n";
        return exit_code::bad_config;
    }
    const std::filesystem::path dir(cfg.out_dir);
    try {
        std::filesystem::create_directories(dir);
        write_json(dir / "manifest.json", config_to_json(cfg));
        switch (cfg.command) {
            case Command::Solve: return detail::run_solve(cfg, dir, false);
            case Command::Benchmark: return detail::run_solve(cfg, dir, true);
            case Command::Converge: return detail::run_converge(cfg, dir);
            case Command::Timing: return detail::run_timing(cfg, dir);
            case Command::Gengrid: return detail::run_gengrid(cfg, dir);
            case Command::Beam: return detail::run_beam(cfg, dir);
            case Command::Flow: return detail::run_flow(cfg, dir);
            default: throw ConfigError("no command given");
        }
    } catch (const SolveFailure& e) {
        const nlohmann::json err{{"error", {{"kind", "no_convergence"}, {"message", e.what()}}}};
        log << err.dump() << "\n";
        try { write_json(dir / "error.json", err); } catch (...) {}
        return exit_code::no_convergence;
    } catch (const std::exception& e) {
        const nlohmann::json err{{"error", {{"kind", "runtime"}, {"message", e.what()}}}};
        log << err.dump() << "\n";
        try { write_json(dir / "error.json", err); } catch (...) {}
        return exit_code::runtime_error;
    }
}

}  // namespace poismg
