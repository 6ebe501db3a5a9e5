// Benchmark problems with analytic solutions, resolution scans and
// multigrid-versus-SOR timing comparisons.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "poismg/gridgen.hpp"
#include "poismg/multigrid.hpp"
#include "poismg/norms.hpp"
#include "poismg/relax.hpp"

namespace poismg {

/// A benchmark instance at one resolution: the solvable problem plus the
/// coordinate map it was derived from.
struct BuiltCase {
    ProblemInstance inst;
    CoordinateMap map;
};

/// A named problem family: builder per resolution and the exact solution as
/// a function of physical coordinates.
struct BenchmarkCase {
    std::string name;
    std::function<BuiltCase(int)> build;
    std::function<double(double, double)> exact;
};

/// Semi-annulus capacitor: polar map, fixed potential on the inner radius,
/// grounded outer radius, symmetry (zero-gradient) planes at both angles.
/// Exact solution phi0 * ln(R/r) / ln(R/a).
inline BenchmarkCase semi_annulus_case(double a, double R, double phi0) {
    if (!(0.0 < a && a < R)) throw std::invalid_argument("semi_annulus_case: need 0 < a < R");
    const double pi = 3.14159265358979323846;
    BenchmarkCase c;
    c.name = "semi_annulus";
    c.build = [a, R, phi0](int n) {
        if (n < 3) throw std::invalid_argument("semi_annulus_case: n >= 3 required");
        const UniformGrid g = make_grid(n, n, Extents{a, R, 0.0, pi});
        CoordinateMap map = PolarMap{};
        MaterialTensor tensor = material_tensor(jacobian_exact(map, g));
        BoundarySpec bc;
        bc.west = EdgeCondition::dirichlet(phi0);
        bc.east = EdgeCondition::dirichlet(0.0);
        bc.south = EdgeCondition::neumann_zero();
        bc.north = EdgeCondition::neumann_zero();
        return BuiltCase{make_instance(g, std::move(tensor), ScalarField(g), std::move(bc)),
                         std::move(map)};
    };
    c.exact = [a, R, phi0](double xp, double yp) {
        const double r = std::hypot(xp, yp);
        return phi0 * std::log(R / r) / std::log(R / a);
    };
    return c;
}

/// Poisson problem on a disc of radius b reached through the numerically
/// generated square-to-circle map. The analytic solution (x'^2 + y'^2)/4 has
/// unit Laplacian, which under the electrostatic convention
/// -div(eps grad phi) = rho corresponds to a uniform charge density of -1.
inline BenchmarkCase circle_poisson_case(double b, double source = -1.0) {
    if (!(b > 0.0)) throw std::invalid_argument("circle_poisson_case: b must be positive");
    BenchmarkCase c;
    c.name = "circle_poisson";
    c.build = [b, source](int n) {
        const UniformGrid g = make_grid(n, n, Extents{-b, b, -b, b});
        CoordinateMap map = generate_map(square_to_circle_boundary(SquareToCircle{b}), g);
        const auto& tab = std::get<TabulatedMap>(map);
        const JacobianField J = jacobian_numeric(tab.xp, tab.yp);
        MaterialTensor tensor = material_tensor(J);
        ScalarField rho_phys(g, source);
        ScalarField rho = transform_source(rho_phys, J.det);
        BoundarySpec bc = BoundarySpec::all_dirichlet(b * b / 4.0);
        return BuiltCase{make_instance(g, std::move(tensor), std::move(rho), std::move(bc)),
                         std::move(map)};
    };
    c.exact = [](double xp, double yp) { return (xp * xp + yp * yp) / 4.0; };
    return c;
}

/// Laplace problem on a disc with boundary data sin(n_mode * theta); exact
/// solution r^n_mode sin(n_mode * theta). Uses the same generated map as the
/// Poisson disc.
inline BenchmarkCase circle_laplace_case(double b, int n_mode) {
    if (!(b > 0.0) || n_mode < 1)
        throw std::invalid_argument("circle_laplace_case: need b > 0 and n_mode >= 1");
    BenchmarkCase c;
    c.name = "circle_laplace";
    c.build = [b, n_mode](int n) {
        const UniformGrid g = make_grid(n, n, Extents{-b, b, -b, b});
        CoordinateMap map = generate_map(square_to_circle_boundary(SquareToCircle{b}), g);
        const auto& tab = std::get<TabulatedMap>(map);
        MaterialTensor tensor = material_tensor(jacobian_numeric(tab.xp, tab.yp));
        auto boundary_value = [b, n_mode](std::array<double, 2> p) {
            return std::sin(n_mode * std::atan2(p[1], p[0]));
        };
        BoundarySpec bc;
        bc.west = EdgeCondition::dirichlet([b, n_mode, boundary_value](double y) {
            return boundary_value(square_to_circle_point(b, -b, y));
        });
        bc.east = EdgeCondition::dirichlet([b, n_mode, boundary_value](double y) {
            return boundary_value(square_to_circle_point(b, b, y));
        });
        bc.south = EdgeCondition::dirichlet([b, n_mode, boundary_value](double x) {
            return boundary_value(square_to_circle_point(b, x, -b));
        });
        bc.north = EdgeCondition::dirichlet([b, n_mode, boundary_value](double x) {
            return boundary_value(square_to_circle_point(b, x, b));
        });
        return BuiltCase{make_instance(g, std::move(tensor), ScalarField(g), std::move(bc)),
                         std::move(map)};
    };
    c.exact = [n_mode](double xp, double yp) {
        const double r = std::hypot(xp, yp);
        return std::pow(r, n_mode) * std::sin(n_mode * std::atan2(yp, xp));
    };
    return c;
}

enum class SolverKind { Mg, Sor };

/// One solver configuration shared by studies, timings and the CLI.
struct SolveSpec {
    SolverKind kind = SolverKind::Mg;
    double tol = 1e-10;
    double omega = 1.875;  // SOR relaxation
    MgOptions mg;
    int sor_max_iters = 2000000;
};

inline SolveResult solve_case(const BuiltCase& built, const SolveSpec& spec) {
    if (spec.kind == SolverKind::Mg) {
        MgOptions mg = spec.mg;
        mg.tol = spec.tol;
        MultigridHierarchy h = build_hierarchy(built.inst, built.map, mg);
        return mg_solve(h);
    }
    SorOptions so;
    so.omega = spec.omega;
    so.tol = spec.tol;
    so.max_iters = spec.sor_max_iters;
    return sor_solve(built.inst, so);
}

/// Exact solution sampled at the physical images of the grid nodes.
inline ScalarField exact_field(const BenchmarkCase& c, const BuiltCase& built) {
    const auto [xp, yp] = map_nodes(built.map, built.inst.grid);
    ScalarField out(built.inst.grid);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = c.exact(xp.values[k], yp.values[k]);
    return out;
}

struct StudyRow {
    int n = 0;
    double dx = 0.0;
    double l1 = 0.0, l2 = 0.0, l_inf = 0.0;
};

struct ConvergenceStudy {
    std::vector<StudyRow> rows;
    double slope_l1 = 0.0, slope_l2 = 0.0, slope_l_inf = 0.0;
};

/// Solves the case at every resolution, measures norms against the exact
/// solution at the mapped nodes and fits the log-log slopes.
inline ConvergenceStudy run_convergence_study(const BenchmarkCase& c,
                                              const std::vector<int>& resolutions,
                                              const SolveSpec& spec = {}) {
    if (resolutions.size() < 3)
        throw std::invalid_argument("run_convergence_study: need at least 3 resolutions");
    ConvergenceStudy study;
    for (int n : resolutions) {
        const BuiltCase built = c.build(n);
        const SolveResult res = solve_case(built, spec);
        if (!res.converged)
            throw SolveFailure("run_convergence_study: solver did not converge at n = " +
                                     std::to_string(n));
        const ErrorNorms norms = error_norms(res.phi, exact_field(c, built));
        study.rows.push_back({n, built.inst.grid.dx, norms.l1, norms.l2, norms.l_inf});
    }
    auto slope_of = [&study](double StudyRow::*member) {
        std::vector<std::pair<double, double>> pairs;
        for (const StudyRow& r : study.rows) pairs.emplace_back(r.dx, r.*member);
        return convergence_slope(pairs);
    };
    study.slope_l1 = slope_of(&StudyRow::l1);
    study.slope_l2 = slope_of(&StudyRow::l2);
    study.slope_l_inf = slope_of(&StudyRow::l_inf);
    return study;
}

struct TimingRow {
    int n = 0;
    double t_mg_ms = 0.0;
    double t_sor_ms = 0.0;
    int cycles = 0;  // multigrid V-cycles
    int iters = 0;   // SOR sweeps
};

/// Median-of-repetitions wall time of the solve call only; case setup and
/// hierarchy construction are excluded.
inline std::vector<TimingRow> run_timing_comparison(const BenchmarkCase& c,
                                                    const std::vector<int>& resolutions,
                                                    const SolveSpec& spec = {}, int reps = 3) {
    if (reps < 1) throw std::invalid_argument("run_timing_comparison: reps >= 1 required");
    std::vector<TimingRow> rows;
    for (int n : resolutions) {
        const BuiltCase built = c.build(n);
        MgOptions mg = spec.mg;
        mg.tol = spec.tol;
        const MultigridHierarchy h = build_hierarchy(built.inst, built.map, mg);
        SorOptions so;
        so.omega = spec.omega;
        so.tol = spec.tol;
        so.max_iters = spec.sor_max_iters;

        TimingRow row;
        row.n = n;
        std::vector<double> t_mg, t_sor;
        for (int r = 0; r < reps; ++r) {
            const SolveResult res = mg_solve(h);
            if (!res.converged)
                throw SolveFailure("run_timing_comparison: multigrid did not converge");
            t_mg.push_back(res.seconds * 1e3);
            row.cycles = res.iterations;
        }
        for (int r = 0; r < reps; ++r) {
            const SolveResult res = sor_solve(built.inst, so);
            if (!res.converged)
                throw SolveFailure("run_timing_comparison: SOR did not converge");
            t_sor.push_back(res.seconds * 1e3);
            row.iters = res.iterations;
        }
        auto median = [](std::vector<double>& v) {
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        row.t_mg_ms = median(t_mg);
        row.t_sor_ms = median(t_sor);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace poismg
