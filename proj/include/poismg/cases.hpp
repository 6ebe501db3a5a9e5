// Application scenarios: a Gaussian charge beam on a sinh-stretched grid,
// and potential flow past embedded obstacles (circular or sinusoidally
// deformed).

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <variant>

#include "poismg/benchmark.hpp"
#include "poismg/gridgen.hpp"
#include "poismg/multigrid.hpp"

namespace poismg {

/// Stretched-grid beam configuration. The computational domain is the
/// centered square [-L/2, L/2]^2; the sinh map concentrates physical nodes
/// around the beam.
struct StretchedBeamConfig {
    double s = 5.0;
    double alpha = 0.6;
    double L = 6.0;
    int n = 129;
    double rho0 = 100.0;
    double sigma_x = 0.5;
    double sigma_y = 0.5;
    double x0 = 0.0;
    double y0 = 0.0;
};

struct BeamResult {
    ScalarField phi;      // solution on the computational grid
    ScalarField xp, yp;   // physical node coordinates
    MaterialTensor tensor;
    int n_equiv = 0;      // uniform resolution matching the finest spacing
    double physical_extent = 0.0;
    double min_spacing = 0.0;
    SolveResult solve;
};

inline ScalarField beam_charge_density(const StretchedBeamConfig& cfg, const ScalarField& xp,
                                       const ScalarField& yp) {
    ScalarField rho(xp.grid);
    for (std::size_t k = 0; k < rho.values.size(); ++k) {
        const double dx = xp.values[k] - cfg.x0;
        const double dy = yp.values[k] - cfg.y0;
        rho.values[k] = -cfg.rho0 * std::exp(-dx * dx / (2.0 * cfg.sigma_x * cfg.sigma_x) -
                                             dy * dy / (2.0 * cfg.sigma_y * cfg.sigma_y));
    }
    return rho;
}

/// Builds the sinh-stretched beam problem (far-field potential pinned to
/// zero on the outer boundary).
inline BuiltCase build_stretched_beam(const StretchedBeamConfig& cfg) {
    if (!(cfg.s > 0.0) || !(cfg.alpha > 0.0) || !(cfg.sigma_x > 0.0) || !(cfg.sigma_y > 0.0))
        throw std::invalid_argument("build_stretched_beam: s, alpha and sigma must be positive");
    const double half = cfg.L / 2.0;
    const UniformGrid g = make_grid(cfg.n, cfg.n, Extents{-half, half, -half, half});
    CoordinateMap map = SinhStretchMap{cfg.s, cfg.alpha};
    const JacobianField J = jacobian_exact(map, g);
    MaterialTensor tensor = material_tensor(J);
    const auto [xp, yp] = map_nodes(map, g);
    ScalarField rho = transform_source(beam_charge_density(cfg, xp, yp), J.det);
    BoundarySpec bc = BoundarySpec::all_dirichlet(0.0);
    return BuiltCase{make_instance(g, std::move(tensor), std::move(rho), std::move(bc)),
                     std::move(map)};
}

inline BeamResult run_stretched_beam(const StretchedBeamConfig& cfg, const SolveSpec& spec = {}) {
    BuiltCase built = build_stretched_beam(cfg);
    BeamResult out;
    out.solve = solve_case(built, spec);
    if (!out.solve.converged)
        throw SolveFailure("run_stretched_beam: solver did not converge");
    out.phi = out.solve.phi;
    auto nodes = map_nodes(built.map, built.inst.grid);
    out.xp = std::move(nodes.first);
    out.yp = std::move(nodes.second);
    out.tensor = std::move(built.inst.tensor);

    // Resolution a uniform grid would need to match the finest physical
    // spacing: domain size over minimum node spacing, rounded up.
    const UniformGrid& g = built.inst.grid;
    out.physical_extent = out.xp.at(g.nx - 1, 0) - out.xp.at(0, 0);
    double min_dx = out.physical_extent;
    for (int i = 0; i + 1 < g.nx; ++i)
        min_dx = std::min(min_dx, out.xp.at(i + 1, 0) - out.xp.at(i, 0));
    out.min_spacing = min_dx;
    out.n_equiv = static_cast<int>(std::ceil(out.physical_extent / min_dx));
    return out;
}

/// Same beam problem on a uniform physical-coordinate grid spanning the
/// stretched domain; the reference the stretched solve is compared against.
inline BuiltCase build_uniform_beam_reference(const StretchedBeamConfig& cfg, int n_ref) {
    const double extent = cfg.s * std::sinh(cfg.alpha * cfg.L / 2.0);
    const UniformGrid g = make_grid(n_ref, n_ref, Extents{-extent, extent, -extent, extent});
    CoordinateMap map = IdentityMap{};
    const auto [xp, yp] = map_nodes(map, g);
    ScalarField rho = beam_charge_density(cfg, xp, yp);  // det(J) = 1
    BoundarySpec bc = BoundarySpec::all_dirichlet(0.0);
    return BuiltCase{make_instance(g, identity_tensor(g), std::move(rho), std::move(bc)),
                     std::move(map)};
}

inline SolveResult reference_uniform_solve(const StretchedBeamConfig& cfg, int n_ref,
                                           const SolveSpec& spec = {}) {
    const BuiltCase built = build_uniform_beam_reference(cfg, n_ref);
    SolveResult res = solve_case(built, spec);
    if (!res.converged)
        throw SolveFailure("reference_uniform_solve: solver did not converge");
    return res;
}

/// Bilinear sample of a field at an arbitrary point inside its grid.
inline double bilinear_sample(const ScalarField& f, double x, double y) {
    const UniformGrid& g = f.grid;
    double fi = (x - g.x_min) / g.dx;
    double fj = (y - g.y_min) / g.dy;
    fi = std::min(std::max(fi, 0.0), static_cast<double>(g.nx - 1));
    fj = std::min(std::max(fj, 0.0), static_cast<double>(g.ny - 1));
    const int i = std::min(static_cast<int>(fi), g.nx - 2);
    const int j = std::min(static_cast<int>(fj), g.ny - 2);
    const double tx = fi - i, ty = fj - j;
    return (1.0 - tx) * (1.0 - ty) * f.at(i, j) + tx * (1.0 - ty) * f.at(i + 1, j) +
           (1.0 - tx) * ty * f.at(i, j + 1) + tx * ty * f.at(i + 1, j + 1);
}

/// L-infinity difference between the stretched solution and a uniform
/// reference, sampled at the stretched grid's physical node positions.
inline double beam_comparison_linf(const BeamResult& beam, const ScalarField& reference) {
    double worst = 0.0;
    for (std::size_t k = 0; k < beam.phi.values.size(); ++k) {
        const double ref = bilinear_sample(reference, beam.xp.values[k], beam.yp.values[k]);
        worst = std::max(worst, std::abs(beam.phi.values[k] - ref));
    }
    return worst;
}

/// Potential-flow configuration: stream-function levels phi0 (bottom) and
/// phi1 (top), an embedded obstacle in a centered square subregion.
struct FlowConfig {
    double L = 10.0;  // domain is the centered square [-L/2, L/2]^2
    int n = 257;
    double phi0 = -1.0;
    double phi1 = 1.0;
    struct CircleObstacle {
        double x0 = -2.5, xc = 2.5;
        double y0 = -2.5, yc = 2.5;
    };
    struct ArbitraryObstacle {
        double a = 10.0;
        int n_osc = 3;
        double x0 = -2.5, xc = 2.5;
        double y0 = -2.5, yc = 2.5;
    };
    std::variant<CircleObstacle, ArbitraryObstacle> obstacle = CircleObstacle{};
};

struct FlowResult {
    ScalarField psi;      // stream function on the computational grid
    ScalarField xp, yp;   // physical node coordinates
    ScalarField u, v;     // physical velocity components at the nodes
    IndexRect obstacle;   // masked index rectangle
    SolveResult solve;
};

/// Harmonic map for the sinusoidally deformed obstacle (identity outer
/// boundary, deformed subregion ring).
inline CoordinateMap build_arbitrary_obstacle(const FlowConfig& cfg,
                                              const GenOptions& opts = {}) {
    const auto* arb = std::get_if<FlowConfig::ArbitraryObstacle>(&cfg.obstacle);
    if (!arb)
        throw std::invalid_argument("build_arbitrary_obstacle: config holds a circle obstacle");
    const double half = cfg.L / 2.0;
    const UniformGrid g = make_grid(cfg.n, cfg.n, Extents{-half, half, -half, half});
    SinusoidalDeform d{arb->a, arb->n_osc, arb->x0, arb->xc, arb->y0, arb->yc};
    return generate_map(sinusoidal_obstacle_boundary(g, d), g, opts);
}

namespace detail {

inline IndexRect obstacle_rect(const FlowConfig& cfg, const UniformGrid& g) {
    if (const auto* c = std::get_if<FlowConfig::CircleObstacle>(&cfg.obstacle))
        return subregion_indices(g, c->x0, c->xc, c->y0, c->yc);
    const auto& a = std::get<FlowConfig::ArbitraryObstacle>(cfg.obstacle);
    return subregion_indices(g, a.x0, a.xc, a.y0, a.yc);
}

inline CoordinateMap flow_map(const FlowConfig& cfg, const UniformGrid& g,
                              const GenOptions& opts) {
    if (const auto* c = std::get_if<FlowConfig::CircleObstacle>(&cfg.obstacle))
        return generate_map(embedded_circle_boundary(g, c->x0, c->xc, c->y0, c->yc), g, opts);
    return build_arbitrary_obstacle(cfg, opts);
}

}  // namespace detail

/// Central differences of psi (one-sided on the boundary), rotated into the
/// stream-function velocity (u, v) = (d psi/dy, -d psi/dx) and mapped to
/// physical components through the inverse-transpose Jacobian.
inline std::pair<ScalarField, ScalarField> velocity_from_stream(const ScalarField& psi,
                                                                const JacobianField& J) {
    const UniformGrid& g = psi.grid;
    ScalarField u(g), v(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            u.at(i, j) = detail::axis_derivative(psi, i, j, false, g.dy);
            v.at(i, j) = -detail::axis_derivative(psi, i, j, true, g.dx);
        }
    return physical_field(u, v, J);
}

inline FlowResult run_potential_flow(const FlowConfig& cfg, const SolveSpec& spec = {},
                                     const GenOptions& gen = {}) {
    if (!(cfg.phi1 > cfg.phi0))
        throw std::invalid_argument("run_potential_flow: phi1 must exceed phi0");
    const double half = cfg.L / 2.0;
    const UniformGrid g = make_grid(cfg.n, cfg.n, Extents{-half, half, -half, half});
    const IndexRect rect = detail::obstacle_rect(cfg, g);
    CoordinateMap map = detail::flow_map(cfg, g, gen);
    const TabulatedMap tab = std::get<TabulatedMap>(map);  // keep node images for the result
    const JacobianField J = jacobian_numeric(tab.xp, tab.yp);
    MaterialTensor tensor = material_tensor(J);

    const double phi0 = cfg.phi0, phi1 = cfg.phi1;
    const double y_min = g.y_min, L_y = g.y_max - g.y_min;
    auto inlet = [phi0, phi1, y_min, L_y](double y) {
        return phi0 + (phi1 - phi0) / L_y * (y - y_min);
    };
    BoundarySpec bc;
    bc.west = EdgeCondition::dirichlet(inlet);
    bc.east = EdgeCondition::dirichlet(inlet);
    bc.south = EdgeCondition::dirichlet(phi0);
    bc.north = EdgeCondition::dirichlet(phi1);
    EmbeddedMask mask;
    mask.fixed.assign(g.size(), 0);
    mask.value.assign(g.size(), 0.0);
    for (int j = rect.j0; j <= rect.j1; ++j)
        for (int i = rect.i0; i <= rect.i1; ++i) mask.fixed[g.index(i, j)] = 1;
    bc.mask = std::move(mask);

    BuiltCase built{make_instance(g, std::move(tensor), ScalarField(g), std::move(bc)),
                    std::move(map)};
    FlowResult out;
    out.solve = solve_case(built, spec);
    if (!out.solve.converged)
        throw SolveFailure("run_potential_flow: solver did not converge");
    out.psi = out.solve.phi;
    out.xp = tab.xp;
    out.yp = tab.yp;
    auto vel = velocity_from_stream(out.psi, J);
    out.u = std::move(vel.first);
    out.v = std::move(vel.second);
    out.obstacle = rect;
    return out;
}

}  // namespace poismg
