// Variable-coefficient 9-point discretization of -div(eps grad phi) = rho
// on the uniform grid: stencil coefficients, operator application, residual.
//
// The operator A is the negative divergence form, so A phi = rho with a
// positive diagonal. A Gauss-Seidel candidate at a free node is
//   (e*E + w*W + n*N + s*S + cross*(NE - NW - SE + SW) + rho) / center.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "poismg/boundary.hpp"
#include "poismg/field.hpp"
#include "poismg/material.hpp"

namespace poismg {

/// Stencil weights at one node. center multiplies the node itself; east,
/// west, north, south its axis neighbors; cross the diagonal combination
/// (NE - NW - SE + SW). All carry units 1/length^2.
struct StencilCoeffs {
    double east = 0.0;    // phi[i+1, j]
    double west = 0.0;    // phi[i-1, j]
    double north = 0.0;   // phi[i, j+1]
    double south = 0.0;   // phi[i, j-1]
    double cross = 0.0;   // e_xy[i,j] / (2 dx dy)
    double center = 0.0;  // 2 (e_xx/dx^2 + e_yy/dy^2)
};

namespace detail {

// Mirror an index across the grid ends; identity for interior indices.
inline int reflect(int k, int n) {
    if (k < 0) return -k;
    if (k > n - 1) return 2 * (n - 1) - k;
    return k;
}

/// Coefficients with reflected neighbor reads so the same formula serves
/// interior nodes and mirror-ghost Neumann edge nodes.
inline StencilCoeffs stencil_reflected(const MaterialTensor& t, int i, int j, double dx,
                                       double dy) {
    const UniformGrid& g = t.e_xx.grid;
    const int ie = reflect(i + 1, g.nx), iw = reflect(i - 1, g.nx);
    const int jn = reflect(j + 1, g.ny), js = reflect(j - 1, g.ny);
    const double exx = t.e_xx.at(i, j);
    const double eyy = t.e_yy.at(i, j);
    const double dexx = t.e_xx.at(ie, j) - t.e_xx.at(iw, j);
    const double deyy = t.e_yy.at(i, jn) - t.e_yy.at(i, js);
    const double deyx = t.e_yx.at(i, jn) - t.e_yx.at(i, js);
    const double dexy = t.e_xy.at(ie, j) - t.e_xy.at(iw, j);
    StencilCoeffs c;
    c.center = 2.0 * (exx / (dx * dx) + eyy / (dy * dy));
    c.east = exx / (dx * dx) + dexx / (4.0 * dx * dx) + deyx / (4.0 * dx * dy);
    c.west = exx / (dx * dx) - dexx / (4.0 * dx * dx) - deyx / (4.0 * dx * dy);
    c.north = eyy / (dy * dy) + deyy / (4.0 * dy * dy) + dexy / (4.0 * dx * dy);
    c.south = eyy / (dy * dy) - deyy / (4.0 * dy * dy) - dexy / (4.0 * dx * dy);
    c.cross = t.e_xy.at(i, j) / (2.0 * dx * dy);
    return c;
}

}  // namespace detail

/// Stencil coefficients at an interior node, reading neighbor tensor values
/// at (i+-1, j) and (i, j+-1).
inline StencilCoeffs stencil_at(const MaterialTensor& t, int i, int j, double dx, double dy) {
    const UniformGrid& g = t.e_xx.grid;
    if (i < 1 || j < 1 || i > g.nx - 2 || j > g.ny - 2)
        throw std::invalid_argument("stencil_at: node (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not interior");
    return detail::stencil_reflected(t, i, j, dx, dy);
}

/// One solvable unit: grid, coefficient tensor, transformed source and
/// boundary conditions, plus the per-node roles and cached stencil weights
/// the sweeps run on.
struct ProblemInstance {
    UniformGrid grid;
    MaterialTensor tensor;
    ScalarField rho;  // transformed source; the right-hand side of A phi = rho
    BoundarySpec bc;

    std::vector<NodeRole> roles;
    std::vector<double> c_east, c_west, c_north, c_south, c_cross, c_center;

    [[nodiscard]] bool is_unknown(std::size_t k) const {
        return roles[k] == NodeRole::Free || roles[k] == NodeRole::NeumannFree;
    }
};

inline ProblemInstance make_instance(const UniformGrid& grid, MaterialTensor tensor,
                                     ScalarField rho, BoundarySpec bc) {
    if (!(tensor.e_xx.grid == grid) || !(rho.grid == grid))
        throw std::invalid_argument("make_instance: components live on different grids");
    tensor.validate();
    ProblemInstance inst{grid, std::move(tensor), std::move(rho), std::move(bc), {}, {}, {},
                         {}, {}, {}, {}};
    inst.roles = classify_nodes(grid, inst.bc);
    const std::size_t n = grid.size();
    inst.c_east.assign(n, 0.0);
    inst.c_west.assign(n, 0.0);
    inst.c_north.assign(n, 0.0);
    inst.c_south.assign(n, 0.0);
    inst.c_cross.assign(n, 0.0);
    inst.c_center.assign(n, 0.0);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t k = grid.index(i, j);
            if (!inst.is_unknown(k)) continue;
            const StencilCoeffs c = detail::stencil_reflected(inst.tensor, i, j, grid.dx, grid.dy);
            inst.c_east[k] = c.east;
            inst.c_west[k] = c.west;
            inst.c_north[k] = c.north;
            inst.c_south[k] = c.south;
            inst.c_cross[k] = c.cross;
            inst.c_center[k] = c.center;
        }
    return inst;
}

namespace detail {

// Weighted neighbor sum of phi around an unknown node. Free nodes read
// neighbors directly; mirror-ghost edge nodes read reflected indices.
inline double neighbor_sum(const ProblemInstance& inst, const ScalarField& phi, int i, int j,
                           std::size_t k) {
    const UniformGrid& g = inst.grid;
    if (inst.roles[k] == NodeRole::Free) {
        const double* p = phi.values.data();
        const std::size_t nx = static_cast<std::size_t>(g.nx);
        return inst.c_east[k] * p[k + 1] + inst.c_west[k] * p[k - 1] +
               inst.c_north[k] * p[k + nx] + inst.c_south[k] * p[k - nx] +
               inst.c_cross[k] * (p[k + nx + 1] - p[k + nx - 1] - p[k - nx + 1] + p[k - nx - 1]);
    }
    const int ie = reflect(i + 1, g.nx), iw = reflect(i - 1, g.nx);
    const int jn = reflect(j + 1, g.ny), js = reflect(j - 1, g.ny);
    return inst.c_east[k] * phi.at(ie, j) + inst.c_west[k] * phi.at(iw, j) +
           inst.c_north[k] * phi.at(i, jn) + inst.c_south[k] * phi.at(i, js) +
           inst.c_cross[k] *
               (phi.at(ie, jn) - phi.at(iw, jn) - phi.at(ie, js) + phi.at(iw, js));
}

}  // namespace detail

/// A phi at unknown nodes; zero at fixed and dependent nodes.
inline void apply_operator_into(const ScalarField& phi, const ProblemInstance& inst,
                                ScalarField& out) {
    require_same_grid(phi, inst.rho, "apply_operator");
    const UniformGrid& g = inst.grid;
    out.grid = g;
    out.values.assign(g.size(), 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (!inst.is_unknown(k)) continue;
            out.values[k] =
                inst.c_center[k] * phi.values[k] - detail::neighbor_sum(inst, phi, i, j, k);
        }
}

inline ScalarField apply_operator(const ScalarField& phi, const ProblemInstance& inst) {
    ScalarField out;
    apply_operator_into(phi, inst, out);
    return out;
}

/// r = rhs - A phi at unknown nodes, zero elsewhere. rhs defaults to the
/// instance source; multigrid correction equations pass their own.
inline void residual_into(const ScalarField& phi, const ProblemInstance& inst,
                          const ScalarField& rhs, ScalarField& out) {
    require_same_grid(phi, inst.rho, "residual");
    require_same_grid(rhs, inst.rho, "residual");
    const UniformGrid& g = inst.grid;
    out.grid = g;
    out.values.assign(g.size(), 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (!inst.is_unknown(k)) continue;
            out.values[k] = rhs.values[k] - (inst.c_center[k] * phi.values[k] -
                                             detail::neighbor_sum(inst, phi, i, j, k));
        }
}

inline ScalarField residual(const ScalarField& phi, const ProblemInstance& inst) {
    ScalarField out;
    residual_into(phi, inst, inst.rho, out);
    return out;
}

/// Root-mean-square over all nodes (fixed nodes contribute zeros).
inline double rms(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s / static_cast<double>(f.values.size()));
}

/// RMS of the right-hand side restricted to unknown nodes; the denominator
/// of the relative residual criterion.
inline double rhs_rms(const ProblemInstance& inst, const ScalarField& rhs) {
    double s = 0.0;
    for (std::size_t k = 0; k < rhs.values.size(); ++k)
        if (inst.is_unknown(k)) s += rhs.values[k] * rhs.values[k];
    return std::sqrt(s / static_cast<double>(rhs.values.size()));
}

}  // namespace poismg
