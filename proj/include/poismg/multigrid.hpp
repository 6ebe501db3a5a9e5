// Geometric multigrid V-cycle driver. Coarse-level operators are rebuilt
// from the coordinate map sampled at coarse nodes (exact Jacobians for
// closed-form maps, injected coordinates plus finite differences for
// tabulated ones), never by averaging fine-level tensors.

#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "poismg/coordinate_map.hpp"
#include "poismg/operator.hpp"
#include "poismg/relax.hpp"
#include "poismg/transfer.hpp"

namespace poismg {

struct MgOptions {
    int nu1 = 3;            // pre-smoothing sweeps
    int nu2 = 3;            // post-smoothing sweeps
    int coarse_sweeps = 50; // smoothing at the coarsest level instead of a direct solve
    double omega_smooth = 1.0;  // Gauss-Seidel smoothing
    int max_levels = 32;
    double tol = 1e-10;
    int max_cycles = 200;
    ConvergenceCriterion criterion = ConvergenceCriterion::ResidualRms;
};

/// Ordered fine-to-coarse problem levels. Level 0 carries the real boundary
/// data and source; coarser levels are correction problems with zeroed
/// boundary values and zeroed mask values.
struct MultigridHierarchy {
    std::vector<ProblemInstance> levels;
    MgOptions opts;

    [[nodiscard]] int depth() const { return static_cast<int>(levels.size()); }
};

namespace detail {

// A mask can be coarsened only when its bounding indices are even, so the
// pinned region keeps the same footprint under the 2:1 index mapping.
inline bool mask_coarsenable(const EmbeddedMask& m, const UniformGrid& g) {
    int i_lo = g.nx, i_hi = -1, j_lo = g.ny, j_hi = -1;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (m.contains(g.index(i, j))) {
                i_lo = std::min(i_lo, i);
                i_hi = std::max(i_hi, i);
                j_lo = std::min(j_lo, j);
                j_hi = std::max(j_hi, j);
            }
    if (i_hi < 0) return true;  // empty mask
    return i_lo % 2 == 0 && i_hi % 2 == 0 && j_lo % 2 == 0 && j_hi % 2 == 0;
}

inline EmbeddedMask coarsen_mask(const EmbeddedMask& m, const UniformGrid& fine,
                                 const UniformGrid& coarse) {
    EmbeddedMask out;
    out.fixed.assign(coarse.size(), 0);
    out.value.assign(coarse.size(), 0.0);
    for (int J = 0; J < coarse.ny; ++J)
        for (int I = 0; I < coarse.nx; ++I)
            out.fixed[coarse.index(I, J)] = m.fixed[fine.index(2 * I, 2 * J)];
    return out;
}

inline MaterialTensor tensor_for_level(const CoordinateMap& map, const UniformGrid& g,
                                       const TabulatedMap* level_tab) {
    if (std::holds_alternative<IdentityMap>(map)) return identity_tensor(g);
    if (is_closed_form(map)) return material_tensor(jacobian_exact(map, g));
    return material_tensor(jacobian_numeric(level_tab->xp, level_tab->yp));
}

inline TabulatedMap inject_map(const TabulatedMap& fine, const UniformGrid& coarse) {
    TabulatedMap out{ScalarField(coarse), ScalarField(coarse)};
    for (int J = 0; J < coarse.ny; ++J)
        for (int I = 0; I < coarse.nx; ++I) {
            out.xp.at(I, J) = fine.xp.at(2 * I, 2 * J);
            out.yp.at(I, J) = fine.yp.at(2 * I, 2 * J);
        }
    return out;
}

}  // namespace detail

/// Builds as many nested levels as the grid, the embedded mask and
/// opts.max_levels allow. Throws if no coarsening is possible at all.
inline MultigridHierarchy build_hierarchy(const ProblemInstance& inst, const CoordinateMap& map,
                                          const MgOptions& opts = {}) {
    MultigridHierarchy h;
    h.opts = opts;
    h.levels.push_back(inst);

    const TabulatedMap* tab = std::get_if<TabulatedMap>(&map);
    if (tab && !(tab->xp.grid == inst.grid))
        throw std::invalid_argument("build_hierarchy: tabulated map grid mismatch");
    TabulatedMap level_tab;
    if (tab) level_tab = *tab;

    while (h.depth() < opts.max_levels) {
        const ProblemInstance& fine = h.levels.back();
        const UniformGrid& fg = fine.grid;
        if ((fg.nx - 1) % 2 != 0 || (fg.ny - 1) % 2 != 0) break;
        const int ncx = (fg.nx - 1) / 2 + 1;
        const int ncy = (fg.ny - 1) / 2 + 1;
        if (ncx < 3 || ncy < 3) break;
        if (fine.bc.mask && !detail::mask_coarsenable(*fine.bc.mask, fg)) break;

        const UniformGrid cg =
            make_grid(ncx, ncy, Extents{fg.x_min, fg.x_max, fg.y_min, fg.y_max});
        if (tab) level_tab = detail::inject_map(level_tab, cg);
        MaterialTensor tensor = detail::tensor_for_level(map, cg, tab ? &level_tab : nullptr);

        BoundarySpec bc = fine.bc.zeroed();
        if (fine.bc.mask) bc.mask = detail::coarsen_mask(*fine.bc.mask, fg, cg);

        h.levels.push_back(make_instance(cg, std::move(tensor), ScalarField(cg), std::move(bc)));
    }

    if (h.depth() < 2)
        throw std::invalid_argument(
            "build_hierarchy: cannot coarsen " + std::to_string(inst.grid.nx) + "x" +
            std::to_string(inst.grid.ny) +
            " (node counts minus one must be even and the embedded mask node-aligned)");
    return h;
}

/// One V-cycle at the given level, improving phi for A_level phi = rhs.
/// Correction problems start from zero with homogeneous boundary data.
inline void v_cycle(const MultigridHierarchy& h, int level, ScalarField& phi,
                    const ScalarField& rhs) {
    const ProblemInstance& inst = h.levels[level];
    if (level == h.depth() - 1) {
        for (int s = 0; s < h.opts.coarse_sweeps; ++s)
            sor_sweep_rhs(phi, inst, rhs, h.opts.omega_smooth);
        return;
    }
    for (int s = 0; s < h.opts.nu1; ++s) sor_sweep_rhs(phi, inst, rhs, h.opts.omega_smooth);

    ScalarField r;
    residual_into(phi, inst, rhs, r);
    const ProblemInstance& coarse = h.levels[level + 1];
    ScalarField rc = restrict_full_weighting(r, coarse.grid);

    ScalarField psi(coarse.grid);
    apply_bc(psi, coarse.bc);
    v_cycle(h, level + 1, psi, rc);

    const ScalarField correction = prolong_bilinear(psi, inst.grid);
    for (std::size_t k = 0; k < phi.values.size(); ++k) phi.values[k] += correction.values[k];

    for (int s = 0; s < h.opts.nu2; ++s) sor_sweep_rhs(phi, inst, rhs, h.opts.omega_smooth);
}

/// Repeats V-cycles from the finest level until the residual criterion is
/// met. History holds the monitored residual after each cycle.
inline SolveResult mg_solve(const MultigridHierarchy& h) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemInstance& inst = h.levels.front();
    SolveResult res;
    res.phi = ScalarField(inst.grid);
    apply_bc(res.phi, inst.bc);
    const double b_norm = rhs_rms(inst, inst.rho);
    const double denom = b_norm > 0.0 ? b_norm : 1.0;
    ScalarField r;
    for (int cycle = 1; cycle <= h.opts.max_cycles; ++cycle) {
        v_cycle(h, 0, res.phi, inst.rho);
        residual_into(res.phi, inst, inst.rho, r);
        const double monitored = rms(r) / denom;
        res.residual_history.push_back(monitored);
        res.iterations = cycle;
        res.final_residual = monitored;
        if (monitored <= h.opts.tol) {
            res.converged = true;
            break;
        }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace poismg
