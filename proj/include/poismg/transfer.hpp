// Inter-grid transfer operators: full-weighting restriction and bilinear
// prolongation between nested node-centered grids (fine n = 2*coarse n - 1).

#pragma once

#include <stdexcept>

#include "poismg/field.hpp"

namespace poismg {

namespace detail {

inline void check_nesting(const UniformGrid& fine, const UniformGrid& coarse,
                          const char* where) {
    if (fine.nx != 2 * coarse.nx - 1 || fine.ny != 2 * coarse.ny - 1)
        throw std::invalid_argument(std::string(where) +
                                    ": grids are not nested with a 2:1 ratio");
}

}  // namespace detail

/// Full weighting: 1/4 center, 1/8 edge neighbors, 1/16 corners at interior
/// coarse nodes; straight injection on the boundary.
inline ScalarField restrict_full_weighting(const ScalarField& fine, const UniformGrid& coarse) {
    detail::check_nesting(fine.grid, coarse, "restrict_full_weighting");
    ScalarField out(coarse);
    for (int J = 0; J < coarse.ny; ++J)
        for (int I = 0; I < coarse.nx; ++I) {
            const int i = 2 * I, j = 2 * J;
            if (coarse.on_boundary(I, J)) {
                out.at(I, J) = fine.at(i, j);
                continue;
            }
            out.at(I, J) = 0.25 * fine.at(i, j) +
                           0.125 * (fine.at(i + 1, j) + fine.at(i - 1, j) + fine.at(i, j + 1) +
                                    fine.at(i, j - 1)) +
                           0.0625 * (fine.at(i + 1, j + 1) + fine.at(i - 1, j + 1) +
                                     fine.at(i + 1, j - 1) + fine.at(i - 1, j - 1));
        }
    return out;
}

/// Bilinear prolongation: coincident nodes copy, edge-midpoint nodes average
/// two parents, cell-center nodes average four.
inline ScalarField prolong_bilinear(const ScalarField& coarse, const UniformGrid& fine) {
    detail::check_nesting(fine, coarse.grid, "prolong_bilinear");
    ScalarField out(fine);
    const int ncx = coarse.grid.nx, ncy = coarse.grid.ny;
    for (int J = 0; J < ncy; ++J)
        for (int I = 0; I < ncx; ++I) {
            out.at(2 * I, 2 * J) = coarse.at(I, J);
            if (I + 1 < ncx)
                out.at(2 * I + 1, 2 * J) = 0.5 * (coarse.at(I, J) + coarse.at(I + 1, J));
            if (J + 1 < ncy)
                out.at(2 * I, 2 * J + 1) = 0.5 * (coarse.at(I, J) + coarse.at(I, J + 1));
            if (I + 1 < ncx && J + 1 < ncy)
                out.at(2 * I + 1, 2 * J + 1) =
                    0.25 * (coarse.at(I, J) + coarse.at(I + 1, J) + coarse.at(I, J + 1) +
                            coarse.at(I + 1, J + 1));
        }
    return out;
}

}  // namespace poismg
