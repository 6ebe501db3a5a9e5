// Equivalent material tensor induced by a coordinate map, and the forward /
// backward transforms of sources, potentials and vector fields.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "poismg/coordinate_map.hpp"
#include "poismg/field.hpp"

namespace poismg {

/// Symmetric positive-definite coefficient field det(J) J^-1 (J^T)^-1 that
/// encodes all geometric distortion of the map on the uniform grid.
struct MaterialTensor {
    ScalarField e_xx, e_xy, e_yx, e_yy;
    ScalarField det_j;

    void validate() const {
        const UniformGrid& g = e_xx.grid;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                const double xx = e_xx.values[k], yy = e_yy.values[k];
                const double xy = e_xy.values[k], yx = e_yx.values[k];
                if (xy != yx)
                    throw std::runtime_error("MaterialTensor: asymmetric off-diagonals at node (" +
                                             std::to_string(i) + "," + std::to_string(j) + ")");
                if (!(xx > 0.0) || !(yy > 0.0) || !(xx * yy - xy * xy > 0.0))
                    throw std::runtime_error(
                        "MaterialTensor: not positive-definite at node (" + std::to_string(i) +
                        "," + std::to_string(j) + ")");
            }
    }
};

/// Builds the tensor from a Jacobian field:
///   e_xx = (j_yy^2 + j_xy^2)/det,  e_yy = (j_yx^2 + j_xx^2)/det,
///   e_xy = e_yx = (-j_yy j_yx - j_xy j_xx)/det.
inline MaterialTensor material_tensor(const JacobianField& J) {
    const UniformGrid& g = J.j_xx.grid;
    MaterialTensor t{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
                     ScalarField(g)};
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double xx = J.j_xx.values[k], xy = J.j_xy.values[k];
        const double yx = J.j_yx.values[k], yy = J.j_yy.values[k];
        const double det = J.det.values[k];
        if (!(det > 0.0))
            throw std::runtime_error("material_tensor: nonpositive det(J)");
        t.e_xx.values[k] = (yy * yy + xy * xy) / det;
        t.e_yy.values[k] = (yx * yx + xx * xx) / det;
        const double off = (-yy * yx - xy * xx) / det;
        t.e_xy.values[k] = off;
        t.e_yx.values[k] = off;
        t.det_j.values[k] = det;
    }
    return t;
}

inline MaterialTensor identity_tensor(const UniformGrid& g) {
    MaterialTensor t{ScalarField(g, 1.0), ScalarField(g, 0.0), ScalarField(g, 0.0),
                     ScalarField(g, 1.0), ScalarField(g, 1.0)};
    return t;
}

/// Source transform rho = rho' det(J): the physical charge density scaled
/// onto the computational grid.
inline ScalarField transform_source(const ScalarField& rho_phys, const ScalarField& det_j) {
    require_same_grid(rho_phys, det_j, "transform_source");
    ScalarField out = rho_phys;
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] *= det_j.values[k];
    return out;
}

/// Maps a computational-grid vector field to physical components through
/// (J^T)^-1 applied nodewise.
inline std::pair<ScalarField, ScalarField> physical_field(const ScalarField& e_comp_x,
                                                          const ScalarField& e_comp_y,
                                                          const JacobianField& J) {
    require_same_grid(e_comp_x, e_comp_y, "physical_field");
    require_same_grid(e_comp_x, J.det, "physical_field");
    ScalarField px(e_comp_x.grid), py(e_comp_x.grid);
    for (std::size_t k = 0; k < px.values.size(); ++k) {
        const double det = J.det.values[k];
        if (!(std::abs(det) > 0.0))
            throw std::runtime_error("physical_field: singular Jacobian node");
        // (J^T)^-1 = (1/det) [[j_yy, -j_yx], [-j_xy, j_xx]]
        const double ex = e_comp_x.values[k], ey = e_comp_y.values[k];
        px.values[k] = (J.j_yy.values[k] * ex - J.j_yx.values[k] * ey) / det;
        py.values[k] = (-J.j_xy.values[k] * ex + J.j_xx.values[k] * ey) / det;
    }
    return {std::move(px), std::move(py)};
}

/// The potential is invariant under the map; only the node coordinates
/// change when plotting. Returned by value for symmetry with the other
/// transforms.
inline ScalarField potential_passthrough(const ScalarField& phi) { return phi; }

}  // namespace poismg
