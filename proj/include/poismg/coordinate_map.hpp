// Coordinate maps from the uniform computational grid to the physical
// domain, with exact (closed-form) and finite-difference Jacobians.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "poismg/field.hpp"

namespace poismg {

struct IdentityMap {};

/// (x, y) -> (x cos y, x sin y); x is the radius, y the angle.
struct PolarMap {};

/// Separable hyperbolic-sine stretching (x, y) -> (s sinh(a x), s sinh(a y));
/// clusters physical nodes around the origin.
struct SinhStretchMap {
    double s = 1.0;
    double alpha = 1.0;
};

/// Nodewise physical coordinates, typically produced by numerical grid
/// generation. Coordinates exist at nodes only; no sub-node interpolation.
struct TabulatedMap {
    ScalarField xp;
    ScalarField yp;
};

using CoordinateMap = std::variant<IdentityMap, PolarMap, SinhStretchMap, TabulatedMap>;

inline bool is_closed_form(const CoordinateMap& map) {
    return !std::holds_alternative<TabulatedMap>(map);
}

/// Physical image (x', y') of a computational point. Tabulated maps accept
/// node positions only (snapped within a tiny tolerance).
inline std::array<double, 2> map_point(const CoordinateMap& map, double x, double y) {
    if (std::holds_alternative<IdentityMap>(map)) return {x, y};
    if (const auto* p = std::get_if<PolarMap>(&map)) {
        (void)p;
        return {x * std::cos(y), x * std::sin(y)};
    }
    if (const auto* s = std::get_if<SinhStretchMap>(&map))
        return {s->s * std::sinh(s->alpha * x), s->s * std::sinh(s->alpha * y)};

    const auto& tab = std::get<TabulatedMap>(map);
    const UniformGrid& g = tab.xp.grid;
    const double fi = (x - g.x_min) / g.dx;
    const double fj = (y - g.y_min) / g.dy;
    const int i = static_cast<int>(std::lround(fi));
    const int j = static_cast<int>(std::lround(fj));
    if (i < 0 || j < 0 || i >= g.nx || j >= g.ny ||
        std::abs(fi - i) > 1e-9 || std::abs(fj - j) > 1e-9)
        throw std::invalid_argument("map_point: tabulated maps are defined at grid nodes only");
    return {tab.xp.at(i, j), tab.yp.at(i, j)};
}

/// Per-node Jacobian components of the coordinate map and its determinant.
/// The determinant must stay positive: the equivalent-tensor construction
/// requires an orientation-preserving map.
struct JacobianField {
    ScalarField j_xx, j_xy, j_yx, j_yy, det;

    /// Recomputes det from the components and checks positivity.
    void validate() const {
        const UniformGrid& g = j_xx.grid;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                const double d = j_xx.values[k] * j_yy.values[k] -
                                 j_xy.values[k] * j_yx.values[k];
                if (std::abs(d - det.values[k]) > 1e-12 * std::max(1.0, std::abs(d)))
                    throw std::runtime_error("JacobianField: stored det disagrees at node (" +
                                             std::to_string(i) + "," + std::to_string(j) + ")");
                if (!(det.values[k] > 0.0))
                    throw std::runtime_error("JacobianField: nonpositive det at node (" +
                                             std::to_string(i) + "," + std::to_string(j) +
                                             "), map is not orientation-preserving");
            }
    }
};

namespace detail {

struct JacobianEntries {
    double xx, xy, yx, yy;
};

inline JacobianEntries exact_jacobian_at(const CoordinateMap& map, double x, double y) {
    if (std::holds_alternative<IdentityMap>(map)) return {1.0, 0.0, 0.0, 1.0};
    if (std::holds_alternative<PolarMap>(map)) {
        const double c = std::cos(y), s = std::sin(y);
        return {c, -x * s, s, x * c};
    }
    if (const auto* m = std::get_if<SinhStretchMap>(&map)) {
        const double gx = m->s * m->alpha * std::cosh(m->alpha * x);
        const double gy = m->s * m->alpha * std::cosh(m->alpha * y);
        return {gx, 0.0, 0.0, gy};
    }
    throw std::invalid_argument("jacobian_exact: tabulated maps have no closed-form Jacobian");
}

}  // namespace detail

/// Exact Jacobian of a closed-form map sampled at every node.
inline JacobianField jacobian_exact(const CoordinateMap& map, const UniformGrid& g) {
    if (!is_closed_form(map))
        throw std::invalid_argument("jacobian_exact: tabulated maps have no closed-form Jacobian");
    JacobianField J{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
                    ScalarField(g)};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto e = detail::exact_jacobian_at(map, g.x(i), g.y(j));
            J.j_xx.at(i, j) = e.xx;
            J.j_xy.at(i, j) = e.xy;
            J.j_yx.at(i, j) = e.yx;
            J.j_yy.at(i, j) = e.yy;
            J.det.at(i, j) = e.xx * e.yy - e.xy * e.yx;
        }
    J.validate();
    return J;
}

namespace detail {

// d/dt along one axis: central differences inside, second-order one-sided
// at the ends.
inline double axis_derivative(const ScalarField& f, int i, int j, bool along_x, double h) {
    const UniformGrid& g = f.grid;
    const int n = along_x ? g.nx : g.ny;
    const int t = along_x ? i : j;
    auto value = [&](int k) { return along_x ? f.at(k, j) : f.at(i, k); };
    if (t == 0) return (-3.0 * value(0) + 4.0 * value(1) - value(2)) / (2.0 * h);
    if (t == n - 1)
        return (3.0 * value(n - 1) - 4.0 * value(n - 2) + value(n - 3)) / (2.0 * h);
    return (value(t + 1) - value(t - 1)) / (2.0 * h);
}

}  // namespace detail

/// Finite-difference Jacobian of tabulated coordinates: central differences
/// at interior nodes, second-order one-sided stencils on the boundary.
/// Throws if the resulting determinant is nonpositive anywhere.
inline JacobianField jacobian_numeric(const ScalarField& xp, const ScalarField& yp) {
    require_same_grid(xp, yp, "jacobian_numeric");
    const UniformGrid& g = xp.grid;
    if (g.nx < 3 || g.ny < 3)
        throw std::invalid_argument("jacobian_numeric: need at least 3 nodes per axis");
    JacobianField J{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
                    ScalarField(g)};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double xx = detail::axis_derivative(xp, i, j, true, g.dx);
            const double xy = detail::axis_derivative(xp, i, j, false, g.dy);
            const double yx = detail::axis_derivative(yp, i, j, true, g.dx);
            const double yy = detail::axis_derivative(yp, i, j, false, g.dy);
            const double det = xx * yy - xy * yx;
            if (!(det > 0.0))
                throw std::runtime_error(
                    "jacobian_numeric: nonpositive det(J) = " + std::to_string(det) +
                    " at node (" + std::to_string(i) + "," + std::to_string(j) +
                    "); the tabulated map folds over");
            J.j_xx.at(i, j) = xx;
            J.j_xy.at(i, j) = xy;
            J.j_yx.at(i, j) = yx;
            J.j_yy.at(i, j) = yy;
            J.det.at(i, j) = det;
        }
    return J;
}

/// Jacobian for any map kind: exact when closed-form, finite-difference for
/// tabulated coordinates.
inline JacobianField jacobian_on_grid(const CoordinateMap& map, const UniformGrid& g) {
    if (is_closed_form(map)) return jacobian_exact(map, g);
    const auto& tab = std::get<TabulatedMap>(map);
    if (!(tab.xp.grid == g))
        throw std::invalid_argument("jacobian_on_grid: tabulated map lives on a different grid");
    return jacobian_numeric(tab.xp, tab.yp);
}

/// Physical node images for every node of g.
inline std::pair<ScalarField, ScalarField> map_nodes(const CoordinateMap& map,
                                                     const UniformGrid& g) {
    if (const auto* tab = std::get_if<TabulatedMap>(&map)) {
        if (!(tab->xp.grid == g))
            throw std::invalid_argument("map_nodes: tabulated map lives on a different grid");
        return {tab->xp, tab->yp};
    }
    ScalarField xp(g), yp(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto p = map_point(map, g.x(i), g.y(j));
            xp.at(i, j) = p[0];
            yp.at(i, j) = p[1];
        }
    return {xp, yp};
}

}  // namespace poismg
