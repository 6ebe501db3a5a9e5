// Numerical grid generation: harmonic fill of prescribed boundary
// correspondences. Two Laplace problems (one per physical coordinate) are
// solved with the multigrid machinery and an identity tensor, producing a
// tabulated coordinate map.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poismg/coordinate_map.hpp"
#include "poismg/multigrid.hpp"

namespace poismg {

/// Maps the boundary of the square [-b, b]^2 onto the circle of radius b,
/// one square side per quadrant.
struct SquareToCircle {
    double b = 1.0;
};

/// Sinusoidal displacement of a rectangular subregion's boundary. The
/// amplitude is a multiple of the grid spacing; the displacement vanishes at
/// the subregion corners.
struct SinusoidalDeform {
    double a = 0.0;  // amplitude in grid-spacing units
    int n = 1;       // oscillation count along each perturbed edge
    double x0 = 0.0, xc = 0.0;
    double y0 = 0.0, yc = 0.0;
};

/// Boundary image of a point on the square |x| = b or |y| = b.
inline std::array<double, 2> square_to_circle_point(double b, double x, double y) {
    if (!(b > 0.0)) throw std::invalid_argument("square_to_circle_point: b must be positive");
    const double tol = 1e-9 * b;
    if (std::abs(y + b) <= tol) return {x / std::sqrt(2.0), -b * std::sqrt(1.0 - x * x / (2.0 * b * b))};
    if (std::abs(y - b) <= tol) return {x / std::sqrt(2.0), b * std::sqrt(1.0 - x * x / (2.0 * b * b))};
    if (std::abs(x + b) <= tol) return {-b * std::sqrt(1.0 - y * y / (2.0 * b * b)), y / std::sqrt(2.0)};
    if (std::abs(x - b) <= tol) return {b * std::sqrt(1.0 - y * y / (2.0 * b * b)), y / std::sqrt(2.0)};
    throw std::invalid_argument("square_to_circle_point: point is not on the square boundary");
}

/// Displaced image of a subregion-boundary point (identity plus the
/// sinusoidal displacement of the edges it lies on).
inline std::array<double, 2> sinusoidal_deform_point(const SinusoidalDeform& d, double dx,
                                                     double dy, double x, double y) {
    const double pi = 3.14159265358979323846;
    double xp = x, yp = y;
    const double tx = 1e-9 * (d.xc - d.x0), ty = 1e-9 * (d.yc - d.y0);
    const bool in_y = y >= d.y0 - ty && y <= d.yc + ty;
    const bool in_x = x >= d.x0 - tx && x <= d.xc + tx;
    if (in_y && std::abs(x - d.x0) <= tx)
        xp = x - d.a * dx * std::sin(pi * d.n * (y - d.y0) / (d.yc - d.y0));
    if (in_y && std::abs(x - d.xc) <= tx)
        xp = x + d.a * dx * std::sin(pi * d.n * (y - d.y0) / (d.yc - d.y0));
    if (in_x && std::abs(y - d.y0) <= ty)
        yp = y - d.a * dy * std::sin(pi * d.n * (x - d.x0) / (d.xc - d.x0));
    if (in_x && std::abs(y - d.yc) <= ty)
        yp = y + d.a * dy * std::sin(pi * d.n * (x - d.x0) / (d.xc - d.x0));
    return {xp, yp};
}

/// Node-aligned index rectangle of a physical subregion; throws if a corner
/// misses the lattice.
struct IndexRect {
    int i0, i1, j0, j1;
};

inline IndexRect subregion_indices(const UniformGrid& g, double x0, double xc, double y0,
                                   double yc) {
    auto snap = [](double coord, double origin, double h, int n, const char* what) {
        const double f = (coord - origin) / h;
        const int k = static_cast<int>(std::lround(f));
        if (k < 0 || k >= n || std::abs(f - k) > 1e-9)
            throw std::invalid_argument(std::string("subregion bound ") + what +
                                        " does not land on a grid node");
        return k;
    };
    IndexRect r{snap(x0, g.x_min, g.dx, g.nx, "x0"), snap(xc, g.x_min, g.dx, g.nx, "xc"),
                snap(y0, g.y_min, g.dy, g.ny, "y0"), snap(yc, g.y_min, g.dy, g.ny, "yc")};
    if (r.i0 >= r.i1 || r.j0 >= r.j1)
        throw std::invalid_argument("subregion is empty or inverted");
    if (r.i0 <= 0 || r.j0 <= 0 || r.i1 >= g.nx - 1 || r.j1 >= g.ny - 1)
        throw std::invalid_argument("subregion must lie strictly inside the domain");
    return r;
}

/// Boundary correspondence feeding the harmonic map solves: images for every
/// outer boundary point, plus an optional embedded rectangle whose ring
/// nodes carry their own images (interior Dirichlet data).
struct BoundaryMap {
    std::function<std::array<double, 2>(double, double)> outer;
    struct Embedded {
        IndexRect rect;
        std::function<std::array<double, 2>(double, double)> image;
    };
    std::optional<Embedded> embedded;
};

inline BoundaryMap identity_boundary() {
    BoundaryMap bm;
    bm.outer = [](double x, double y) { return std::array<double, 2>{x, y}; };
    return bm;
}

/// Whole-boundary square-to-circle correspondence for a grid spanning
/// [-b, b]^2.
inline BoundaryMap square_to_circle_boundary(const SquareToCircle& s) {
    BoundaryMap bm;
    const double b = s.b;
    bm.outer = [b](double x, double y) { return square_to_circle_point(b, x, y); };
    return bm;
}

/// Identity outer boundary with an embedded square ring mapped to a circle;
/// the ring spans [x0, xc] x [y0, yc] and the circle radius is half its
/// width.
inline BoundaryMap embedded_circle_boundary(const UniformGrid& g, double x0, double xc,
                                            double y0, double yc) {
    BoundaryMap bm = identity_boundary();
    const IndexRect rect = subregion_indices(g, x0, xc, y0, yc);
    const double cx = 0.5 * (x0 + xc), cy = 0.5 * (y0 + yc);
    const double b = 0.5 * (xc - x0);
    if (std::abs((yc - y0) - (xc - x0)) > 1e-9 * (xc - x0))
        throw std::invalid_argument("embedded_circle_boundary: subregion must be square");
    bm.embedded = BoundaryMap::Embedded{
        rect, [cx, cy, b](double x, double y) {
            const auto p = square_to_circle_point(b, x - cx, y - cy);
            return std::array<double, 2>{cx + p[0], cy + p[1]};
        }};
    return bm;
}

/// Identity outer boundary with a sinusoidally deformed embedded ring.
inline BoundaryMap sinusoidal_obstacle_boundary(const UniformGrid& g,
                                                const SinusoidalDeform& d) {
    BoundaryMap bm = identity_boundary();
    const IndexRect rect = subregion_indices(g, d.x0, d.xc, d.y0, d.yc);
    const double dx = g.dx, dy = g.dy;
    bm.embedded = BoundaryMap::Embedded{rect, [d, dx, dy](double x, double y) {
                                            return sinusoidal_deform_point(d, dx, dy, x, y);
                                        }};
    return bm;
}

/// One boundary node and its physical image.
struct NodeImage {
    int i, j;
    double xp, yp;
};

/// Samples the prescribed images at the nodes that carry Dirichlet data:
/// all outer boundary nodes, then the embedded ring nodes if present.
inline std::vector<NodeImage> boundary_trace(const BoundaryMap& bm, const UniformGrid& g) {
    std::vector<NodeImage> out;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.on_boundary(i, j)) continue;
            const auto p = bm.outer(g.x(i), g.y(j));
            out.push_back({i, j, p[0], p[1]});
        }
    if (bm.embedded) {
        const IndexRect& r = bm.embedded->rect;
        for (int j = r.j0; j <= r.j1; ++j)
            for (int i = r.i0; i <= r.i1; ++i) {
                if (i != r.i0 && i != r.i1 && j != r.j0 && j != r.j1) continue;
                const auto p = bm.embedded->image(g.x(i), g.y(j));
                out.push_back({i, j, p[0], p[1]});
            }
    }
    return out;
}

inline std::vector<NodeImage> boundary_trace(const SquareToCircle& s, const UniformGrid& g) {
    return boundary_trace(square_to_circle_boundary(s), g);
}

inline std::vector<NodeImage> boundary_trace(const SinusoidalDeform& d, const UniformGrid& g) {
    return boundary_trace(sinusoidal_obstacle_boundary(g, d), g);
}

struct GenOptions {
    double tol = 1e-10;
    int max_cycles = 200;
    MgOptions mg;
};

namespace detail {

// The trace must be finite and continuous where edges meet: compare the
// corner image against short extrapolations along both adjacent edges.
inline void check_corner_continuity(const BoundaryMap& bm, const UniformGrid& g) {
    const double corners[4][2] = {{g.x_min, g.y_min}, {g.x_max, g.y_min},
                                  {g.x_min, g.y_max}, {g.x_max, g.y_max}};
    for (const auto& c : corners) {
        const auto p = bm.outer(c[0], c[1]);
        if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
            throw std::invalid_argument("generate_map: boundary trace not finite at corner");
        const double sx = c[0] == g.x_min ? 1.0 : -1.0;
        const double sy = c[1] == g.y_min ? 1.0 : -1.0;
        const double hx = 1e-7 * (g.x_max - g.x_min);
        const double hy = 1e-7 * (g.y_max - g.y_min);
        const auto along_x = bm.outer(c[0] + sx * hx, c[1]);
        const auto along_y = bm.outer(c[0], c[1] + sy * hy);
        for (int comp = 0; comp < 2; ++comp) {
            const double lim_x = along_x[comp];
            const double lim_y = along_y[comp];
            if (std::abs(lim_x - p[comp]) > 1e-3 || std::abs(lim_y - p[comp]) > 1e-3)
                throw std::invalid_argument(
                    "generate_map: boundary trace discontinuous at a corner");
        }
    }
}

inline ScalarField solve_harmonic(const UniformGrid& g, const BoundaryMap& bm, int component,
                                  const GenOptions& opts) {
    BoundarySpec bc;
    auto edge_fn = [&bm, component](double fx, double fy, bool vary_y) {
        return EdgeCondition::dirichlet([&bm, component, fx, fy, vary_y](double t) {
            const auto p = vary_y ? bm.outer(fx, t) : bm.outer(t, fy);
            return p[component];
        });
    };
    bc.west = edge_fn(g.x_min, 0.0, true);
    bc.east = edge_fn(g.x_max, 0.0, true);
    bc.south = edge_fn(0.0, g.y_min, false);
    bc.north = edge_fn(0.0, g.y_max, false);
    if (bm.embedded) {
        EmbeddedMask m;
        m.fixed.assign(g.size(), 0);
        m.value.assign(g.size(), 0.0);
        const IndexRect& r = bm.embedded->rect;
        for (int j = r.j0; j <= r.j1; ++j)
            for (int i = r.i0; i <= r.i1; ++i) {
                if (i != r.i0 && i != r.i1 && j != r.j0 && j != r.j1) continue;
                m.fixed[g.index(i, j)] = 1;
                m.value[g.index(i, j)] = bm.embedded->image(g.x(i), g.y(j))[component];
            }
        bc.mask = std::move(m);
    }
    ProblemInstance inst = make_instance(g, identity_tensor(g), ScalarField(g), std::move(bc));
    MgOptions mg = opts.mg;
    mg.tol = opts.tol;
    mg.max_cycles = opts.max_cycles;
    MultigridHierarchy h = build_hierarchy(inst, IdentityMap{}, mg);
    SolveResult res = mg_solve(h);
    if (!res.converged)
        throw SolveFailure("generate_map: harmonic solve did not converge (residual " +
                                 std::to_string(res.final_residual) + ")");
    return std::move(res.phi);
}

}  // namespace detail

/// Solves the two harmonic-fill problems and returns the tabulated map.
/// Throws on solver failure or a folded grid (nonpositive det anywhere).
inline CoordinateMap generate_map(const BoundaryMap& bm, const UniformGrid& g,
                                  const GenOptions& opts = {}) {
    detail::check_corner_continuity(bm, g);
    TabulatedMap tab;
    tab.xp = detail::solve_harmonic(g, bm, 0, opts);
    tab.yp = detail::solve_harmonic(g, bm, 1, opts);
    jacobian_numeric(tab.xp, tab.yp);  // orientation check
    return tab;
}

/// Mesh validity summary emitted next to generated maps.
struct MeshQuality {
    double min_det = 0.0;
    double max_det = 0.0;
    double min_spacing = 0.0;
    bool orientation_ok = false;
};

inline MeshQuality mesh_quality(const TabulatedMap& tab) {
    const UniformGrid& g = tab.xp.grid;
    MeshQuality q;
    q.min_det = std::numeric_limits<double>::infinity();
    q.max_det = -std::numeric_limits<double>::infinity();
    q.min_spacing = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double xx = detail::axis_derivative(tab.xp, i, j, true, g.dx);
            const double xy = detail::axis_derivative(tab.xp, i, j, false, g.dy);
            const double yx = detail::axis_derivative(tab.yp, i, j, true, g.dx);
            const double yy = detail::axis_derivative(tab.yp, i, j, false, g.dy);
            const double det = xx * yy - xy * yx;
            q.min_det = std::min(q.min_det, det);
            q.max_det = std::max(q.max_det, det);
            if (i + 1 < g.nx)
                q.min_spacing = std::min(
                    q.min_spacing, std::hypot(tab.xp.at(i + 1, j) - tab.xp.at(i, j),
                                              tab.yp.at(i + 1, j) - tab.yp.at(i, j)));
            if (j + 1 < g.ny)
                q.min_spacing = std::min(
                    q.min_spacing, std::hypot(tab.xp.at(i, j + 1) - tab.xp.at(i, j),
                                              tab.yp.at(i, j + 1) - tab.yp.at(i, j)));
        }
    q.orientation_ok = q.min_det > 0.0;
    return q;
}

}  // namespace poismg
