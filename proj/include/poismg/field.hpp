// Uniform computational lattice and node-centered scalar fields.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace poismg {

/// Rectangular node-centered lattice. Boundary nodes are part of the grid,
/// so dx = (x_max - x_min)/(nx - 1) and likewise for dy.
struct UniformGrid {
    int nx = 0;
    int ny = 0;
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double dx = 0.0, dy = 0.0;

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }

    /// Flat index of node (i, j); i runs along x and varies fastest.
    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * nx + i;
    }

    [[nodiscard]] double x(int i) const { return x_min + i * dx; }
    [[nodiscard]] double y(int j) const { return y_min + j * dy; }

    [[nodiscard]] bool on_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
    }

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;
};

struct Extents {
    double x_min, x_max;
    double y_min, y_max;
};

inline UniformGrid make_grid(int nx, int ny, const Extents& e) {
    if (nx < 3 || ny < 3)
        throw std::invalid_argument("make_grid: need at least 3 nodes per axis, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny));
    if (!(e.x_max > e.x_min) || !(e.y_max > e.y_min))
        throw std::invalid_argument("make_grid: degenerate extents");
    UniformGrid g;
    g.nx = nx;
    g.ny = ny;
    g.x_min = e.x_min;
    g.x_max = e.x_max;
    g.y_min = e.y_min;
    g.y_max = e.y_max;
    g.dx = (e.x_max - e.x_min) / (nx - 1);
    g.dy = (e.y_max - e.y_min) / (ny - 1);
    return g;
}

/// Scalar samples at every grid node, stored with i (the x index) fastest.
struct ScalarField {
    UniformGrid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const UniformGrid& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    [[nodiscard]] double& at(int i, int j) { return values[grid.index(i, j)]; }
    [[nodiscard]] double at(int i, int j) const { return values[grid.index(i, j)]; }

    void fill(double v) { values.assign(grid.size(), v); }

    [[nodiscard]] bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

/// Samples f(x, y) at every node.
template <typename F>
ScalarField sample(const UniformGrid& g, F&& f) {
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.at(i, j) = f(g.x(i), g.y(j));
    return out;
}

}  // namespace poismg
