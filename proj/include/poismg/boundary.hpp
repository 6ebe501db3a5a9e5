// Boundary conditions: per-edge Dirichlet/Neumann specs, embedded interior
// Dirichlet masks, node classification and boundary enforcement.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "poismg/field.hpp"

namespace poismg {

enum class EdgeSide { West, East, South, North };

/// One outer-boundary edge. Dirichlet carries a value as a function of the
/// coordinate running along the edge (x for South/North, y for West/East).
struct EdgeCondition {
    enum class Kind { Dirichlet, NeumannZero };
    Kind kind = Kind::Dirichlet;
    std::function<double(double)> value;  // Dirichlet only

    static EdgeCondition dirichlet(double constant) {
        return {Kind::Dirichlet, [constant](double) { return constant; }};
    }
    static EdgeCondition dirichlet(std::function<double(double)> fn) {
        return {Kind::Dirichlet, std::move(fn)};
    }
    static EdgeCondition neumann_zero() { return {Kind::NeumannZero, {}}; }
};

/// Interior nodes pinned to fixed values (embedded obstacles, generated-grid
/// boundary correspondences). Flags and values are full-grid arrays.
struct EmbeddedMask {
    std::vector<std::uint8_t> fixed;  // nx*ny, nonzero = pinned
    std::vector<double> value;        // nx*ny, used where fixed

    [[nodiscard]] bool contains(std::size_t idx) const { return fixed[idx] != 0; }
};

/// How NeumannZero edges are realized. The zero-gradient copy sets the edge
/// node equal to the first interior node; the mirror variant keeps edge nodes
/// as unknowns and reflects the stencil across the edge.
enum class NeumannTreatment { ZeroGradientCopy, MirrorGhost };

struct BoundarySpec {
    EdgeCondition west = EdgeCondition::dirichlet(0.0);
    EdgeCondition east = EdgeCondition::dirichlet(0.0);
    EdgeCondition south = EdgeCondition::dirichlet(0.0);
    EdgeCondition north = EdgeCondition::dirichlet(0.0);
    std::optional<EmbeddedMask> mask;
    NeumannTreatment neumann = NeumannTreatment::ZeroGradientCopy;

    static BoundarySpec all_dirichlet(double constant) {
        BoundarySpec bc;
        bc.west = bc.east = bc.south = bc.north = EdgeCondition::dirichlet(constant);
        return bc;
    }

    /// Same edge kinds and mask footprint with all values zeroed; the shape
    /// a multigrid correction problem needs.
    [[nodiscard]] BoundarySpec zeroed() const {
        BoundarySpec out;
        auto zero_kind = [](const EdgeCondition& e) {
            return e.kind == EdgeCondition::Kind::Dirichlet ? EdgeCondition::dirichlet(0.0)
                                                            : EdgeCondition::neumann_zero();
        };
        out.west = zero_kind(west);
        out.east = zero_kind(east);
        out.south = zero_kind(south);
        out.north = zero_kind(north);
        if (mask) {
            EmbeddedMask m;
            m.fixed = mask->fixed;
            m.value.assign(mask->fixed.size(), 0.0);
            out.mask = std::move(m);
        }
        out.neumann = neumann;
        return out;
    }
};

/// Role of a node in the discrete system.
enum class NodeRole : std::uint8_t {
    Free,             // swept unknown, standard stencil
    FixedDirichlet,   // outer Dirichlet edge or embedded mask
    NeumannDependent, // edge node updated by the zero-gradient copy
    NeumannFree,      // edge unknown swept with a mirrored stencil
};

namespace detail {

inline const EdgeCondition& edge_of(const BoundarySpec& bc, EdgeSide s) {
    switch (s) {
        case EdgeSide::West: return bc.west;
        case EdgeSide::East: return bc.east;
        case EdgeSide::South: return bc.south;
        default: return bc.north;
    }
}

inline bool is_dirichlet(const BoundarySpec& bc, EdgeSide s) {
    return edge_of(bc, s).kind == EdgeCondition::Kind::Dirichlet;
}

}  // namespace detail

/// Classifies every node. Where a Dirichlet edge meets a Neumann edge at a
/// corner, Dirichlet wins.
inline std::vector<NodeRole> classify_nodes(const UniformGrid& g, const BoundarySpec& bc) {
    std::vector<NodeRole> roles(g.size(), NodeRole::Free);
    if (bc.mask) {
        if (bc.mask->fixed.size() != g.size() || bc.mask->value.size() != g.size())
            throw std::invalid_argument("classify_nodes: mask arrays do not match the grid");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (bc.mask->contains(g.index(i, j))) {
                    if (g.on_boundary(i, j))
                        throw std::invalid_argument(
                            "classify_nodes: embedded mask touches the outer boundary");
                    roles[g.index(i, j)] = NodeRole::FixedDirichlet;
                }
    }
    const NodeRole neumann_role = bc.neumann == NeumannTreatment::ZeroGradientCopy
                                      ? NodeRole::NeumannDependent
                                      : NodeRole::NeumannFree;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.on_boundary(i, j)) continue;
            bool dirichlet = false;
            if (i == 0 && detail::is_dirichlet(bc, EdgeSide::West)) dirichlet = true;
            if (i == g.nx - 1 && detail::is_dirichlet(bc, EdgeSide::East)) dirichlet = true;
            if (j == 0 && detail::is_dirichlet(bc, EdgeSide::South)) dirichlet = true;
            if (j == g.ny - 1 && detail::is_dirichlet(bc, EdgeSide::North)) dirichlet = true;
            roles[g.index(i, j)] = dirichlet ? NodeRole::FixedDirichlet : neumann_role;
        }
    return roles;
}

/// Re-applies only the zero-gradient copies (cheap per-sweep refresh).
/// A corner joining two Neumann edges copies from the diagonal neighbor.
inline void refresh_neumann_copies(ScalarField& phi, const BoundarySpec& bc) {
    if (bc.neumann != NeumannTreatment::ZeroGradientCopy) return;
    const UniformGrid& g = phi.grid;
    const bool w = !detail::is_dirichlet(bc, EdgeSide::West);
    const bool e = !detail::is_dirichlet(bc, EdgeSide::East);
    const bool s = !detail::is_dirichlet(bc, EdgeSide::South);
    const bool n = !detail::is_dirichlet(bc, EdgeSide::North);
    if (w)
        for (int j = 1; j < g.ny - 1; ++j) phi.at(0, j) = phi.at(1, j);
    if (e)
        for (int j = 1; j < g.ny - 1; ++j) phi.at(g.nx - 1, j) = phi.at(g.nx - 2, j);
    if (s)
        for (int i = 1; i < g.nx - 1; ++i) phi.at(i, 0) = phi.at(i, 1);
    if (n)
        for (int i = 1; i < g.nx - 1; ++i) phi.at(i, g.ny - 1) = phi.at(i, g.ny - 2);
    if (w && s) phi.at(0, 0) = phi.at(1, 1);
    if (e && s) phi.at(g.nx - 1, 0) = phi.at(g.nx - 2, 1);
    if (w && n) phi.at(0, g.ny - 1) = phi.at(1, g.ny - 2);
    if (e && n) phi.at(g.nx - 1, g.ny - 1) = phi.at(g.nx - 2, g.ny - 2);
}

/// Writes Dirichlet values, embedded-mask values and zero-gradient copies
/// into phi. Edges are processed in the fixed order W, E, S, N so corner
/// writes are deterministic.
inline void apply_bc(ScalarField& phi, const BoundarySpec& bc) {
    const UniformGrid& g = phi.grid;
    auto set_edge = [&](EdgeSide side) {
        const EdgeCondition& e = detail::edge_of(bc, side);
        if (e.kind != EdgeCondition::Kind::Dirichlet) return;
        switch (side) {
            case EdgeSide::West:
                for (int j = 0; j < g.ny; ++j) phi.at(0, j) = e.value(g.y(j));
                break;
            case EdgeSide::East:
                for (int j = 0; j < g.ny; ++j) phi.at(g.nx - 1, j) = e.value(g.y(j));
                break;
            case EdgeSide::South:
                for (int i = 0; i < g.nx; ++i) phi.at(i, 0) = e.value(g.x(i));
                break;
            case EdgeSide::North:
                for (int i = 0; i < g.nx; ++i) phi.at(i, g.ny - 1) = e.value(g.x(i));
                break;
        }
    };
    set_edge(EdgeSide::West);
    set_edge(EdgeSide::East);
    set_edge(EdgeSide::South);
    set_edge(EdgeSide::North);

    if (bc.mask)
        for (std::size_t k = 0; k < phi.values.size(); ++k)
            if (bc.mask->contains(k)) phi.values[k] = bc.mask->value[k];

    if (bc.neumann == NeumannTreatment::ZeroGradientCopy) refresh_neumann_copies(phi, bc);
}

}  // namespace poismg
