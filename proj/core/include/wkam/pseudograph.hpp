#pragma once

#include <optional>
#include <vector>

#include "wkam/action.hpp"
#include "wkam/weakkam.hpp"

namespace wkam {

// Inclusive, non-wrapping box of grid index coordinates.
struct CellBox {
    std::array<int, 2> lo{0, 0};
    std::array<int, 2> hi{0, 0};
};

// Axis-aligned union of cell boxes on a periodic grid, with a membership mask.
struct CellSet {
    SpatialGrid grid;
    std::vector<CellBox> boxes;
    std::vector<char> mask;

    CellSet() = default;
    explicit CellSet(const SpatialGrid& g) : grid(g), mask(static_cast<size_t>(g.count()), 0) {}

    void add_box(const CellBox& box);
    // Box of half-width `margin` cells around a grid index (clamped to non-wrapping).
    void add_ball(int cell, int margin);
    bool contains(int cell) const { return mask[static_cast<size_t>(cell)] != 0; }
    bool empty() const;
    int count() const;
    std::vector<int> cells() const;
    // Which index values along the axis carry at least one member cell.
    std::vector<char> axis_projection(int axis) const;
};

// Graph of c + du over the differentiability cells of a semi-concave u,
// the canonical representative against the constant form c.dq.  Dual graphs
// share the type; u is then semi-convex.
struct Pseudograph {
    CohomologyClass c;
    GridFunction u;
    bool dual = false;
};

struct PseudographNorm {
    double value = 0.0;
    bool restricted = false;
};

struct WedgeSet {
    std::vector<int> cells;              // argmin cells of u - u_dual within tolerance
    std::vector<PhasePoint> phase_points;
    double tolerance = 0.0;
    double min_value = 0.0;
};

// Closed one-form with prescribed class, null on a given cell set, stored as
// per-axis bump densities together with the periodic primitive of
// (density - 1), so that c.dq + mu = (c + d).dq + dg.
struct BumpForm {
    int dim = 1;
    Vec2 d{0.0, 0.0};
    std::array<bool, 2> active{false, false};
    std::array<double, 2> support_lo{0.0, 0.0};
    std::array<double, 2> support_hi{1.0, 1.0};

    double density(int axis, double q) const;
    double primitive(const TorusPoint& q) const;  // g(q), periodic, g(0) = 0
};

// (source, step count) witnessing the attained minimum at a target cell.
struct Attainment {
    int source = -1;
    int k = 0;
};

struct RestrictedEvolution {
    Pseudograph graph;
    std::vector<Attainment> attainments;  // per target cell
};

PseudographNorm pseudograph_norm(const Pseudograph& g);
PseudographNorm pseudograph_norm_restricted(const Pseudograph& g, const CellSet& set);

// Sup-metric |c - c'| + quotient distance of potentials (same-c comparisons
// reduce to the quotient term).
double pseudograph_dist(const Pseudograph& a, const Pseudograph& b);

std::vector<PhasePoint> graph_points(const Pseudograph& g, double K);

Pseudograph evolve(const Pseudograph& g, const ActionKernel& kernel, const AlphaEstimate& alpha);

// min over sources in the set and step counts in [N, N_prime] of
// u(y) + A^k(y, x) + k alpha, with per-target attainment records.
RestrictedEvolution evolve_restricted(const Pseudograph& g, const ActionKernel& kernel,
                                      const AlphaEstimate& alpha, const CellSet& set, int N,
                                      int N_prime);

WedgeSet wedge(const Pseudograph& g, const Pseudograph& g_dual, double tol_min);

BumpForm bump_form(const CohomologyClass& d_class, const CellSet& set, const SpatialGrid& grid);

Pseudograph modify_cohomology(const Pseudograph& g, const CohomologyClass& target_c,
                              const CellSet& set);

// Pointwise min over the k deck translates along the covered axis.
Pseudograph deck_symmetrize(const Pseudograph& g, int axis, int k);

}  // namespace wkam
