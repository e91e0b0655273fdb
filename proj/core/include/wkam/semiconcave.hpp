#pragma once

#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

// Discrete K-semi-concavity certificate: the maximal centered second
// difference along coordinate axes (plus diagonals for d = 2).
struct SemiconcavityReport {
    double constant = 0.0;               // max(0, measured)
    std::vector<double> direction_max;   // per probed direction
    int witness = 0;                     // grid index attaining the max
};

struct SuperDifferential {
    bool differentiable = false;
    Vec2 gradient{0.0, 0.0};  // centered difference, valid when differentiable
    Vec2 lower{0.0, 0.0};     // per-axis one-sided slope box otherwise
    Vec2 upper{0.0, 0.0};
};

struct LipschitzGraphReport {
    std::vector<int> cells;           // argmin cells of u + v within tolerance
    std::vector<Vec2> covectors;      // du at those cells
    double lipschitz_ratio = 0.0;     // max |du_a - du_b| / dist(a,b)
    double min_value = 0.0;
};

SemiconcavityReport semiconcavity_constant(const GridFunction& u);

SuperDifferential superdifferential_at(const GridFunction& u, int cell, double K);

LipschitzGraphReport lipschitz_graph_on_minset(const GridFunction& u, const GridFunction& v,
                                               double tol_min);

// Centered-difference covector of u at a cell.
Vec2 grid_gradient(const GridFunction& u, int cell);

}  // namespace wkam
