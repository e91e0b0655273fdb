#pragma once

#include <utility>
#include <vector>

#include "wkam/action.hpp"
#include "wkam/weakkam.hpp"

namespace wkam {

struct AubrySet {
    CohomologyClass c;
    std::vector<int> cells;    // grid indices with small diagonal barrier
    std::vector<Vec2> momenta; // c + du of the elementary solution at each cell
    double tol_aubry = 0.0;
};

struct StaticClassPartition {
    std::vector<std::vector<int>> classes;      // disjoint cell sets, covering the Aubry cells
    std::vector<std::vector<double>> pairwise;  // min of h(x,y)+h(y,x) between classes
    std::vector<std::string> warnings;          // near-threshold gaps
};

struct CalibratedOrbit {
    std::vector<int> cells;                       // integer-time grid indices, forward in time
    std::vector<PhasePoint> states;               // positions with minimizer momenta
    std::vector<MinimizerPath::Sample> substeps;  // substep-resolution samples
    double defect = 0.0;                          // max per-step calibration defect
};

AubrySet aubry_set(const PeierlsBarrier& barrier, double tol_aubry);

StaticClassPartition static_classes(const AubrySet& aubry, const PeierlsBarrier& barrier);

WeakKamSolution elementary_solution(const ActionKernel& kernel, const PeierlsBarrier& barrier,
                                    int x, double tol_fix = -1.0);

// min over Aubry cells a, a' of h(a,x) + h(x,a') - h(a,a').
double mane_membership(const PeierlsBarrier& barrier, const AubrySet& aubry, int x);

// All defects at once (quadratic in the Aubry cell count, parallel over targets).
GridFunction mane_defects(const PeierlsBarrier& barrier, const AubrySet& aubry);

CalibratedOrbit calibrated_orbit(const ActionKernel& kernel, const WeakKamSolution& solution,
                                 int x_end, int n_steps, double tol_fix = -1.0);

// Points outside both classes with small connection defect
// min_{a in A, b in B} h(a,x) + h(x,b) - h(a,b), sorted by defect.
std::vector<std::pair<int, double>> heteroclinic_points(const PeierlsBarrier& barrier,
                                                        const std::vector<int>& class_a,
                                                        const std::vector<int>& class_b,
                                                        double tol_mane);

// Aubry cells revisited (within one cell) by their own backward calibrated
// orbit within the horizon.  Finite-horizon stand-in for the Mather set.
std::vector<int> mather_set_approx(const ActionKernel& kernel, const WeakKamSolution& solution,
                                   const AubrySet& aubry, int horizon);

}  // namespace wkam
