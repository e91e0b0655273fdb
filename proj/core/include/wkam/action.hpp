#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "wkam/grid.hpp"
#include "wkam/model.hpp"

namespace wkam {

// Discretized one-period action kernel A_c(0,x;1,y) over grid point pairs,
// obtained as the min-plus product of substep cost tables, with per-substep
// argmin tables for minimizer reconstruction.  By time-periodicity the same
// kernel serves every integer window.
struct ActionKernel {
    LagrangianModel model;
    SpatialGrid grid;
    CohomologyClass cohomology;
    int substeps = 8;
    int time_origin = 0;
    std::vector<double> table;                        // row-major [source*n + target]
    std::vector<std::vector<int32_t>> backpointers;   // [k-2] for substep k in [2,M]
    Vec2 lift_window{0.5, 0.5};

    double dt() const { return 1.0 / substeps; }
    int n() const { return grid.count(); }
    double at(int x, int y) const { return table[static_cast<size_t>(x) * n() + y]; }
};

// Discrete minimizer at substep resolution.
struct MinimizerPath {
    struct Sample {
        double time;
        TorusPoint point;
        Vec2 velocity;  // velocity of the outgoing segment (last sample repeats)
    };
    std::vector<Sample> samples;
    double action_value = 0.0;
    Vec2 momentum_start{0.0, 0.0};  // dL/dv at the first substep velocity
    Vec2 momentum_end{0.0, 0.0};    // dL/dv at the last substep velocity
};

struct SpeedBoundReport {
    double max_speed = 0.0;
    double hint = 0.0;
    bool within_hint = true;
};

// Cost of one broken-path substep x -> y with midpoint quadrature over the
// minimal periodic lift; lifts beyond the window cost +infinity.
double substep_cost(const LagrangianModel& model, const CohomologyClass& c, double t,
                    const TorusPoint& x, const TorusPoint& y, double dt,
                    const Vec2* window = nullptr);

Vec2 default_lift_window(const LagrangianModel& model, const SpatialGrid& grid, int substeps);

ActionKernel build_kernel(const LagrangianModel& model, const CohomologyClass& c,
                          const SpatialGrid& grid, int substeps, int grid_cap = 4096);

// Min-plus product C(x,y) = min_z A(x,z) + B(z,y) of dense n x n tables.
std::vector<double> minplus_product(const std::vector<double>& a, const std::vector<double>& b,
                                    int n);

// Dense table A_c(0,.;k,.), memoizing powers of two.
class KernelPowers {
public:
    explicit KernelPowers(const ActionKernel& kernel) : kernel_(&kernel) {}
    const std::vector<double>& power(int k);
    const ActionKernel& kernel() const { return *kernel_; }

private:
    const ActionKernel* kernel_;
    std::map<int, std::shared_ptr<std::vector<double>>> cache_;
};

std::vector<double> kernel_power(const ActionKernel& kernel, int k);

// Minimizer across one unit window, via the stored backpointers.
MinimizerPath backtrack_minimizer(const ActionKernel& kernel, int x, int y);

// Minimizer across n unit windows; integer nodes by dynamic programming over
// the one-unit table, each window expanded at substep resolution.
MinimizerPath backtrack_chain(const ActionKernel& kernel, int x, int y, int nsteps);

SpeedBoundReport speed_bound_check(const ActionKernel& kernel, int sample_pairs = 64,
                                   uint64_t seed = 1);

struct ContinuityCheck {
    double lhs = 0.0;  // sup distance of the two kernels
    double rhs = 0.0;  // max |L1 - L0| over speeds up to K_1
};

// Appendix-style kernel continuity estimate over one unit window.
ContinuityCheck kernel_continuity_check(const LagrangianModel& m0, const LagrangianModel& m1,
                                        const CohomologyClass& c, const SpatialGrid& grid,
                                        int substeps);

}  // namespace wkam
