#pragma once

#include "wkam/action.hpp"
#include "wkam/grid.hpp"

namespace wkam {

// Certified bracket for the critical value alpha(c): the discrete value lies
// in [lower, upper] up to the discretization error of the kernel.
struct AlphaEstimate {
    CohomologyClass c;
    double lower = 0.0;
    double upper = 0.0;
    int n_used = 0;
    double value = 0.0;  // bracket midpoint

    double width() const { return upper - lower; }
};

struct WeakKamSolution {
    CohomologyClass c;
    GridFunction u;
    AlphaEstimate alpha;
    double residual = 0.0;  // ||T u + alpha - u||_inf
};

struct ConjugatePair {
    WeakKamSolution primal;
    GridFunction dual;            // the conjugate solution, fixed by the dual operator
    double roundtrip_residual = 0.0;
    int iterations = 0;
};

// Dense table of the truncated Peierls barrier min_{N<=k<=N'} A^k + k alpha,
// with an empirical error bound carrying both the truncation decrement and
// the alpha bracket contribution.
struct PeierlsBarrier {
    CohomologyClass c;
    SpatialGrid grid;
    std::vector<double> table;  // [x*n + y] ~ h_c(x, y)
    int N = 1;
    int N_prime = 1;
    double error_bound = 0.0;
    AlphaEstimate alpha;

    int n() const { return grid.count(); }
    double at(int x, int y) const { return table[static_cast<size_t>(x) * n() + y]; }
    GridFunction diagonal() const;
    GridFunction row(int x) const;
};

struct SolveOptions {
    int n_burn = 64;
    int n_tail = 32;
    int max_polish = 500;
    double tol_fix = -1.0;  // <= 0: use default_tol_fix
};

double default_tol_fix(const ActionKernel& kernel);

GridFunction lax_oleinik(const ActionKernel& kernel, const GridFunction& u);
GridFunction dual_lax_oleinik(const ActionKernel& kernel, const GridFunction& u);

// As lax_oleinik, additionally reporting the argmin source per target
// (smallest index on ties).  Infinite inputs propagate with source -1.
GridFunction lax_oleinik_argmin(const ActionKernel& kernel, const GridFunction& u,
                                std::vector<int>& argmin);

// ||T u + alpha - u||_inf
double fixed_point_residual(const ActionKernel& kernel, const GridFunction& u, double alpha_value);

AlphaEstimate alpha(const ActionKernel& kernel, int n = 64);

WeakKamSolution weak_kam_solve(const ActionKernel& kernel, const AlphaEstimate& alpha,
                               const GridFunction& seed, const SolveOptions& opts = {});

ConjugatePair conjugate_pair(const ActionKernel& kernel, const AlphaEstimate& alpha,
                             const WeakKamSolution& solution, double tol_fix = -1.0);

PeierlsBarrier truncated_barrier(const ActionKernel& kernel, const AlphaEstimate& alpha, int N,
                                 int N_prime);

// max_x |u(x) - min_y (u(y) + h(y,x))|
double solution_barrier_identity(const WeakKamSolution& solution, const PeierlsBarrier& barrier);

}  // namespace wkam
