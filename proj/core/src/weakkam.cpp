#include "wkam/weakkam.hpp"

#include <cmath>
#include <limits>

#include "wkam/parallel.hpp"

namespace wkam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Column-blocked pass so each worker reads contiguous row segments.
GridFunction apply_forward(const ActionKernel& kernel, const GridFunction& u) {
    const int n = kernel.n();
    GridFunction out(kernel.grid, kInf);
    const int block = 64;
    const int nblocks = (n + block - 1) / block;
    parallel_for(0, nblocks, [&](int b) {
        const int y0 = b * block;
        const int y1 = std::min(n, y0 + block);
        for (int x = 0; x < n; ++x) {
            const double ux = u[x];
            const double* row = kernel.table.data() + static_cast<size_t>(x) * n;
            for (int y = y0; y < y1; ++y) {
                double cand = ux + row[y];
                if (cand < out[y]) out[y] = cand;
            }
        }
    });
    return out;
}

GridFunction apply_backward(const ActionKernel& kernel, const GridFunction& u) {
    const int n = kernel.n();
    GridFunction out(kernel.grid, -kInf);
    parallel_for(0, n, [&](int x) {
        const double* row = kernel.table.data() + static_cast<size_t>(x) * n;
        double best = -kInf;
        for (int y = 0; y < n; ++y) {
            double cand = u[y] - row[y];
            if (cand > best) best = cand;
        }
        out[x] = best;
    });
    return out;
}

}  // namespace

GridFunction PeierlsBarrier::diagonal() const {
    GridFunction g(grid);
    for (int i = 0; i < n(); ++i) g[i] = at(i, i);
    return g;
}

GridFunction PeierlsBarrier::row(int x) const {
    GridFunction g(grid);
    for (int y = 0; y < n(); ++y) g[y] = at(x, y);
    return g;
}

double default_tol_fix(const ActionKernel& kernel) {
    return 5.0 * (kernel.grid.max_spacing() + 1.0 / kernel.substeps) * kernel.model.scale;
}

GridFunction lax_oleinik(const ActionKernel& kernel, const GridFunction& u) {
    if (!(u.grid == kernel.grid)) throw WkamError("grid mismatch in operator application");
    return apply_forward(kernel, u);
}

GridFunction dual_lax_oleinik(const ActionKernel& kernel, const GridFunction& u) {
    if (!(u.grid == kernel.grid)) throw WkamError("grid mismatch in operator application");
    return apply_backward(kernel, u);
}

GridFunction lax_oleinik_argmin(const ActionKernel& kernel, const GridFunction& u,
                                std::vector<int>& argmin) {
    if (!(u.grid == kernel.grid)) throw WkamError("grid mismatch in operator application");
    const int n = kernel.n();
    GridFunction out(kernel.grid, kInf);
    argmin.assign(static_cast<size_t>(n), -1);
    parallel_for(0, n, [&](int y) {
        double best = kInf;
        int src = -1;
        for (int x = 0; x < n; ++x) {
            double cand = u[x] + kernel.at(x, y);
            if (cand < best) {
                best = cand;
                src = x;
            }
        }
        out[y] = best;
        argmin[static_cast<size_t>(y)] = src;
    });
    return out;
}

double fixed_point_residual(const ActionKernel& kernel, const GridFunction& u,
                            double alpha_value) {
    GridFunction tu = apply_forward(kernel, u);
    tu += alpha_value;
    return sup_dist(tu, u);
}

AlphaEstimate alpha(const ActionKernel& kernel, int n) {
    if (n < 1) throw WkamError("alpha needs at least one iteration");
    GridFunction u(kernel.grid, 0.0);
    double offset = 0.0;  // accumulated minimum, so u stays bounded
    for (int k = 0; k < n; ++k) {
        u = apply_forward(kernel, u);
        double m = u.min();
        offset += m;
        u += -m;
    }
    const double m_n = offset;
    const double big_m_n = offset + u.max();
    AlphaEstimate est;
    est.c = kernel.cohomology;
    est.n_used = n;
    est.lower = -big_m_n / n;
    est.upper = -m_n / n;
    est.value = 0.5 * (est.lower + est.upper);
    return est;
}

WeakKamSolution weak_kam_solve(const ActionKernel& kernel, const AlphaEstimate& alpha,
                               const GridFunction& seed, const SolveOptions& opts) {
    if (!(seed.grid == kernel.grid)) throw WkamError("grid mismatch in weak KAM solve");
    const double tol = opts.tol_fix > 0.0 ? opts.tol_fix : default_tol_fix(kernel);
    GridFunction v = seed;
    for (int k = 0; k < opts.n_burn; ++k) {
        v = apply_forward(kernel, v);
        v += alpha.value;
    }
    // Pointwise tail minimum approximates liminf of the normalized orbit.
    GridFunction u = v;
    for (int k = 0; k < opts.n_tail; ++k) {
        v = apply_forward(kernel, v);
        v += alpha.value;
        for (int i = 0; i < u.size(); ++i) u[i] = std::min(u[i], v[i]);
    }
    // Polish: u <- min(u, T u + alpha) is monotone and contracts the residual.
    for (int k = 0; k < opts.max_polish; ++k) {
        GridFunction tu = apply_forward(kernel, u);
        tu += alpha.value;
        double change = 0.0;
        for (int i = 0; i < u.size(); ++i) {
            if (tu[i] < u[i]) {
                change = std::max(change, u[i] - tu[i]);
                u[i] = tu[i];
            }
        }
        if (change <= tol * 1e-3) break;
    }
    u.normalize_min();
    WeakKamSolution sol;
    sol.c = kernel.cohomology;
    sol.u = u;
    sol.alpha = alpha;
    sol.residual = fixed_point_residual(kernel, u, alpha.value);
    if (sol.residual > tol)
        throw NonConvergenceError("weak KAM residual " + std::to_string(sol.residual) +
                                  " exceeds tolerance " + std::to_string(tol));
    return sol;
}

ConjugatePair conjugate_pair(const ActionKernel& kernel, const AlphaEstimate& alpha,
                             const WeakKamSolution& solution, double tol_fix) {
    const double tol = tol_fix > 0.0 ? tol_fix : default_tol_fix(kernel);
    const int cap = 512;
    GridFunction v = solution.u;
    int used = 0;
    for (int k = 0; k < cap; ++k) {
        GridFunction next = apply_backward(kernel, v);
        next += -alpha.value;
        // The backward orbit of an exact forward solution is pointwise
        // non-increasing; an approximate one can rise by its residual.
        double rise = 0.0;
        for (int i = 0; i < v.size(); ++i) rise = std::max(rise, next[i] - v[i]);
        if (rise > solution.residual + 1e-9 * std::max(1.0, kernel.model.scale))
            throw NumericalInconsistencyError("backward orbit increased by " +
                                              std::to_string(rise));
        double drop = sup_dist(next, v);
        v = next;
        used = k + 1;
        if (drop <= tol * 1e-3) break;
    }
    // Round trip: the forward orbit of the conjugate must recover the solution.
    GridFunction w = v;
    for (int k = 0; k < cap; ++k) {
        GridFunction next = apply_forward(kernel, w);
        next += alpha.value;
        double change = sup_dist(next, w);
        w = next;
        if (change <= tol * 1e-3) break;
    }
    ConjugatePair pair;
    pair.primal = solution;
    pair.dual = v;
    pair.iterations = used;
    pair.roundtrip_residual = sup_dist(w, solution.u);
    if (pair.roundtrip_residual > 3.0 * tol)
        throw NumericalInconsistencyError("conjugate round trip drift " +
                                          std::to_string(pair.roundtrip_residual));
    return pair;
}

PeierlsBarrier truncated_barrier(const ActionKernel& kernel, const AlphaEstimate& alpha, int N,
                                 int N_prime) {
    if (N < 1 || N_prime < N) throw WkamError("invalid barrier truncation window");
    if (N_prime * alpha.width() > 0.5)
        throw AlphaTooLooseError("alpha bracket width " + std::to_string(alpha.width()) +
                                 " too loose for horizon " + std::to_string(N_prime));
    const int n = kernel.n();
    const size_t sz = static_cast<size_t>(n) * n;
    std::vector<double> cur = kernel.table;  // k = 1
    std::vector<double> env(sz, kInf);
    std::vector<double> env_half(sz, kInf);
    const int nh = std::max(1, N / 2);
    const int nh_prime = std::max(nh, N_prime / 2);
    for (int k = 1; k <= N_prime; ++k) {
        const double shift = k * alpha.value;
        if (k >= N) {
            parallel_for(0, n, [&](int x) {
                const size_t off = static_cast<size_t>(x) * n;
                for (int y = 0; y < n; ++y)
                    env[off + y] = std::min(env[off + y], cur[off + y] + shift);
            });
        }
        if (k >= nh && k <= nh_prime) {
            parallel_for(0, n, [&](int x) {
                const size_t off = static_cast<size_t>(x) * n;
                for (int y = 0; y < n; ++y)
                    env_half[off + y] = std::min(env_half[off + y], cur[off + y] + shift);
            });
        }
        if (k < N_prime) cur = minplus_product(cur, kernel.table, n);
    }
    double decrement = 0.0;
    for (size_t i = 0; i < sz; ++i) decrement = std::max(decrement, std::abs(env[i] - env_half[i]));
    PeierlsBarrier barrier;
    barrier.c = kernel.cohomology;
    barrier.grid = kernel.grid;
    barrier.table = std::move(env);
    barrier.N = N;
    barrier.N_prime = N_prime;
    barrier.alpha = alpha;
    barrier.error_bound = decrement + N_prime * alpha.width();
    return barrier;
}

double solution_barrier_identity(const WeakKamSolution& solution, const PeierlsBarrier& barrier) {
    if (!(solution.u.grid == barrier.grid)) throw WkamError("grid mismatch in barrier identity");
    const int n = barrier.n();
    double worst = 0.0;
    for (int x = 0; x < n; ++x) {
        double best = kInf;
        for (int y = 0; y < n; ++y) best = std::min(best, solution.u[y] + barrier.at(y, x));
        worst = std::max(worst, std::abs(best - solution.u[x]));
    }
    return worst;
}

}  // namespace wkam
