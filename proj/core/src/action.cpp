#include "wkam/action.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "wkam/parallel.hpp"

namespace wkam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Lift {
    Vec2 delta{0.0, 0.0};
    bool valid = false;
};

// Best periodic lift of y - x within the window, together with its cost.
std::pair<double, Lift> best_lift_cost(const LagrangianModel& model, const CohomologyClass& c,
                                       double t, const TorusPoint& x, const TorusPoint& y,
                                       double dt, const Vec2& window) {
    const int dim = model.dim;
    std::array<std::array<double, 2>, 2> cand{};
    std::array<int, 2> ncand{0, 0};
    for (int i = 0; i < dim; ++i) {
        double base = wrap_half(y.coords[i] - x.coords[i]);
        for (double d : {base, base - 1.0, base + 1.0}) {
            if (std::abs(d) <= window[i] + 1e-12 && ncand[i] < 2)
                cand[i][ncand[i]++] = d;
        }
    }
    double best = kInf;
    Lift lift;
    for (int a = 0; a < std::max(ncand[0], 1); ++a) {
        if (ncand[0] == 0) break;
        for (int b = 0; b < (dim == 2 ? ncand[1] : 1); ++b) {
            if (dim == 2 && ncand[1] == 0) break;
            Vec2 delta{cand[0][a], dim == 2 ? cand[1][b] : 0.0};
            TorusPoint mid = x;
            mid.dim = dim;
            Vec2 vel{0.0, 0.0};
            for (int i = 0; i < dim; ++i) {
                mid.coords[i] = wrap01(x.coords[i] + 0.5 * delta[i]);
                vel[i] = delta[i] / dt;
            }
            double cost = dt * model.lag(t + 0.5 * dt, mid, vel) - dot(c.components, delta, dim);
            if (cost < best) {
                best = cost;
                lift.delta = delta;
                lift.valid = true;
            }
        }
    }
    return {best, lift};
}

struct OffsetTable {
    std::vector<std::array<int, 2>> offsets;  // per-axis integer offsets
    std::vector<std::vector<int>> wrapped;    // wrapped[axis][i + N] lookup
};

OffsetTable make_offsets(const SpatialGrid& grid, const Vec2& window) {
    OffsetTable ot;
    std::array<int, 2> w{0, 0};
    for (int i = 0; i < grid.dim; ++i) {
        w[i] = static_cast<int>(std::floor(window[i] * grid.sizes[i] + 1e-9));
        w[i] = std::min(w[i], grid.sizes[i] / 2);
    }
    if (grid.dim == 1) {
        for (int o = -w[0]; o <= w[0]; ++o) ot.offsets.push_back({o, 0});
    } else {
        for (int o1 = -w[0]; o1 <= w[0]; ++o1)
            for (int o2 = -w[1]; o2 <= w[1]; ++o2) ot.offsets.push_back({o1, o2});
    }
    ot.wrapped.resize(static_cast<size_t>(grid.dim));
    for (int i = 0; i < grid.dim; ++i) {
        int n = grid.sizes[i];
        ot.wrapped[static_cast<size_t>(i)].resize(static_cast<size_t>(3 * n));
        for (int j = -n; j < 2 * n; ++j)
            ot.wrapped[static_cast<size_t>(i)][static_cast<size_t>(j + n)] =
                ((j % n) + n) % n;
    }
    return ot;
}

}  // namespace

Vec2 default_lift_window(const LagrangianModel& model, const SpatialGrid& grid, int substeps) {
    Vec2 w{0.0, 0.0};
    for (int i = 0; i < grid.dim; ++i)
        w[i] = std::min(0.5 + grid.spacing(i), model.speed_bound_hint / substeps);
    return w;
}

double substep_cost(const LagrangianModel& model, const CohomologyClass& c, double t,
                    const TorusPoint& x, const TorusPoint& y, double dt, const Vec2* window) {
    Vec2 w;
    if (window) {
        w = *window;
    } else {
        for (int i = 0; i < model.dim; ++i)
            w[i] = std::min(0.5 + 1e-9, model.speed_bound_hint * dt);
    }
    return best_lift_cost(model, c, t, x, y, dt, w).first;
}

ActionKernel build_kernel(const LagrangianModel& model, const CohomologyClass& c,
                          const SpatialGrid& grid, int substeps, int grid_cap) {
    if (substeps < 4) throw WkamError("build_kernel requires at least 4 substeps");
    if (grid.count() > grid_cap)
        throw GridTooLargeError("grid has " + std::to_string(grid.count()) +
                                " points, cap is " + std::to_string(grid_cap));
    ActionKernel k;
    k.model = model;
    k.grid = grid;
    k.cohomology = c;
    k.substeps = substeps;
    k.lift_window = default_lift_window(model, grid, substeps);

    const int n = grid.count();
    const double dt = k.dt();
    OffsetTable ot = make_offsets(grid, k.lift_window);
    const int nb = static_cast<int>(ot.offsets.size());

    // Banded substep cost tables, shared by every source row.
    std::vector<std::vector<double>> band(static_cast<size_t>(substeps));
    for (int step = 0; step < substeps; ++step) {
        auto& bk = band[static_cast<size_t>(step)];
        bk.assign(static_cast<size_t>(n) * nb, kInf);
        double t0 = step * dt;
        parallel_for(0, n, [&](int z) {
            TorusPoint pz = grid.point(z);
            auto cz = grid.coords(z);
            for (int o = 0; o < nb; ++o) {
                int y0 = ot.wrapped[0][static_cast<size_t>(cz[0] + ot.offsets[o][0] +
                                                           grid.sizes[0])];
                int y = y0;
                if (grid.dim == 2)
                    y = y0 * grid.sizes[1] +
                        ot.wrapped[1][static_cast<size_t>(cz[1] + ot.offsets[o][1] +
                                                          grid.sizes[1])];
                bk[static_cast<size_t>(z) * nb + o] =
                    best_lift_cost(model, c, t0, pz, grid.point(y), dt, k.lift_window).first;
            }
        });
    }

    k.table.assign(static_cast<size_t>(n) * n, kInf);
    k.backpointers.assign(static_cast<size_t>(substeps - 1),
                          std::vector<int32_t>(static_cast<size_t>(n) * n, -1));

    parallel_for(0, n, [&](int x) {
        std::vector<double> cur(static_cast<size_t>(n), kInf);
        std::vector<double> next(static_cast<size_t>(n));
        auto cx = grid.coords(x);
        const auto& b1 = band[0];
        for (int o = 0; o < nb; ++o) {
            int y0 = ot.wrapped[0][static_cast<size_t>(cx[0] + ot.offsets[o][0] + grid.sizes[0])];
            int y = grid.dim == 1
                        ? y0
                        : y0 * grid.sizes[1] +
                              ot.wrapped[1][static_cast<size_t>(cx[1] + ot.offsets[o][1] +
                                                                grid.sizes[1])];
            double v = b1[static_cast<size_t>(x) * nb + o];
            if (v < cur[static_cast<size_t>(y)]) cur[static_cast<size_t>(y)] = v;
        }
        for (int step = 1; step < substeps; ++step) {
            const auto& bk = band[static_cast<size_t>(step)];
            auto* bp = k.backpointers[static_cast<size_t>(step - 1)].data() +
                       static_cast<size_t>(x) * n;
            std::fill(next.begin(), next.end(), kInf);
            for (int z = 0; z < n; ++z) {
                double a = cur[static_cast<size_t>(z)];
                if (a == kInf) continue;
                auto cz = grid.coords(z);
                const double* brow = bk.data() + static_cast<size_t>(z) * nb;
                for (int o = 0; o < nb; ++o) {
                    double bo = brow[o];
                    if (bo == kInf) continue;
                    int y0 = ot.wrapped[0][static_cast<size_t>(cz[0] + ot.offsets[o][0] +
                                                               grid.sizes[0])];
                    int y = grid.dim == 1
                                ? y0
                                : y0 * grid.sizes[1] +
                                      ot.wrapped[1][static_cast<size_t>(cz[1] + ot.offsets[o][1] +
                                                                        grid.sizes[1])];
                    double val = a + bo;
                    // z ascending, strict improvement: ties keep the smallest index.
                    if (val < next[static_cast<size_t>(y)]) {
                        next[static_cast<size_t>(y)] = val;
                        bp[y] = z;
                    }
                }
            }
            cur.swap(next);
        }
        std::copy(cur.begin(), cur.end(), k.table.begin() + static_cast<size_t>(x) * n);
    });
    return k;
}

std::vector<double> minplus_product(const std::vector<double>& a, const std::vector<double>& b,
                                    int n) {
    std::vector<double> c(static_cast<size_t>(n) * n, kInf);
    parallel_for(0, n, [&](int x) {
        double* crow = c.data() + static_cast<size_t>(x) * n;
        const double* arow = a.data() + static_cast<size_t>(x) * n;
        for (int z = 0; z < n; ++z) {
            double az = arow[z];
            if (az == kInf) continue;
            const double* brow = b.data() + static_cast<size_t>(z) * n;
            for (int y = 0; y < n; ++y) {
                double v = az + brow[y];
                if (v < crow[y]) crow[y] = v;
            }
        }
    });
    return c;
}

const std::vector<double>& KernelPowers::power(int k) {
    if (k < 1) throw WkamError("kernel power requires k >= 1");
    if (k == 1) return kernel_->table;
    auto it = cache_.find(k);
    if (it != cache_.end()) return *it->second;
    std::shared_ptr<std::vector<double>> result;
    const int n = kernel_->n();
    if (k % 2 == 0) {
        const auto& half = power(k / 2);
        result = std::make_shared<std::vector<double>>(minplus_product(half, half, n));
    } else {
        const auto& left = power(k - 1);
        result = std::make_shared<std::vector<double>>(minplus_product(left, kernel_->table, n));
    }
    cache_[k] = result;
    return *result;
}

std::vector<double> kernel_power(const ActionKernel& kernel, int k) {
    KernelPowers p(kernel);
    return p.power(k);
}

MinimizerPath backtrack_minimizer(const ActionKernel& kernel, int x, int y) {
    if (kernel.backpointers.empty())
        throw WkamError("backpointers unavailable for this kernel");
    const int M = kernel.substeps;
    const int n = kernel.n();
    std::vector<int> nodes(static_cast<size_t>(M + 1));
    nodes[static_cast<size_t>(M)] = y;
    for (int step = M; step >= 2; --step) {
        int32_t z = kernel.backpointers[static_cast<size_t>(step - 2)]
                                       [static_cast<size_t>(x) * n + nodes[static_cast<size_t>(step)]];
        if (z < 0) throw WkamError("unreachable target in backtrack");
        nodes[static_cast<size_t>(step - 1)] = z;
    }
    nodes[0] = x;

    MinimizerPath path;
    const double dt = kernel.dt();
    double action = 0.0;
    Vec2 last_vel{0.0, 0.0};
    for (int k = 0; k < M; ++k) {
        TorusPoint a = kernel.grid.point(nodes[static_cast<size_t>(k)]);
        TorusPoint b = kernel.grid.point(nodes[static_cast<size_t>(k + 1)]);
        auto [cost, lift] =
            best_lift_cost(kernel.model, kernel.cohomology, k * dt, a, b, dt, kernel.lift_window);
        if (!lift.valid) throw WkamError("broken lift in backtrack");
        Vec2 vel{0.0, 0.0};
        for (int i = 0; i < kernel.model.dim; ++i) vel[i] = lift.delta[i] / dt;
        action += cost;
        path.samples.push_back({k * dt, a, vel});
        last_vel = vel;
        if (k == 0 || k == M - 1) {
            TorusPoint mid = a;
            for (int i = 0; i < kernel.model.dim; ++i)
                mid.coords[i] = wrap01(a.coords[i] + 0.5 * lift.delta[i]);
            Vec2 p = kernel.model.legendre_v((k + 0.5) * dt, mid, vel);
            if (k == 0) path.momentum_start = p;
            if (k == M - 1) path.momentum_end = p;
        }
    }
    path.samples.push_back({1.0, kernel.grid.point(y), last_vel});
    path.action_value = action;
    return path;
}

MinimizerPath backtrack_chain(const ActionKernel& kernel, int x, int y, int nsteps) {
    if (nsteps < 1) throw WkamError("backtrack_chain requires nsteps >= 1");
    const int n = kernel.n();
    std::vector<double> cur(static_cast<size_t>(n), kInf), next(static_cast<size_t>(n));
    std::vector<std::vector<int32_t>> pred(static_cast<size_t>(nsteps),
                                           std::vector<int32_t>(static_cast<size_t>(n), -1));
    cur[static_cast<size_t>(x)] = 0.0;
    for (int j = 0; j < nsteps; ++j) {
        std::fill(next.begin(), next.end(), kInf);
        for (int z = 0; z < n; ++z) {
            double a = cur[static_cast<size_t>(z)];
            if (a == kInf) continue;
            const double* row = kernel.table.data() + static_cast<size_t>(z) * n;
            for (int w = 0; w < n; ++w) {
                double v = a + row[w];
                if (v < next[static_cast<size_t>(w)]) {
                    next[static_cast<size_t>(w)] = v;
                    pred[static_cast<size_t>(j)][static_cast<size_t>(w)] = z;
                }
            }
        }
        cur.swap(next);
    }
    std::vector<int> nodes(static_cast<size_t>(nsteps + 1));
    nodes[static_cast<size_t>(nsteps)] = y;
    for (int j = nsteps; j >= 1; --j) {
        int32_t z = pred[static_cast<size_t>(j - 1)][static_cast<size_t>(nodes[static_cast<size_t>(j)])];
        if (z < 0) throw WkamError("unreachable target in chain backtrack");
        nodes[static_cast<size_t>(j - 1)] = z;
    }

    MinimizerPath path;
    for (int j = 0; j < nsteps; ++j) {
        MinimizerPath window =
            backtrack_minimizer(kernel, nodes[static_cast<size_t>(j)], nodes[static_cast<size_t>(j + 1)]);
        path.action_value += window.action_value;
        if (j == 0) path.momentum_start = window.momentum_start;
        path.momentum_end = window.momentum_end;
        size_t keep = window.samples.size() - (j + 1 < nsteps ? 1 : 0);
        for (size_t s = 0; s < keep; ++s) {
            auto sample = window.samples[s];
            sample.time += j;
            path.samples.push_back(sample);
        }
    }
    return path;
}

SpeedBoundReport speed_bound_check(const ActionKernel& kernel, int sample_pairs, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, kernel.n() - 1);
    SpeedBoundReport report;
    report.hint = kernel.model.speed_bound_hint;
    for (int s = 0; s < sample_pairs; ++s) {
        MinimizerPath p = backtrack_minimizer(kernel, pick(rng), pick(rng));
        for (const auto& sample : p.samples)
            report.max_speed = std::max(report.max_speed, norm(sample.velocity, kernel.model.dim));
    }
    report.within_hint = report.max_speed <= report.hint;
    return report;
}

ContinuityCheck kernel_continuity_check(const LagrangianModel& m0, const LagrangianModel& m1,
                                        const CohomologyClass& c, const SpatialGrid& grid,
                                        int substeps) {
    ActionKernel k0 = build_kernel(m0, c, grid, substeps);
    ActionKernel k1 = build_kernel(m1, c, grid, substeps);
    ContinuityCheck chk;
    for (size_t i = 0; i < k0.table.size(); ++i)
        chk.lhs = std::max(chk.lhs, std::abs(k0.table[i] - k1.table[i]));
    double speed_cap = std::max(m0.speed_bound_hint, m1.speed_bound_hint);
    const int nv = 17, nt = substeps;
    for (int it = 0; it < nt; ++it) {
        double t = (it + 0.5) / nt;
        for (int q = 0; q < grid.count(); ++q) {
            TorusPoint p = grid.point(q);
            for (int a = 0; a < nv; ++a) {
                for (int b = 0; b < (grid.dim == 2 ? nv : 1); ++b) {
                    Vec2 v{speed_cap * (2.0 * a / (nv - 1) - 1.0),
                           grid.dim == 2 ? speed_cap * (2.0 * b / (nv - 1) - 1.0) : 0.0};
                    chk.rhs = std::max(chk.rhs, std::abs(m1.lag(t, p, v) - m0.lag(t, p, v)));
                }
            }
        }
    }
    return chk;
}

}  // namespace wkam
