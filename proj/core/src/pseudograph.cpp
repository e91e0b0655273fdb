#include "wkam/pseudograph.hpp"

#include <cmath>
#include <limits>

#include "wkam/parallel.hpp"
#include "wkam/semiconcave.hpp"

namespace wkam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

}  // namespace

void CellSet::add_box(const CellBox& box) {
    for (int i = 0; i < grid.dim; ++i) {
        if (box.lo[i] < 0 || box.hi[i] >= grid.sizes[i] || box.lo[i] > box.hi[i])
            throw WkamError("cell box out of range or wrapping");
    }
    boxes.push_back(box);
    for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
        if (grid.dim == 1) {
            mask[static_cast<size_t>(grid.index(i))] = 1;
        } else {
            for (int j = box.lo[1]; j <= box.hi[1]; ++j)
                mask[static_cast<size_t>(grid.index(i, j))] = 1;
        }
    }
}

void CellSet::add_ball(int cell, int margin) {
    auto c = grid.coords(cell);
    CellBox box;
    for (int i = 0; i < grid.dim; ++i) {
        box.lo[i] = std::max(0, c[i] - margin);
        box.hi[i] = std::min(grid.sizes[i] - 1, c[i] + margin);
    }
    add_box(box);
}

bool CellSet::empty() const {
    for (char m : mask)
        if (m) return false;
    return true;
}

int CellSet::count() const {
    int n = 0;
    for (char m : mask) n += (m != 0);
    return n;
}

std::vector<int> CellSet::cells() const {
    std::vector<int> out;
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<char> CellSet::axis_projection(int axis) const {
    std::vector<char> covered(static_cast<size_t>(grid.sizes[axis]), 0);
    for (const CellBox& box : boxes)
        for (int i = box.lo[axis]; i <= box.hi[axis]; ++i) covered[static_cast<size_t>(i)] = 1;
    return covered;
}

double BumpForm::density(int axis, double q) const {
    if (!active[static_cast<size_t>(axis)]) return 0.0;
    const double a = support_lo[static_cast<size_t>(axis)];
    const double b = support_hi[static_cast<size_t>(axis)];
    q = wrap01(q);
    if (q <= a || q >= b) return 0.0;
    const double tau = (q - a) / (b - a);
    return (1.0 - std::cos(2.0 * kPi * tau)) / (b - a);
}

double BumpForm::primitive(const TorusPoint& q) const {
    double g = 0.0;
    for (int i = 0; i < dim; ++i) {
        if (!active[static_cast<size_t>(i)]) continue;
        const double a = support_lo[static_cast<size_t>(i)];
        const double b = support_hi[static_cast<size_t>(i)];
        const double x = wrap01(q[i]);
        double mass;  // integral of the density over [0, x]
        if (x <= a) {
            mass = 0.0;
        } else if (x >= b) {
            mass = 1.0;
        } else {
            const double tau = (x - a) / (b - a);
            mass = tau - std::sin(2.0 * kPi * tau) / (2.0 * kPi);
        }
        g += d[i] * (mass - x);
    }
    return g;
}

PseudographNorm pseudograph_norm(const Pseudograph& g) {
    PseudographNorm n;
    n.value = g.c.norm() + g.u.span() / 2.0;
    return n;
}

PseudographNorm pseudograph_norm_restricted(const Pseudograph& g, const CellSet& set) {
    if (set.empty()) throw WkamError("restricted norm over an empty set");
    double lo = kInf, hi = -kInf;
    for (int i = 0; i < g.u.size(); ++i) {
        if (!set.contains(i)) continue;
        lo = std::min(lo, g.u[i]);
        hi = std::max(hi, g.u[i]);
    }
    PseudographNorm n;
    n.value = g.c.norm() + (hi - lo) / 2.0;
    n.restricted = true;
    return n;
}

double pseudograph_dist(const Pseudograph& a, const Pseudograph& b) {
    return (a.c - b.c).norm() + quotient_dist(a.u, b.u);
}

std::vector<PhasePoint> graph_points(const Pseudograph& g, double K) {
    std::vector<PhasePoint> pts;
    for (int i = 0; i < g.u.size(); ++i) {
        SuperDifferential sd = superdifferential_at(g.u, i, K);
        if (!sd.differentiable) continue;
        PhasePoint p;
        p.position = g.u.grid.point(i);
        for (int a = 0; a < g.u.grid.dim; ++a) p.momentum[a] = g.c[a] + sd.gradient[a];
        pts.push_back(p);
    }
    return pts;
}

Pseudograph evolve(const Pseudograph& g, const ActionKernel& kernel, const AlphaEstimate& alpha) {
    Pseudograph out = g;
    if (g.dual) {
        out.u = dual_lax_oleinik(kernel, g.u);
        out.u += -alpha.value;
    } else {
        out.u = lax_oleinik(kernel, g.u);
        out.u += alpha.value;
    }
    return out;
}

RestrictedEvolution evolve_restricted(const Pseudograph& g, const ActionKernel& kernel,
                                      const AlphaEstimate& alpha, const CellSet& set, int N,
                                      int N_prime) {
    if (set.empty()) throw WkamError("restricted evolution from an empty set");
    if (N < 1 || N_prime < N) throw WkamError("invalid restricted evolution window");
    const int n = kernel.n();
    GridFunction v(kernel.grid, kInf);
    std::vector<int> src(static_cast<size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (set.contains(i)) {
            v[i] = g.u[i];
            src[static_cast<size_t>(i)] = i;
        }
    }
    RestrictedEvolution result;
    result.graph.c = kernel.cohomology;
    result.graph.u = GridFunction(kernel.grid, kInf);
    result.attainments.assign(static_cast<size_t>(n), Attainment{});
    for (int k = 1; k <= N_prime; ++k) {
        std::vector<int> am;
        v = lax_oleinik_argmin(kernel, v, am);
        std::vector<int> next_src(static_cast<size_t>(n), -1);
        for (int x = 0; x < n; ++x)
            if (am[static_cast<size_t>(x)] >= 0)
                next_src[static_cast<size_t>(x)] = src[static_cast<size_t>(am[static_cast<size_t>(x)])];
        src = std::move(next_src);
        if (k < N) continue;
        const double shift = k * alpha.value;
        for (int x = 0; x < n; ++x) {
            double cand = v[x] + shift;
            if (cand < result.graph.u[x]) {
                result.graph.u[x] = cand;
                result.attainments[static_cast<size_t>(x)] = Attainment{src[static_cast<size_t>(x)], k};
            }
        }
    }
    for (int x = 0; x < n; ++x)
        if (!std::isfinite(result.graph.u[x]))
            throw WkamError("restricted evolution left unreachable cells");
    return result;
}

WedgeSet wedge(const Pseudograph& g, const Pseudograph& g_dual, double tol_min) {
    if (!(g.u.grid == g_dual.u.grid)) throw WkamError("grid mismatch in wedge");
    WedgeSet w;
    w.tolerance = tol_min;
    double lo = kInf;
    for (int i = 0; i < g.u.size(); ++i) lo = std::min(lo, g.u[i] - g_dual.u[i]);
    w.min_value = lo;
    for (int i = 0; i < g.u.size(); ++i) {
        if (g.u[i] - g_dual.u[i] > lo + tol_min) continue;
        w.cells.push_back(i);
        PhasePoint p;
        p.position = g.u.grid.point(i);
        Vec2 grad = grid_gradient(g.u, i);
        for (int a = 0; a < g.u.grid.dim; ++a) p.momentum[a] = g.c[a] + grad[a];
        w.phase_points.push_back(p);
    }
    return w;
}

BumpForm bump_form(const CohomologyClass& d_class, const CellSet& set, const SpatialGrid& grid) {
    BumpForm form;
    form.dim = grid.dim;
    form.d = d_class.components;
    for (int axis = 0; axis < grid.dim; ++axis) {
        if (d_class[axis] == 0.0) continue;
        form.active[static_cast<size_t>(axis)] = true;
        const int n = grid.sizes[axis];
        std::vector<char> covered = set.empty()
                                        ? std::vector<char>(static_cast<size_t>(n), 0)
                                        : set.axis_projection(axis);
        // Longest non-wrapping free run; one spare cell on each side keeps
        // the discrete gradient of the primitive exact on member cells.
        int best_len = 0, best_start = 0;
        int run_start = -1;
        for (int i = 0; i <= n; ++i) {
            bool free_cell = i < n && !covered[static_cast<size_t>(i)];
            if (free_cell && run_start < 0) run_start = i;
            if (!free_cell && run_start >= 0) {
                if (i - run_start > best_len) {
                    best_len = i - run_start;
                    best_start = run_start;
                }
                run_start = -1;
            }
        }
        if (best_len < 3)
            throw ObstructionError("no transversal slab on axis " + std::to_string(axis));
        const double h = grid.spacing(axis);
        form.support_lo[static_cast<size_t>(axis)] = (best_start + 1) * h;
        form.support_hi[static_cast<size_t>(axis)] = (best_start + best_len - 1) * h;
    }
    return form;
}

Pseudograph modify_cohomology(const Pseudograph& g, const CohomologyClass& target_c,
                              const CellSet& set) {
    CohomologyClass d = target_c - g.c;
    Pseudograph out = g;
    out.c = target_c;
    if (d.norm() == 0.0) return out;
    BumpForm form = bump_form(d, set, g.u.grid);
    for (int i = 0; i < out.u.size(); ++i) out.u[i] += form.primitive(g.u.grid.point(i));
    return out;
}

Pseudograph deck_symmetrize(const Pseudograph& g, int axis, int k) {
    const int n = g.u.grid.sizes[axis];
    if (k < 1 || n % k != 0) throw InvalidCoverError("deck translation does not divide the grid");
    const int step = n / k;
    Pseudograph out = g;
    for (int i = 0; i < g.u.size(); ++i) {
        double best = kInf;
        for (int j = 0; j < k; ++j) best = std::min(best, g.u[g.u.grid.shift(i, axis, j * step)]);
        out.u[i] = best;
    }
    return out;
}

}  // namespace wkam
