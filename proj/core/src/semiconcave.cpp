#include "wkam/semiconcave.hpp"

#include <cmath>

namespace wkam {

SemiconcavityReport semiconcavity_constant(const GridFunction& u) {
    const SpatialGrid& g = u.grid;
    for (int i = 0; i < g.dim; ++i)
        if (g.sizes[i] < 3) throw WkamError("semiconcavity needs at least 3 points per axis");
    SemiconcavityReport report;
    // Probed directions: coordinate axes, plus both diagonals for d = 2.
    std::vector<std::array<int, 2>> dirs;
    dirs.push_back({1, 0});
    if (g.dim == 2) {
        dirs.push_back({0, 1});
        dirs.push_back({1, 1});
        dirs.push_back({1, -1});
    }
    report.direction_max.assign(dirs.size(), 0.0);
    double best = -1.0;
    for (size_t d = 0; d < dirs.size(); ++d) {
        double step2 = 0.0;
        for (int i = 0; i < g.dim; ++i) {
            double s = dirs[d][i] * g.spacing(i);
            step2 += s * s;
        }
        double dmax = -std::numeric_limits<double>::infinity();
        for (int x = 0; x < g.count(); ++x) {
            auto cx = g.coords(x);
            int xp = g.index(cx[0] + dirs[d][0], cx[1] + dirs[d][1]);
            int xm = g.index(cx[0] - dirs[d][0], cx[1] - dirs[d][1]);
            double second = (u[xp] + u[xm] - 2.0 * u[x]) / (2.0 * step2);
            if (second > dmax) dmax = second;
            if (second > best) {
                best = second;
                report.witness = x;
            }
        }
        report.direction_max[d] = dmax;
    }
    report.constant = std::max(0.0, best);
    return report;
}

Vec2 grid_gradient(const GridFunction& u, int cell) {
    const SpatialGrid& g = u.grid;
    Vec2 grad{0.0, 0.0};
    auto c = g.coords(cell);
    for (int i = 0; i < g.dim; ++i) {
        int xp = g.index(c[0] + (i == 0), c[1] + (i == 1));
        int xm = g.index(c[0] - (i == 0), c[1] - (i == 1));
        grad[i] = (u[xp] - u[xm]) / (2.0 * g.spacing(i));
    }
    return grad;
}

SuperDifferential superdifferential_at(const GridFunction& u, int cell, double K) {
    const SpatialGrid& g = u.grid;
    SuperDifferential sd;
    sd.differentiable = true;
    auto c = g.coords(cell);
    for (int i = 0; i < g.dim; ++i) {
        double h = g.spacing(i);
        int xp = g.index(c[0] + (i == 0), c[1] + (i == 1));
        int xm = g.index(c[0] - (i == 0), c[1] - (i == 1));
        double splus = (u[xp] - u[cell]) / h;
        double sminus = (u[cell] - u[xm]) / h;
        sd.gradient[i] = 0.5 * (splus + sminus);
        sd.lower[i] = std::min(splus, sminus);
        sd.upper[i] = std::max(splus, sminus);
        if (std::abs(splus - sminus) > 2.0 * K * h + 1e-12) sd.differentiable = false;
    }
    return sd;
}

LipschitzGraphReport lipschitz_graph_on_minset(const GridFunction& u, const GridFunction& v,
                                               double tol_min) {
    if (!(u.grid == v.grid)) throw WkamError("grid mismatch in min-set extraction");
    LipschitzGraphReport report;
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < u.size(); ++i) lo = std::min(lo, u[i] + v[i]);
    report.min_value = lo;
    for (int i = 0; i < u.size(); ++i) {
        if (u[i] + v[i] <= lo + tol_min) {
            report.cells.push_back(i);
            report.covectors.push_back(grid_gradient(u, i));
        }
    }
    if (report.cells.empty()) throw WkamError("empty min-set");
    for (size_t a = 0; a < report.cells.size(); ++a) {
        for (size_t b = a + 1; b < report.cells.size(); ++b) {
            double dist = torus_dist(u.grid.point(report.cells[a]), u.grid.point(report.cells[b]));
            if (dist <= 0.0) continue;
            double dp = 0.0;
            for (int i = 0; i < u.grid.dim; ++i) {
                double d = report.covectors[a][i] - report.covectors[b][i];
                dp += d * d;
            }
            report.lipschitz_ratio = std::max(report.lipschitz_ratio, std::sqrt(dp) / dist);
        }
    }
    return report;
}

}  // namespace wkam
