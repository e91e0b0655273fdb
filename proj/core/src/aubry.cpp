#include "wkam/aubry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wkam/parallel.hpp"
#include "wkam/semiconcave.hpp"

namespace wkam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

// argmin_q u(q) + A(q, x), ties to the smallest index
int argmin_predecessor(const ActionKernel& kernel, const GridFunction& u, int x) {
    const int n = kernel.n();
    int best = 0;
    double bestval = kInf;
    for (int q = 0; q < n; ++q) {
        double v = u[q] + kernel.at(q, x);
        if (v < bestval) {
            bestval = v;
            best = q;
        }
    }
    return best;
}

}  // namespace

AubrySet aubry_set(const PeierlsBarrier& barrier, double tol_aubry) {
    if (barrier.error_bound > tol_aubry / 2.0)
        throw ToleranceTooTightError("barrier error bound " + std::to_string(barrier.error_bound) +
                                     " exceeds tol_aubry/2 = " + std::to_string(tol_aubry / 2.0));
    AubrySet result;
    result.c = barrier.c;
    result.tol_aubry = tol_aubry;
    const int n = barrier.n();
    for (int i = 0; i < n; ++i)
        if (barrier.at(i, i) <= tol_aubry) result.cells.push_back(i);
    if (result.cells.empty())
        throw ToleranceTooTightError("no Aubry cells at tol_aubry = " + std::to_string(tol_aubry));
    // Momenta via the Lipschitz-graph property: c + du of h(x, .) at x itself.
    result.momenta.resize(result.cells.size());
    parallel_for(0, static_cast<int>(result.cells.size()), [&](int k) {
        int x = result.cells[static_cast<size_t>(k)];
        GridFunction u = barrier.row(x);
        Vec2 grad = grid_gradient(u, x);
        Vec2 p{0.0, 0.0};
        for (int i = 0; i < barrier.grid.dim; ++i) p[i] = barrier.c[i] + grad[i];
        result.momenta[static_cast<size_t>(k)] = p;
    });
    return result;
}

StaticClassPartition static_classes(const AubrySet& aubry, const PeierlsBarrier& barrier) {
    if (aubry.cells.empty()) throw WkamError("static classes of an empty Aubry set");
    const int m = static_cast<int>(aubry.cells.size());
    const double threshold = 2.0 * aubry.tol_aubry;
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            double sym = barrier.at(aubry.cells[a], aubry.cells[b]) +
                         barrier.at(aubry.cells[b], aubry.cells[a]);
            if (sym <= threshold) {
                int ra = find_root(parent, a);
                int rb = find_root(parent, b);
                if (ra != rb) parent[ra] = rb;
            }
        }
    }
    std::vector<int> root_to_class(m, -1);
    StaticClassPartition part;
    for (int a = 0; a < m; ++a) {
        int r = find_root(parent, a);
        if (root_to_class[r] < 0) {
            root_to_class[r] = static_cast<int>(part.classes.size());
            part.classes.emplace_back();
        }
        part.classes[static_cast<size_t>(root_to_class[r])].push_back(aubry.cells[a]);
    }
    const int k = static_cast<int>(part.classes.size());
    part.pairwise.assign(k, std::vector<double>(k, kInf));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double best = kInf;
            for (int x : part.classes[static_cast<size_t>(i)])
                for (int y : part.classes[static_cast<size_t>(j)])
                    best = std::min(best, barrier.at(x, y) + barrier.at(y, x));
            part.pairwise[static_cast<size_t>(i)][static_cast<size_t>(j)] = best;
            if (i != j && best > threshold && best <= 3.0 * threshold)
                part.warnings.push_back("classes " + std::to_string(i) + "," + std::to_string(j) +
                                        " separated by ambiguous gap " + std::to_string(best));
        }
    }
    return part;
}

WeakKamSolution elementary_solution(const ActionKernel& kernel, const PeierlsBarrier& barrier,
                                    int x, double tol_fix) {
    const double tol = tol_fix > 0.0 ? tol_fix : default_tol_fix(kernel);
    WeakKamSolution sol;
    sol.c = barrier.c;
    sol.alpha = barrier.alpha;
    sol.u = barrier.row(x);
    sol.residual = fixed_point_residual(kernel, sol.u, barrier.alpha.value);
    if (sol.residual > 2.0 * barrier.error_bound + tol)
        throw BarrierTooCoarseError("elementary solution residual " +
                                    std::to_string(sol.residual) + " exceeds budget " +
                                    std::to_string(2.0 * barrier.error_bound + tol));
    return sol;
}

double mane_membership(const PeierlsBarrier& barrier, const AubrySet& aubry, int x) {
    double best = kInf;
    for (int a : aubry.cells)
        for (int b : aubry.cells)
            best = std::min(best, barrier.at(a, x) + barrier.at(x, b) - barrier.at(a, b));
    return best;
}

GridFunction mane_defects(const PeierlsBarrier& barrier, const AubrySet& aubry) {
    GridFunction out(barrier.grid);
    parallel_for(0, barrier.n(), [&](int x) { out[x] = mane_membership(barrier, aubry, x); });
    return out;
}

CalibratedOrbit calibrated_orbit(const ActionKernel& kernel, const WeakKamSolution& solution,
                                 int x_end, int n_steps, double tol_fix) {
    const double tol = tol_fix > 0.0 ? tol_fix : default_tol_fix(kernel);
    const GridFunction& u = solution.u;
    std::vector<int> chain{x_end};  // backward in time
    CalibratedOrbit orbit;
    for (int step = 0; step < n_steps; ++step) {
        int x = chain.back();
        int pred = argmin_predecessor(kernel, u, x);
        double defect =
            std::abs(u[x] - u[pred] - kernel.at(pred, x) - solution.alpha.value);
        if (defect > tol)
            throw BrokenCalibrationError("calibration defect " + std::to_string(defect) +
                                         " at backward step " + std::to_string(step));
        orbit.defect = std::max(orbit.defect, defect);
        chain.push_back(pred);
    }
    std::reverse(chain.begin(), chain.end());
    orbit.cells = chain;
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
        MinimizerPath path = backtrack_minimizer(kernel, chain[k], chain[k + 1]);
        PhasePoint state;
        state.position = kernel.grid.point(chain[k]);
        state.momentum = path.momentum_start;
        orbit.states.push_back(state);
        const double t0 = static_cast<double>(k);
        for (size_t s = 0; s + 1 < path.samples.size(); ++s) {
            MinimizerPath::Sample sample = path.samples[s];
            sample.time += t0;
            orbit.substeps.push_back(sample);
        }
        if (k + 2 == chain.size()) {
            PhasePoint last;
            last.position = kernel.grid.point(chain.back());
            last.momentum = path.momentum_end;
            orbit.states.push_back(last);
            MinimizerPath::Sample tail = path.samples.back();
            tail.time += t0;
            orbit.substeps.push_back(tail);
        }
    }
    if (chain.size() == 1) {
        PhasePoint only;
        only.position = kernel.grid.point(chain[0]);
        orbit.states.push_back(only);
    }
    return orbit;
}

std::vector<std::pair<int, double>> heteroclinic_points(const PeierlsBarrier& barrier,
                                                        const std::vector<int>& class_a,
                                                        const std::vector<int>& class_b,
                                                        double tol_mane) {
    std::vector<char> excluded(static_cast<size_t>(barrier.n()), 0);
    for (int a : class_a) excluded[static_cast<size_t>(a)] = 1;
    for (int b : class_b) excluded[static_cast<size_t>(b)] = 1;
    std::vector<std::pair<int, double>> found;
    for (int x = 0; x < barrier.n(); ++x) {
        if (excluded[static_cast<size_t>(x)]) continue;
        double best = kInf;
        for (int a : class_a)
            for (int b : class_b)
                best = std::min(best, barrier.at(a, x) + barrier.at(x, b) - barrier.at(a, b));
        if (best <= tol_mane) found.emplace_back(x, best);
    }
    std::sort(found.begin(), found.end(),
              [](const auto& l, const auto& r) { return l.second < r.second; });
    return found;
}

std::vector<int> mather_set_approx(const ActionKernel& kernel, const WeakKamSolution& solution,
                                   const AubrySet& aubry, int horizon) {
    std::vector<int> recurrent;
    const double cell_radius = 1.5 * kernel.grid.max_spacing();
    for (int a : aubry.cells) {
        TorusPoint home = kernel.grid.point(a);
        int x = a;
        for (int step = 1; step <= horizon; ++step) {
            x = argmin_predecessor(kernel, solution.u, x);
            if (torus_dist(kernel.grid.point(x), home) <= cell_radius) {
                recurrent.push_back(a);
                break;
            }
        }
    }
    return recurrent;
}

}  // namespace wkam
