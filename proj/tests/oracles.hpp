#pragma once

// Independent reference computations for the test suite: closed forms,
// quadrature, exhaustive enumeration and a cycle-mean reduction.  Nothing
// here may call into the code paths under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

constexpr double kPi = 3.14159265358979323846;

// Pendulum potential W(q) = kappa (1 - cos 2 pi q); sqrt(2 W) = 2 sqrt(kappa) |sin(pi q)|.
// Arc integral of sqrt(2W) from a to b along increasing q (both in [0,1]).
inline double pendulum_arc(double kappa, double a, double b) {
    // integral of 2 sqrt(kappa) sin(pi q) dq = (2 sqrt(kappa)/pi)(cos(pi a) - cos(pi b))
    return 2.0 * std::sqrt(kappa) / kPi * (std::cos(kPi * a) - std::cos(kPi * b));
}

// Maupertuis distance at zero energy: min over the two arcs joining x and y.
inline double maupertuis_distance(double kappa, double x, double y) {
    x -= std::floor(x);
    y -= std::floor(y);
    double lo = std::min(x, y), hi = std::max(x, y);
    double direct = pendulum_arc(kappa, lo, hi);
    double around = pendulum_arc(kappa, 0.0, lo) + pendulum_arc(kappa, hi, 1.0);
    return std::min(direct, around);
}

// Critical class of the pendulum: loop integral of sqrt(2W).
inline double pendulum_critical_c(double kappa) { return 4.0 * std::sqrt(kappa) / kPi; }

// Rotation-regime energy E(c) solving c = integral of sqrt(2(E + W)); alpha(c) = E.
inline double pendulum_energy_for_c(double kappa, double c) {
    auto period_integral = [&](double e) {
        const int n = 4096;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            double q = (i + 0.5) / n;
            acc += std::sqrt(2.0 * (e + kappa * (1.0 - std::cos(2.0 * kPi * q))));
        }
        return acc / n;
    };
    double lo = 0.0, hi = std::max(1.0, c * c);
    while (period_integral(hi) < std::abs(c)) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (period_integral(mid) < std::abs(c) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Exhaustive minimum over all intermediate substep nodes, costs summed left
// to right; substep_cost is supplied by the caller.
inline std::vector<double> exhaustive_kernel(
    int n, int substeps, const std::function<double(int, int, int)>& substep_cost) {
    std::vector<double> table(static_cast<size_t>(n) * n,
                              std::numeric_limits<double>::infinity());
    std::vector<int> nodes(static_cast<size_t>(substeps + 1));
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            nodes[0] = x;
            nodes[static_cast<size_t>(substeps)] = y;
            // Odometer over the substeps-1 free nodes.
            std::vector<int> mid(static_cast<size_t>(substeps - 1), 0);
            while (true) {
                for (int i = 0; i < substeps - 1; ++i)
                    nodes[static_cast<size_t>(i + 1)] = mid[static_cast<size_t>(i)];
                double cost = 0.0;
                for (int k = 0; k < substeps; ++k)
                    cost += substep_cost(k, nodes[static_cast<size_t>(k)],
                                         nodes[static_cast<size_t>(k + 1)]);
                double& slot = table[static_cast<size_t>(x) * n + y];
                if (cost < slot) slot = cost;
                int carry = 0;
                while (carry < substeps - 1 && ++mid[static_cast<size_t>(carry)] == n) {
                    mid[static_cast<size_t>(carry)] = 0;
                    ++carry;
                }
                if (carry == substeps - 1) break;
            }
        }
    }
    return table;
}

// Karp's minimum cycle mean of the complete digraph with weights w[u*n+v].
// The minimal average action per period equals -alpha at grid resolution.
inline double karp_min_cycle_mean(const std::vector<double>& w, int n) {
    std::vector<std::vector<double>> d(static_cast<size_t>(n + 1),
                                       std::vector<double>(static_cast<size_t>(n),
                                                           std::numeric_limits<double>::infinity()));
    for (int v = 0; v < n; ++v) d[0][static_cast<size_t>(v)] = 0.0;
    for (int k = 1; k <= n; ++k)
        for (int v = 0; v < n; ++v) {
            double best = std::numeric_limits<double>::infinity();
            for (int u = 0; u < n; ++u)
                best = std::min(best, d[static_cast<size_t>(k - 1)][static_cast<size_t>(u)] +
                                          w[static_cast<size_t>(u) * n + v]);
            d[static_cast<size_t>(k)][static_cast<size_t>(v)] = best;
        }
    double mean = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, (d[static_cast<size_t>(n)][static_cast<size_t>(v)] -
                                     d[static_cast<size_t>(k)][static_cast<size_t>(v)]) /
                                        (n - k));
        mean = std::min(mean, worst);
    }
    return mean;
}

}  // namespace oracle
