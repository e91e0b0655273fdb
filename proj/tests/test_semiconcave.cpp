#include <doctest.h>

#include <cmath>

#include "wkam/semiconcave.hpp"
#include "wkam/weakkam.hpp"

using namespace wkam;

TEST_SUITE("semiconcave") {

TEST_CASE("smooth periodic function has the expected constant") {
    SpatialGrid grid(64);
    GridFunction u(grid);
    for (int i = 0; i < grid.count(); ++i)
        u[i] = std::cos(2.0 * M_PI * grid.point(i)[0]);
    auto report = semiconcavity_constant(u);
    // Second difference of cos is -cos scaled; the max over the grid is
    // (2 pi)^2 / 2 up to discretization.
    double expect = 2.0 * M_PI * M_PI;
    CHECK(report.constant == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("gradient and superdifferential agree at smooth cells") {
    SpatialGrid grid(64);
    GridFunction u(grid);
    for (int i = 0; i < grid.count(); ++i)
        u[i] = std::sin(2.0 * M_PI * grid.point(i)[0]);
    auto d = superdifferential_at(u, 16, 30.0);
    CHECK(d.differentiable);
    // sin'(pi/2) = 0 at the crest; pick a generic cell instead.
    auto g = grid_gradient(u, 5);
    CHECK(g[0] == doctest::Approx(2.0 * M_PI * std::cos(2.0 * M_PI * grid.point(5)[0]))
                      .epsilon(0.01));
}

TEST_CASE("corner is flagged as non-differentiable") {
    SpatialGrid grid(32);
    GridFunction u(grid);
    for (int i = 0; i < grid.count(); ++i) {
        double x = grid.point(i)[0];
        u[i] = -std::abs(wrap_half(x - 0.5));  // crest at x = 0.5
    }
    auto d = superdifferential_at(u, 16, 10.0);
    CHECK_FALSE(d.differentiable);
    CHECK(d.lower[0] <= -0.9);
    CHECK(d.upper[0] >= 0.9);
}

TEST_CASE("weak KAM solutions are semiconcave with a grid-stable constant") {
    auto k32 = build_kernel(make_pendulum(1.0), CohomologyClass(0.4), SpatialGrid(32), 8);
    auto k64 = build_kernel(make_pendulum(1.0), CohomologyClass(0.4), SpatialGrid(64), 8);
    auto s32 = weak_kam_solve(k32, alpha(k32, 128), GridFunction(k32.grid, 0.0));
    auto s64 = weak_kam_solve(k64, alpha(k64, 128), GridFunction(k64.grid, 0.0));
    auto r32 = semiconcavity_constant(s32.u);
    auto r64 = semiconcavity_constant(s64.u);
    // Refining the grid must not blow the constant up.
    CHECK(r64.constant <= 3.0 * std::max(1.0, r32.constant));
}

TEST_CASE("minimizing set of a conjugate pair carries a Lipschitz covector field") {
    auto kernel = build_kernel(make_pendulum(1.0), CohomologyClass(0.8), SpatialGrid(64), 8);
    auto est = alpha(kernel, 128);
    auto sol = weak_kam_solve(kernel, est, GridFunction(kernel.grid, 0.0));
    auto pair = conjugate_pair(kernel, est, sol);
    GridFunction neg_dual(kernel.grid);
    for (int i = 0; i < neg_dual.size(); ++i) neg_dual[i] = -pair.dual[i];
    auto report = lipschitz_graph_on_minset(sol.u, neg_dual, 2.0 * sol.residual + 1e-9);
    CHECK(!report.cells.empty());
    CHECK(report.covectors.size() == report.cells.size());
    CHECK(std::isfinite(report.lipschitz_ratio));
}

}
