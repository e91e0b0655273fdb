#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wkam/aubry.hpp"
#include "wkam/pseudograph.hpp"

using namespace wkam;

TEST_SUITE("pseudograph") {

TEST_CASE("cell set bookkeeping") {
    SpatialGrid grid(8, 8);
    CellSet set(grid);
    CHECK(set.empty());
    set.add_box({{1, 2}, {3, 4}});
    CHECK(set.count() == 9);
    CHECK(set.contains(grid.index(2, 3)));
    CHECK_FALSE(set.contains(grid.index(0, 0)));
    set.add_ball(grid.index(6, 6), 1);
    CHECK(set.contains(grid.index(7, 7)));
    auto proj = set.axis_projection(0);
    CHECK(proj[2] == 1);
    CHECK(proj[4] == 0);
    CHECK(proj[6] == 1);
    CHECK_THROWS_AS(set.add_box(CellBox{{6, 0}, {9, 0}}), WkamError);
}

TEST_CASE("norms and distance") {
    SpatialGrid grid(8);
    Pseudograph a{CohomologyClass(0.3), GridFunction(grid, 0.0)};
    a.u[3] = 1.0;
    CHECK(pseudograph_norm(a).value == doctest::Approx(0.3 + 0.5));
    CellSet flat(grid);
    flat.add_box({{0, 0}, {2, 0}});
    CHECK(pseudograph_norm_restricted(a, flat).value == doctest::Approx(0.3));
    Pseudograph b{CohomologyClass(0.1), GridFunction(grid, 5.0)};
    // Constant shifts of the potential are invisible.
    CHECK(pseudograph_dist(a, b) == doctest::Approx(0.2 + 0.5));
}

TEST_CASE("solution graphs are invariant under evolution") {
    auto kernel = build_kernel(make_pendulum(1.0), CohomologyClass(0.4), SpatialGrid(48), 8);
    auto est = alpha(kernel, 128);
    auto sol = weak_kam_solve(kernel, est, GridFunction(kernel.grid, 0.0));
    Pseudograph g{kernel.cohomology, sol.u};
    auto g1 = evolve(g, kernel, est);
    CHECK(pseudograph_dist(g, g1) <= 2.0 * sol.residual);

    auto pair = conjugate_pair(kernel, est, sol);
    Pseudograph gd{kernel.cohomology, pair.dual, true};
    auto gd1 = evolve(gd, kernel, est);
    CHECK(pseudograph_dist(gd, gd1) <= 4.0 * default_tol_fix(kernel));
}

TEST_CASE("restriction to the full grid with a single step is plain evolution") {
    auto kernel = build_kernel(make_pendulum(0.7), CohomologyClass(0.2), SpatialGrid(24), 4);
    auto est = alpha(kernel, 64);
    GridFunction u(kernel.grid);
    for (int i = 0; i < u.size(); ++i) u[i] = std::sin(2.0 * M_PI * kernel.grid.point(i)[0]);
    Pseudograph g{kernel.cohomology, u};
    CellSet all(kernel.grid);
    all.add_box({{0, 0}, {kernel.grid.sizes[0] - 1, 0}});
    auto res = evolve_restricted(g, kernel, est, all, 1, 1);
    auto ref = evolve(g, kernel, est);
    CHECK(sup_dist(res.graph.u, ref.u) < 1e-12);
    for (int x = 0; x < kernel.n(); ++x) {
        const auto& att = res.attainments[static_cast<size_t>(x)];
        CHECK(att.k == 1);
        CHECK(att.source >= 0);
        CHECK(u[att.source] + kernel.at(att.source, x) + est.value ==
              doctest::Approx(res.graph.u[x]).epsilon(1e-14));
    }
}

TEST_CASE("restricted evolution reports multi-step sources") {
    auto kernel = build_kernel(make_pendulum(0.7), CohomologyClass(0.0), SpatialGrid(24), 4);
    auto est = alpha(kernel, 128);
    auto sol = weak_kam_solve(kernel, est, GridFunction(kernel.grid, 0.0));
    Pseudograph g{kernel.cohomology, sol.u};
    CellSet start(kernel.grid);
    start.add_ball(0, 1);
    auto res = evolve_restricted(g, kernel, est, start, 2, 8);
    for (int x = 0; x < kernel.n(); ++x) {
        const auto& att = res.attainments[static_cast<size_t>(x)];
        CHECK(start.contains(att.source));
        CHECK(att.k >= 2);
        CHECK(att.k <= 8);
        CHECK(std::isfinite(res.graph.u[x]));
    }
}

TEST_CASE("wedge of a conjugate pair marks the static cells") {
    auto kernel = build_kernel(make_pendulum(1.0), CohomologyClass(0.0), SpatialGrid(64), 8);
    auto est = alpha(kernel, 256);
    auto sol = weak_kam_solve(kernel, est, GridFunction(kernel.grid, 0.0));
    auto pair = conjugate_pair(kernel, est, sol);
    Pseudograph g{kernel.cohomology, sol.u};
    Pseudograph gd{kernel.cohomology, pair.dual, true};
    auto w = wedge(g, gd, 0.1);
    REQUIRE(!w.cells.empty());
    // The pendulum well bottom carries the minimum of u - u_dual.
    for (size_t k = 0; k < w.cells.size(); ++k) {
        CHECK(torus_dist(kernel.grid.point(w.cells[k]), TorusPoint(0.0)) < 0.2);
        CHECK(std::abs(w.phase_points[k].momentum[0]) < 0.8);
    }
}

TEST_CASE("bump form has the prescribed class and vanishes on the set") {
    SpatialGrid grid(32);
    CellSet set(grid);
    set.add_box({{0, 0}, {7, 0}});
    auto form = bump_form(CohomologyClass(0.25), set, grid);
    // Density is zero on the member cells and integrates to one.
    for (int i = 0; i <= 7; ++i) CHECK(form.density(0, grid.point(i)[0]) == 0.0);
    double mass = 0.0;
    const int nq = 20000;
    for (int i = 0; i < nq; ++i) mass += form.density(0, (i + 0.5) / nq) / nq;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    // The primitive is the periodic potential of d (density - dq).
    CHECK(form.primitive(TorusPoint(0.0)) == doctest::Approx(0.0));
    double g0 = form.primitive(TorusPoint(0.999999));
    CHECK(std::abs(g0) < 1e-4);  // periodic continuation
    // On the member cells the primitive is linear with slope -d.
    for (int i = 1; i <= 7; ++i) {
        double expect = -0.25 * grid.point(i)[0];
        CHECK(form.primitive(grid.point(i)) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("class change is exact on the interior of the protected set") {
    SpatialGrid grid(32);
    GridFunction u(grid);
    for (int i = 0; i < grid.count(); ++i) u[i] = std::cos(2.0 * M_PI * grid.point(i)[0]);
    Pseudograph g{CohomologyClass(0.1), u};
    CellSet set(grid);
    set.add_box({{4, 0}, {12, 0}});
    auto out = modify_cohomology(g, CohomologyClass(0.35), set);
    CHECK(out.c[0] == doctest::Approx(0.35));
    // c + du is unchanged on interior member cells: du picks up exactly -d.
    const double h = grid.max_spacing();
    for (int i = 5; i <= 11; ++i) {
        double du_old = (u[i + 1] - u[i - 1]) / (2.0 * h);
        double du_new = (out.u[i + 1] - out.u[i - 1]) / (2.0 * h);
        CHECK(0.35 + du_new == doctest::Approx(0.1 + du_old).epsilon(1e-12));
    }
}

TEST_CASE("no room for the bump form raises an obstruction") {
    SpatialGrid grid(16);
    CellSet set(grid);
    set.add_box({{0, 0}, {13, 0}});  // only a 2-cell free run remains
    CHECK_THROWS_AS(bump_form(CohomologyClass(0.2), set, grid), ObstructionError);
}

TEST_CASE("deck symmetrization is idempotent and invariant") {
    SpatialGrid grid(24);
    GridFunction u(grid);
    for (int i = 0; i < grid.count(); ++i) {
        double x = grid.point(i)[0];
        u[i] = std::cos(2.0 * M_PI * x) + 0.3 * std::sin(6.0 * M_PI * x);
    }
    Pseudograph g{CohomologyClass(0.0), u};
    auto s = deck_symmetrize(g, 0, 2);
    auto ss = deck_symmetrize(s, 0, 2);
    CHECK(sup_dist(s.u, ss.u) == 0.0);
    // Invariance under the half-period deck translation.
    for (int i = 0; i < grid.count(); ++i)
        CHECK(s.u[i] == doctest::Approx(s.u[grid.shift(i, 0, 12)]));
    CHECK_THROWS_AS(deck_symmetrize(g, 0, 5), InvalidCoverError);
}

TEST_CASE("graph points carry the covector of the potential") {
    SpatialGrid grid(64);
    GridFunction u(grid);
    for (int i = 0; i < grid.count(); ++i) u[i] = 0.1 * std::sin(2.0 * M_PI * grid.point(i)[0]);
    Pseudograph g{CohomologyClass(0.5), u};
    auto pts = graph_points(g, 50.0);
    REQUIRE(!pts.empty());
    for (const auto& p : pts) {
        double expect = 0.5 + 0.2 * M_PI * std::cos(2.0 * M_PI * p.position[0]);
        CHECK(std::abs(p.momentum[0] - expect) < 0.005);
    }
}

}
