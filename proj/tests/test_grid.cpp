#include <doctest.h>

#include "wkam/grid.hpp"

using namespace wkam;

TEST_SUITE("grid") {

TEST_CASE("wrapping") {
    CHECK(wrap01(1.25) == doctest::Approx(0.25));
    CHECK(wrap01(-0.25) == doctest::Approx(0.75));
    CHECK(wrap01(1.0) == 0.0);
    CHECK(wrap_half(0.75) == doctest::Approx(-0.25));
    CHECK(wrap_half(-0.5) == doctest::Approx(-0.5));
    CHECK(wrap_half(0.5) == doctest::Approx(-0.5));
}

TEST_CASE("torus distance is a shortest representative") {
    TorusPoint a(0.1), b(0.9);
    CHECK(torus_dist(a, b) == doctest::Approx(0.2));
    TorusPoint c(0.1, 0.9), d(0.9, 0.1);
    CHECK(torus_dist(c, d) == doctest::Approx(std::sqrt(0.08)));
}

TEST_CASE("grid indexing round trip") {
    SpatialGrid g(8, 4);
    CHECK(g.count() == 32);
    for (int i = 0; i < g.count(); ++i) {
        auto c = g.coords(i);
        CHECK(g.index(c[0], c[1]) == i);
    }
    CHECK(g.index(-1, 0) == g.index(7, 0));
    CHECK(g.index(8, 5) == g.index(0, 1));
    CHECK(g.shift(g.index(7, 3), 0, 1) == g.index(0, 3));
}

TEST_CASE("grid points lie on the lattice") {
    SpatialGrid g(10);
    TorusPoint p = g.point(3);
    CHECK(p[0] == doctest::Approx(0.3));
    CHECK(g.max_spacing() == doctest::Approx(0.1));
}

TEST_CASE("grid function reductions") {
    SpatialGrid g(4);
    GridFunction u(g);
    u[0] = 3.0; u[1] = -1.0; u[2] = 0.0; u[3] = 2.0;
    CHECK(u.min() == -1.0);
    CHECK(u.max() == 3.0);
    CHECK(u.span() == 4.0);
    CHECK(u.argmin() == 1);
    u.normalize_min();
    CHECK(u.min() == 0.0);
    CHECK(u[0] == 4.0);
}

TEST_CASE("sup and quotient distances") {
    SpatialGrid g(3);
    GridFunction u(g, 0.0), v(g, 0.0);
    v[0] = 1.0; v[1] = 1.0; v[2] = 1.0;
    CHECK(sup_dist(u, v) == 1.0);
    CHECK(quotient_dist(u, v) == 0.0);  // constants are identified
    v[2] = 3.0;
    CHECK(quotient_dist(u, v) == 1.0);
}

TEST_CASE("cohomology class arithmetic") {
    CohomologyClass a(0.3, 0.4);
    CHECK(a.norm() == doctest::Approx(0.5));
    CohomologyClass d = a - CohomologyClass(0.1, 0.4);
    CHECK(d[0] == doctest::Approx(0.2));
    CHECK(d[1] == doctest::Approx(0.0));
}

}
