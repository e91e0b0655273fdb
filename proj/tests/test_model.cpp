#include <doctest.h>

#include <cmath>
#include <random>

#include "wkam/model.hpp"

using namespace wkam;

TEST_SUITE("model") {

TEST_CASE("legendre round trip on the builtins") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uq(0.0, 1.0), uv(-2.5, 2.5);
    for (const auto& model :
         {make_free(1), make_pendulum(0.7), make_forced_pendulum(1.0, 0.1), make_arnold()}) {
        for (int it = 0; it < 50; ++it) {
            TorusPoint q(uq(rng), uq(rng));
            q.dim = model.dim;
            Vec2 v{uv(rng), model.dim == 2 ? uv(rng) : 0.0};
            double t = uq(rng);
            CHECK(legendre_roundtrip(model, t, q, v) < 1e-8);
        }
    }
}

TEST_CASE("expression model matches the hand-written pendulum") {
    auto expr = make_expression_model("0.5*v^2 + 0.7*(1 - cos(2*pi*q))", 1);
    auto ref = make_pendulum(0.7);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uq(0.0, 1.0), uv(-2.0, 2.0);
    for (int it = 0; it < 30; ++it) {
        TorusPoint q(uq(rng));
        Vec2 v{uv(rng), 0.0};
        CHECK(expr.lag(0.3, q, v) == doctest::Approx(ref.lag(0.3, q, v)).epsilon(1e-10));
        CHECK(legendre_roundtrip(expr, 0.3, q, v) < 1e-6);
    }
}

TEST_CASE("autonomous flow conserves energy") {
    auto model = make_pendulum(1.0);
    PhasePoint s;
    s.position = TorusPoint(0.3);
    s.momentum = {1.2, 0.0};
    double e0 = model.hamiltonian(0.0, s.position, s.momentum);
    PhasePoint out = flow_time(model, s, 0.0, 1.0, 1e-3);
    double e1 = model.hamiltonian(0.0, out.position, out.momentum);
    CHECK(std::abs(e1 - e0) < 1e-6);
}

TEST_CASE("free flow is a straight line") {
    auto model = make_free(1);
    PhasePoint s;
    s.position = TorusPoint(0.1);
    s.momentum = {0.5, 0.0};
    PhasePoint out = flow_time(model, s, 0.0, 1.0, 1e-2);
    CHECK(out.position[0] == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(out.momentum[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cover model agrees with the base along projected data") {
    auto base = make_arnold();
    auto cov = cover_model(base, 1, 2);
    CHECK(cov.cover[1] == 2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uq(0.0, 1.0), uv(-1.5, 1.5);
    for (int it = 0; it < 30; ++it) {
        // Cover point in unit coordinates; one cover turn is two base turns.
        TorusPoint qc(uq(rng), uq(rng));
        Vec2 vc{uv(rng), uv(rng)};
        TorusPoint qb(qc[0], wrap01(qc[1] * 2.0));
        Vec2 vb{vc[0], vc[1] * 2.0};
        double t = uq(rng);
        CHECK(cov.lag(t, qc, vc) == doctest::Approx(base.lag(t, qb, vb)).epsilon(1e-12));
        CHECK(legendre_roundtrip(cov, t, qc, vc) < 1e-8);
    }
}

TEST_CASE("class lift and phase projection are mutually consistent") {
    CohomologyClass c(0.3, 0.5);
    CohomologyClass lifted = lift_class(c, 1, 2);
    CHECK(lifted[0] == doctest::Approx(0.3));
    CHECK(lifted[1] == doctest::Approx(1.0));

    auto cov = cover_model(make_arnold(), 1, 2);
    PhasePoint s;
    s.position = TorusPoint(0.2, 0.8);
    s.momentum = {0.4, 0.6};
    PhasePoint b = project_to_base(cov, s);
    CHECK(b.position[0] == doctest::Approx(0.2));
    CHECK(b.position[1] == doctest::Approx(0.6));  // 1.6 wrapped
    CHECK(b.momentum[1] == doctest::Approx(0.3));  // momentum divides by the multiplicity
}

TEST_CASE("cover flow projects onto the base flow") {
    auto base = make_arnold();
    auto cov = cover_model(base, 1, 2);
    PhasePoint sc;
    sc.position = TorusPoint(0.2, 0.35);
    sc.momentum = {0.5, 0.3};
    PhasePoint sb = project_to_base(cov, sc);
    PhasePoint fc = project_to_base(cov, flow_time(cov, sc, 0.0, 1.0, 5e-4));
    PhasePoint fb = flow_time(base, sb, 0.0, 1.0, 5e-4);
    CHECK(phase_dist(fc, fb) < 1e-6);
}

TEST_CASE("comparison speed bound dominates the default hint regimes") {
    auto model = make_pendulum(1.0);
    double k = speed_bound_from_comparison(model, 2.0);
    CHECK(k > 0.0);
    CHECK(std::isfinite(k));
    // A class of size 2 transports at least distance-2 lifts; crude lower bound.
    CHECK(k >= 2.0);
}

TEST_CASE("builtin factory dispatches on the name") {
    BuiltinModel spec;
    spec.name = "pendulum";
    spec.parameters["kappa"] = 0.7;
    auto m = make_builtin(spec);
    auto ref = make_pendulum(0.7);
    TorusPoint q(0.2);
    Vec2 v{1.0, 0.0};
    CHECK(m.lag(0.0, q, v) == doctest::Approx(ref.lag(0.0, q, v)));
    spec.name = "unknown";
    CHECK_THROWS_AS(make_builtin(spec), WkamError);
}

}
