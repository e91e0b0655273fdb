#include "wkam/model.hpp"

#include <cmath>

#include "wkam/expr.hpp"

namespace wkam {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Vec2 grad_h_q(const LagrangianModel& m, double t, const TorusPoint& q, const Vec2& p) {
    const double h = 1e-6;
    Vec2 g{0.0, 0.0};
    for (int i = 0; i < m.dim; ++i) {
        TorusPoint qp = q, qm = q;
        qp.coords[i] = wrap01(q.coords[i] + h);
        qm.coords[i] = wrap01(q.coords[i] - h);
        g[i] = (m.hamiltonian(t, qp, p) - m.hamiltonian(t, qm, p)) / (2.0 * h);
    }
    return g;
}

Vec2 grad_h_p(const LagrangianModel& m, double t, const TorusPoint& q, const Vec2& p) {
    const double h = 1e-6;
    Vec2 g{0.0, 0.0};
    for (int i = 0; i < m.dim; ++i) {
        Vec2 pp = p, pm = p;
        pp[i] += h;
        pm[i] -= h;
        g[i] = (m.hamiltonian(t, q, pp) - m.hamiltonian(t, q, pm)) / (2.0 * h);
    }
    return g;
}

// Position-Verlet leapfrog: exact splitting for kinetic+potential Hamiltonians.
void leapfrog(const LagrangianModel& m, PhasePoint& s, double& t, double dt) {
    Vec2 gq = grad_h_q(m, t, s.position, s.momentum);
    for (int i = 0; i < m.dim; ++i) s.momentum[i] -= 0.5 * dt * gq[i];
    Vec2 gp = grad_h_p(m, t + 0.5 * dt, s.position, s.momentum);
    for (int i = 0; i < m.dim; ++i)
        s.position.coords[i] = wrap01(s.position.coords[i] + dt * gp[i]);
    gq = grad_h_q(m, t + dt, s.position, s.momentum);
    for (int i = 0; i < m.dim; ++i) s.momentum[i] -= 0.5 * dt * gq[i];
    t += dt;
}

}  // namespace

double legendre_roundtrip(const LagrangianModel& model, double t, const TorusPoint& q,
                          const Vec2& v) {
    Vec2 p = model.legendre_v(t, q, v);
    Vec2 v_back = model.legendre_p(t, q, p);
    double lag = model.lag(t, q, v);
    double ham = model.hamiltonian(t, q, p);
    if (!std::isfinite(ham)) throw ModelEvaluationError("non-finite Hamiltonian value");
    double r = std::abs(lag + ham - dot(p, v, model.dim));
    for (int i = 0; i < model.dim; ++i) r += std::abs(v[i] - v_back[i]);
    return r;
}

PhasePoint flow_step(const LagrangianModel& model, const PhasePoint& state, double t, double dt) {
    if (dt > 0.1 + 1e-12) throw WkamError("flow_step requires dt <= 0.1");
    // Yoshida fourth-order composition of the symmetric second-order step.
    static const double cbrt2 = std::cbrt(2.0);
    static const double w1 = 1.0 / (2.0 - cbrt2);
    static const double w0 = -cbrt2 / (2.0 - cbrt2);
    PhasePoint s = state;
    double tt = t;
    leapfrog(model, s, tt, w1 * dt);
    leapfrog(model, s, tt, w0 * dt);
    leapfrog(model, s, tt, w1 * dt);
    double pnorm = norm(s.momentum, model.dim);
    if (!std::isfinite(pnorm) || pnorm > 10.0 * model.speed_bound_hint)
        throw IntegrationEscapeError("momentum escaped during flow integration");
    return s;
}

PhasePoint flow_time(const LagrangianModel& model, PhasePoint state, double t0, double duration,
                     double dt_max) {
    int steps = static_cast<int>(std::ceil(duration / dt_max - 1e-12));
    if (steps < 1) steps = 1;
    double dt = duration / steps;
    double t = t0;
    for (int i = 0; i < steps; ++i) {
        state = flow_step(model, state, t, dt);
        t += dt;
    }
    return state;
}

LagrangianModel make_free(int dim) {
    LagrangianModel m;
    m.dim = dim;
    m.name = "free";
    m.lagrangian = [dim](double, const TorusPoint&, const Vec2& v) {
        return 0.5 * dot(v, v, dim);
    };
    m.hamiltonian = [dim](double, const TorusPoint&, const Vec2& p) {
        return 0.5 * dot(p, p, dim);
    };
    m.legendre_v = [](double, const TorusPoint&, const Vec2& v) { return v; };
    m.legendre_p = [](double, const TorusPoint&, const Vec2& p) { return p; };
    m.speed_bound_hint = 3.5;
    m.scale = 1.0;
    return m;
}

LagrangianModel make_pendulum(double kappa) {
    LagrangianModel m;
    m.dim = 1;
    m.name = "pendulum";
    m.params["kappa"] = kappa;
    auto well = [kappa](double q) { return kappa * (1.0 - std::cos(kTwoPi * q)); };
    m.lagrangian = [well](double, const TorusPoint& q, const Vec2& v) {
        return 0.5 * v[0] * v[0] + well(q[0]);
    };
    m.hamiltonian = [well](double, const TorusPoint& q, const Vec2& p) {
        return 0.5 * p[0] * p[0] - well(q[0]);
    };
    m.legendre_v = [](double, const TorusPoint&, const Vec2& v) { return v; };
    m.legendre_p = [](double, const TorusPoint&, const Vec2& p) { return p; };
    m.speed_bound_hint = speed_bound_from_comparison(m);
    m.scale = 1.0 + 2.0 * kappa;
    return m;
}

LagrangianModel make_forced_pendulum(double kappa, double eps) {
    LagrangianModel m;
    m.dim = 1;
    m.name = "forced_pendulum";
    m.params["kappa"] = kappa;
    m.params["eps"] = eps;
    auto well = [kappa, eps](double t, double q) {
        return kappa * (1.0 - std::cos(kTwoPi * q)) * (1.0 + eps * std::cos(kTwoPi * t));
    };
    m.lagrangian = [well](double t, const TorusPoint& q, const Vec2& v) {
        return 0.5 * v[0] * v[0] + well(t, q[0]);
    };
    m.hamiltonian = [well](double t, const TorusPoint& q, const Vec2& p) {
        return 0.5 * p[0] * p[0] - well(t, q[0]);
    };
    m.legendre_v = [](double, const TorusPoint&, const Vec2& v) { return v; };
    m.legendre_p = [](double, const TorusPoint&, const Vec2& p) { return p; };
    m.speed_bound_hint = speed_bound_from_comparison(m);
    m.scale = 1.0 + 2.0 * kappa * (1.0 + eps);
    return m;
}

LagrangianModel make_arnold(double kappa, double lambda, double eps) {
    LagrangianModel m;
    m.dim = 2;
    m.name = "arnold";
    m.params["kappa"] = kappa;
    m.params["lambda"] = lambda;
    m.params["eps"] = eps;
    // L = L1(t,q1,v1) + |v2|^2/4 + V(q2) F(t,q1) with V > 0 off q2 = 0 and F > 0,
    // so the strict inequality L(t,q,v) > L(t,q1,0,v1,0) holds off {q2=v2=0}.
    auto well = [kappa](double q1) { return kappa * (1.0 - std::cos(kTwoPi * q1)); };
    auto vpot = [lambda](double q2) { return lambda * (1.0 - std::cos(kTwoPi * q2)); };
    auto force = [eps](double t, double q1) {
        return 1.0 + eps * (std::cos(kTwoPi * t) + std::cos(kTwoPi * q1));
    };
    m.lagrangian = [=](double t, const TorusPoint& q, const Vec2& v) {
        return 0.5 * v[0] * v[0] + well(q[0]) + 0.25 * v[1] * v[1] +
               vpot(q[1]) * force(t, q[0]);
    };
    m.hamiltonian = [=](double t, const TorusPoint& q, const Vec2& p) {
        return 0.5 * p[0] * p[0] + p[1] * p[1] - well(q[0]) - vpot(q[1]) * force(t, q[0]);
    };
    m.legendre_v = [](double, const TorusPoint&, const Vec2& v) {
        return Vec2{v[0], 0.5 * v[1]};
    };
    m.legendre_p = [](double, const TorusPoint&, const Vec2& p) {
        return Vec2{p[0], 2.0 * p[1]};
    };
    m.speed_bound_hint = speed_bound_from_comparison(m);
    m.scale = 1.0 + 2.0 * kappa + 2.0 * lambda * (1.0 + 2.0 * eps);
    return m;
}

LagrangianModel make_builtin(const BuiltinModel& spec) {
    auto get = [&spec](const std::string& key, double dflt) {
        auto it = spec.parameters.find(key);
        return it == spec.parameters.end() ? dflt : it->second;
    };
    if (spec.name == "free") return make_free(static_cast<int>(get("dim", 1)));
    if (spec.name == "pendulum") return make_pendulum(get("kappa", 1.0));
    if (spec.name == "forced_pendulum")
        return make_forced_pendulum(get("kappa", 1.0), get("eps", 0.1));
    if (spec.name == "arnold")
        return make_arnold(get("kappa", 0.1), get("lambda", 0.25), get("eps", 0.3));
    throw WkamError("unknown builtin model '" + spec.name + "'");
}

LagrangianModel make_expression_model(const std::string& lagrangian_expr, int dim) {
    if (dim < 1 || dim > 2) throw WkamError("expression models support d in {1,2}");
    ExprPtr expr = parse_expression(lagrangian_expr);
    auto lag = [expr, dim](double t, const TorusPoint& q, const Vec2& v) {
        ExprEnv env;
        env.t = t;
        env.q = q.coords;
        env.v = v;
        (void)dim;
        return expr->eval(env);
    };

    auto grad_v = [lag, dim](double t, const TorusPoint& q, const Vec2& v) {
        const double h = 1e-6;
        Vec2 g{0.0, 0.0};
        for (int i = 0; i < dim; ++i) {
            Vec2 vp = v, vm = v;
            vp[i] += h;
            vm[i] -= h;
            g[i] = (lag(t, q, vp) - lag(t, q, vm)) / (2.0 * h);
        }
        return g;
    };

    // Newton inversion of dL/dv = p, valid under fiberwise convexity.
    auto invert = [lag, grad_v, dim](double t, const TorusPoint& q, const Vec2& p) {
        Vec2 v = p;  // unit-mass initial guess
        const double h = 1e-5;
        for (int iter = 0; iter < 60; ++iter) {
            Vec2 g = grad_v(t, q, v);
            double res = 0.0;
            for (int i = 0; i < dim; ++i) res += std::abs(g[i] - p[i]);
            if (res < 1e-11) break;
            for (int i = 0; i < dim; ++i) {
                Vec2 vp = v, vm = v;
                vp[i] += h;
                vm[i] -= h;
                double hess = (grad_v(t, q, vp)[i] - grad_v(t, q, vm)[i]) / (2.0 * h);
                if (!(hess > 1e-10)) throw ModelEvaluationError("non-convex fiber in Newton inversion");
                v[i] -= (g[i] - p[i]) / hess;
            }
        }
        return v;
    };

    LagrangianModel m;
    m.dim = dim;
    m.name = "custom";
    m.lagrangian = lag;
    m.legendre_v = grad_v;
    m.legendre_p = invert;
    m.hamiltonian = [lag, invert, dim](double t, const TorusPoint& q, const Vec2& p) {
        Vec2 v = invert(t, q, p);
        return dot(p, v, dim) - lag(t, q, v);
    };
    m.speed_bound_hint = speed_bound_from_comparison(m);
    double smax = 1.0;
    for (int i = 0; i < 16; ++i) {
        TorusPoint q(i / 16.0, dim == 2 ? ((i * 5) % 16) / 16.0 : 0.0);
        q.dim = dim;
        smax = std::max(smax, std::abs(lag(i / 16.0, q, Vec2{0.0, 0.0})));
    }
    m.scale = 1.0 + smax;
    return m;
}

LagrangianModel cover_model(const LagrangianModel& model, int axis, int k) {
    if (k < 2) throw InvalidCoverError("cover multiplicity must be >= 2");
    if (axis < 0 || axis >= model.dim) throw InvalidCoverError("cover axis out of range");
    const double kk = k;
    const int dim = model.dim;
    auto base_q = [axis, kk](const TorusPoint& x) {
        TorusPoint q = x;
        q.coords[axis] = wrap01(x.coords[axis] * kk);
        return q;
    };
    LagrangianModel c = model;
    c.name = model.name + "/cover";
    c.cover[axis] *= k;
    auto L = model.lagrangian;
    auto H = model.hamiltonian;
    auto lv = model.legendre_v;
    auto lp = model.legendre_p;
    c.lagrangian = [=](double t, const TorusPoint& x, const Vec2& v) {
        Vec2 vb = v;
        vb[axis] *= kk;
        return L(t, base_q(x), vb);
    };
    c.hamiltonian = [=](double t, const TorusPoint& x, const Vec2& p) {
        Vec2 pb = p;
        pb[axis] /= kk;
        return H(t, base_q(x), pb);
    };
    c.legendre_v = [=](double t, const TorusPoint& x, const Vec2& v) {
        Vec2 vb = v;
        vb[axis] *= kk;
        Vec2 pb = lv(t, base_q(x), vb);
        pb[axis] *= kk;
        return pb;
    };
    c.legendre_p = [=](double t, const TorusPoint& x, const Vec2& p) {
        Vec2 pb = p;
        pb[axis] /= kk;
        Vec2 vb = lp(t, base_q(x), pb);
        vb[axis] /= kk;
        return vb;
    };
    (void)dim;
    return c;
}

CohomologyClass lift_class(const CohomologyClass& c, int axis, int k) {
    CohomologyClass r = c;
    r.components[axis] *= k;
    return r;
}

PhasePoint project_to_base(const LagrangianModel& covered, const PhasePoint& state) {
    PhasePoint b = state;
    for (int i = 0; i < covered.dim; ++i) {
        if (covered.cover[i] > 1) {
            b.position.coords[i] = wrap01(state.position.coords[i] * covered.cover[i]);
            b.momentum[i] = state.momentum[i] / covered.cover[i];
        }
    }
    return b;
}

double speed_bound_from_comparison(const LagrangianModel& model, double cmax) {
    // Geodesic comparison: a minimizer over a unit time window costs no more
    // than a geodesic between the endpoints, so its speed cannot exceed the K
    // at which the per-time cost of moving beats that budget everywhere.
    double budget = 0.0;
    double floor_l = 0.0;
    const int nt = 8, nq = 12;
    for (int it = 0; it < nt; ++it) {
        double t = it / static_cast<double>(nt);
        for (int i = 0; i < nq; ++i) {
            for (int j = 0; j < (model.dim == 2 ? nq : 1); ++j) {
                TorusPoint q(i / static_cast<double>(nq), j / static_cast<double>(nq));
                q.dim = model.dim;
                for (int dir = 0; dir < 2 * model.dim; ++dir) {
                    Vec2 v{0.0, 0.0};
                    v[dir / 2] = (dir % 2 ? -1.0 : 1.0);
                    budget = std::max(budget, model.lag(t, q, v));
                }
                floor_l = std::min(floor_l, model.lag(t, q, Vec2{0.0, 0.0}));
            }
        }
    }
    budget += cmax;  // the c-term over a unit window moves the budget by |c| diam-ish
    for (double K = 1.0; K < 256.0; K *= 1.1) {
        bool fast_enough = true;
        for (int it = 0; it < nt && fast_enough; ++it) {
            double t = it / static_cast<double>(nt);
            for (int i = 0; i < nq && fast_enough; ++i) {
                for (int j = 0; j < (model.dim == 2 ? nq : 1) && fast_enough; ++j) {
                    TorusPoint q(i / static_cast<double>(nq), j / static_cast<double>(nq));
                    q.dim = model.dim;
                    for (int dir = 0; dir < 2 * model.dim; ++dir) {
                        Vec2 v{0.0, 0.0};
                        v[dir / 2] = (dir % 2 ? -K : K);
                        if (model.lag(t, q, v) - cmax * K <= budget - floor_l + 1.0)
                            fast_enough = false;
                    }
                }
            }
        }
        if (fast_enough) return 1.25 * K;
    }
    return 256.0;
}

}  // namespace wkam
