#pragma once

#include <functional>
#include <map>
#include <string>

#include "wkam/grid.hpp"

namespace wkam {

// Evaluator bundle for a time-periodic Tonelli Lagrangian on T^d and its
// dual Hamiltonian.  All evaluators are pure and safe to call concurrently.
struct LagrangianModel {
    int dim = 1;
    std::function<double(double, const TorusPoint&, const Vec2&)> lagrangian;
    std::function<double(double, const TorusPoint&, const Vec2&)> hamiltonian;
    std::function<Vec2(double, const TorusPoint&, const Vec2&)> legendre_v;  // (t,q,v) -> p
    std::function<Vec2(double, const TorusPoint&, const Vec2&)> legendre_p;  // (t,q,p) -> v
    double period = 1.0;
    double speed_bound_hint = 3.0;  // a priori bound on minimizer speeds
    double scale = 1.0;             // typical action magnitude, used for tolerances
    std::string name;
    std::map<std::string, double> params;
    std::array<int, 2> cover{1, 1};  // covering multiplicity per axis (1 = base model)

    double lag(double t, const TorusPoint& q, const Vec2& v) const {
        double val = lagrangian(t, q, v);
        if (!std::isfinite(val)) throw ModelEvaluationError("non-finite Lagrangian value");
        return val;
    }
};

struct BuiltinModel {
    std::string name;  // free | pendulum | forced_pendulum | arnold
    std::map<std::string, double> parameters;
};

LagrangianModel make_free(int dim = 1);
LagrangianModel make_pendulum(double kappa = 1.0);
LagrangianModel make_forced_pendulum(double kappa = 1.0, double eps = 0.1);
// Two degrees of freedom: pendulum (or free) factor in q1 coupled to an
// a priori unstable q2 factor through a positive potential that vanishes
// only on {q2 = 0}.
LagrangianModel make_arnold(double kappa = 0.1, double lambda = 0.25, double eps = 0.3);
LagrangianModel make_builtin(const BuiltinModel& spec);

// User model from an expression for L in t, q1, q2, v1, v2.  The Hamiltonian
// and the inverse Legendre map are obtained by numeric Newton inversion.
LagrangianModel make_expression_model(const std::string& lagrangian_expr, int dim);

// |v - dH/dp(t,q,dL/dv)| + |L + H - p.v| at the Legendre pair of (t,q,v).
double legendre_roundtrip(const LagrangianModel& model, double t, const TorusPoint& q,
                          const Vec2& v);

// One step of a fixed-step symmetric splitting integrator (fourth order
// composition) for Hamilton's equations.  Verification/refinement only.
PhasePoint flow_step(const LagrangianModel& model, const PhasePoint& state, double t, double dt);

// Integrate over a unit time window with internal steps of size <= dt_max.
PhasePoint flow_time(const LagrangianModel& model, PhasePoint state, double t0, double duration,
                     double dt_max = 1e-3);

// k-fold cover along one coordinate axis, represented in unit coordinates:
// the covered axis is rescaled so one cover turn is k base turns.
LagrangianModel cover_model(const LagrangianModel& model, int axis, int k);

// Class on the cover corresponding to the base class c.
CohomologyClass lift_class(const CohomologyClass& c, int axis, int k);

// Base-torus image of a phase point of a covered model.
PhasePoint project_to_base(const LagrangianModel& covered, const PhasePoint& state);

// Speed bound from the comparison-with-geodesic argument: smallest K whose
// per-time cost exceeds any geodesic action budget over classes |c| <= cmax.
double speed_bound_from_comparison(const LagrangianModel& model, double cmax = 2.0);

}  // namespace wkam
