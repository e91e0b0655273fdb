#include "wkam/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "wkam/semiconcave.hpp"

namespace wkam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimizer segment across k unit windows under the kernel of class c.
struct Segment {
    CohomologyClass c;
    int from = 0, to = 0, k = 1;
};

std::vector<Segment> trace_segments(const ForcingCertificate& cert, int target_cell,
                                    int* initial_cell) {
    std::vector<Segment> rev;
    int x = target_cell;
    for (auto it = cert.stages.rbegin(); it != cert.stages.rend(); ++it) {
        const ForcingStage& stage = *it;
        switch (stage.kind) {
            case StageKind::Burn:
                for (int step = static_cast<int>(stage.step_sources.size()) - 1; step >= 0;
                     --step) {
                    int pred = stage.step_sources[static_cast<size_t>(step)][static_cast<size_t>(x)];
                    if (pred < 0) throw WkamError("broken attainment record in burn stage");
                    rev.push_back({stage.c, pred, x, 1});
                    x = pred;
                }
                break;
            case StageKind::Restricted: {
                const Attainment& att = stage.attainments[static_cast<size_t>(x)];
                if (att.source < 0) throw WkamError("broken attainment record in restricted stage");
                rev.push_back({stage.c, att.source, x, att.k});
                x = att.source;
                break;
            }
            case StageKind::Init:
            case StageKind::Modify:
                break;
        }
    }
    std::reverse(rev.begin(), rev.end());
    if (initial_cell) *initial_cell = x;
    return rev;
}

PhasePoint joint_from_sample(const LagrangianModel& model, const MinimizerPath::Sample& sample,
                             double dt, bool incoming) {
    PhasePoint p;
    double t_mid = incoming ? sample.time - 0.5 * dt : sample.time + 0.5 * dt;
    TorusPoint mid = sample.point;
    double sign = incoming ? -0.5 : 0.5;
    for (int i = 0; i < model.dim; ++i)
        mid.coords[i] = wrap01(mid.coords[i] + sign * sample.velocity[i] * dt);
    p.position = sample.point;
    p.momentum = model.legendre_v(t_mid, mid, sample.velocity);
    return p;
}

ConnectingOrbit assemble_orbit(ForcingContext& ctx, const std::vector<Segment>& segments) {
    ConnectingOrbit orbit;
    double t0 = 0.0;
    for (size_t s = 0; s < segments.size(); ++s) {
        const Segment& seg = segments[s];
        const ActionKernel& kernel = ctx.kernel(seg.c);
        MinimizerPath path = seg.k == 1 ? backtrack_minimizer(kernel, seg.from, seg.to)
                                        : backtrack_chain(kernel, seg.from, seg.to, seg.k);
        size_t keep = path.samples.size() - (s + 1 < segments.size() ? 1 : 0);
        for (size_t i = 0; i < keep; ++i) {
            MinimizerPath::Sample sample = path.samples[i];
            sample.time += t0;
            orbit.samples.push_back(sample);
        }
        t0 += seg.k;
    }
    if (orbit.samples.empty()) return orbit;
    const LagrangianModel& model = ctx.model();
    const double dt = 1.0 / ctx.substeps();
    for (size_t i = 0; i < orbit.samples.size(); ++i) {
        double t = orbit.samples[i].time;
        if (std::abs(t - std::round(t)) > 1e-9) continue;
        bool final_sample = i + 1 == orbit.samples.size();
        const MinimizerPath::Sample& src =
            final_sample && i > 0 ? orbit.samples[i - 1] : orbit.samples[i];
        if (final_sample && i > 0) {
            MinimizerPath::Sample incoming = orbit.samples[i];
            incoming.velocity = src.velocity;
            orbit.joints.push_back(joint_from_sample(model, incoming, dt, true));
        } else {
            orbit.joints.push_back(joint_from_sample(model, orbit.samples[i], dt, false));
        }
        orbit.joint_times.push_back(std::round(t));
    }
    for (size_t j = 0; j + 1 < orbit.joints.size(); ++j) {
        if (orbit.joint_times[j + 1] - orbit.joint_times[j] != 1.0) continue;
        double defect;
        try {
            PhasePoint image =
                flow_time(model, orbit.joints[j], orbit.joint_times[j], 1.0, 2e-3);
            defect = phase_dist(image, orbit.joints[j + 1]);
        } catch (const IntegrationEscapeError&) {
            defect = kInf;
        }
        orbit.max_joint_defect = std::max(orbit.max_joint_defect, defect);
    }
    return orbit;
}

CellSet inflate_cells(const SpatialGrid& grid, const std::vector<int>& cells, int margin) {
    CellSet set(grid);
    for (int cell : cells) set.add_ball(cell, margin);
    return set;
}

ForcingStage burn_stage(const ActionKernel& kernel, const AlphaEstimate& alpha,
                        const Pseudograph& g, int steps) {
    ForcingStage stage;
    stage.kind = StageKind::Burn;
    stage.c = kernel.cohomology;
    stage.steps = steps;
    GridFunction v = g.u;
    for (int s = 0; s < steps; ++s) {
        std::vector<int> am;
        v = lax_oleinik_argmin(kernel, v, am);
        v += alpha.value;
        stage.step_sources.push_back(std::move(am));
    }
    stage.graph.c = kernel.cohomology;
    stage.graph.u = std::move(v);
    return stage;
}

}  // namespace

ForcingContext::ForcingContext(const LagrangianModel& model, const SpatialGrid& grid,
                               int substeps, ForcingParams params)
    : model_(model), grid_(grid), substeps_(substeps), params_(params) {}

std::string ForcingContext::key(const CohomologyClass& c) const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f,%.12f", c[0], c.dim == 2 ? c[1] : 0.0);
    return buf;
}

const ActionKernel& ForcingContext::kernel(const CohomologyClass& c) {
    auto it = kernels_.find(key(c));
    if (it == kernels_.end()) {
        auto k = std::make_shared<ActionKernel>(build_kernel(model_, c, grid_, substeps_));
        it = kernels_.emplace(key(c), std::move(k)).first;
    }
    return *it->second;
}

const AlphaEstimate& ForcingContext::alpha_of(const CohomologyClass& c) {
    auto it = alphas_.find(key(c));
    if (it == alphas_.end())
        it = alphas_.emplace(key(c), alpha(kernel(c), params_.n_alpha)).first;
    return it->second;
}

const PeierlsBarrier& ForcingContext::barrier_of(const CohomologyClass& c) {
    auto it = barriers_.find(key(c));
    if (it == barriers_.end()) {
        auto b = std::make_shared<PeierlsBarrier>(truncated_barrier(
            kernel(c), alpha_of(c), params_.barrier_N, params_.barrier_N_prime));
        it = barriers_.emplace(key(c), std::move(b)).first;
    }
    return *it->second;
}

double ForcingContext::tol_aubry_of(const CohomologyClass& c) {
    const PeierlsBarrier& b = barrier_of(c);
    if (params_.tol_aubry > 0.0) return std::max(params_.tol_aubry, 2.0 * b.error_bound);
    return std::max(3.0 * b.error_bound, 1e-8);
}

const AubrySet& ForcingContext::aubry_of(const CohomologyClass& c) {
    auto it = aubry_.find(key(c));
    if (it == aubry_.end())
        it = aubry_.emplace(key(c), aubry_set(barrier_of(c), tol_aubry_of(c))).first;
    return it->second;
}

const WeakKamSolution& ForcingContext::solution_of(const CohomologyClass& c) {
    auto it = solutions_.find(key(c));
    if (it == solutions_.end()) {
        SolveOptions opts;
        opts.tol_fix = params_.tol_fix;
        GridFunction seed(grid_, 0.0);
        it = solutions_.emplace(key(c), weak_kam_solve(kernel(c), alpha_of(c), seed, opts)).first;
    }
    return it->second;
}

const GridFunction& ForcingContext::dual_of(const CohomologyClass& c) {
    auto it = duals_.find(key(c));
    if (it == duals_.end()) {
        ConjugatePair pair = conjugate_pair(kernel(c), alpha_of(c), solution_of(c),
                                            params_.tol_fix);
        it = duals_.emplace(key(c), pair.dual).first;
    }
    return it->second;
}

double ForcingContext::tol_fix() const {
    if (params_.tol_fix > 0.0) return params_.tol_fix;
    return 5.0 * (grid_.max_spacing() + 1.0 / substeps_) * model_.scale;
}

double ForcingContext::tol_orbit() const {
    return params_.tol_orbit_factor * (grid_.max_spacing() + 1.0 / substeps_);
}

double ForcingContext::step_cap() const {
    return params_.step_cap_factor * (grid_.max_spacing() + 1.0 / substeps_);
}

std::vector<int> r_space_approx(const SpatialGrid& grid,
                                const std::vector<std::vector<int>>& invariant_cells) {
    std::vector<int> admissible;
    for (int axis = 0; axis < grid.dim; ++axis) {
        std::vector<char> covered(static_cast<size_t>(grid.sizes[axis]), 0);
        for (const auto& cells : invariant_cells)
            for (int cell : cells) covered[static_cast<size_t>(grid.coords(cell)[axis])] = 1;
        // A usable slab needs three consecutive free values (bump support
        // plus one spare cell per side).
        int best = 0, run = 0;
        for (int pass = 0; pass < 2; ++pass) {  // doubled scan covers wrapping runs
            for (int i = 0; i < grid.sizes[axis]; ++i) {
                run = covered[static_cast<size_t>(i)] ? 0 : run + 1;
                best = std::max(best, run);
            }
        }
        if (best >= 3) admissible.push_back(axis);
    }
    return admissible;
}

ForcingCertificate mather_step(ForcingContext& ctx, const Pseudograph& g,
                               const CohomologyClass& target_c) {
    ForcingCertificate cert;
    cert.from_c = g.c;
    cert.to_c = target_c;
    CohomologyClass dc = target_c - g.c;
    const ActionKernel& k0 = ctx.kernel(g.c);
    const AlphaEstimate& a0 = ctx.alpha_of(g.c);

    ForcingStage init;
    init.kind = StageKind::Init;
    init.c = g.c;
    init.graph = g;
    cert.stages.push_back(init);

    if (dc.norm() == 0.0) {
        cert.stages.push_back(burn_stage(k0, a0, g, 1));
        cert.N = 1;
        cert.mechanism = "trivial";
        return cert;
    }
    if (dc.norm() > ctx.step_cap())
        throw WkamError("cohomology step " + std::to_string(dc.norm()) + " exceeds cap " +
                        std::to_string(ctx.step_cap()));

    cert.stages.push_back(burn_stage(k0, a0, g, ctx.params().n_burn));

    const AubrySet& aubry = ctx.aubry_of(g.c);
    CellSet set = inflate_cells(ctx.grid(), aubry.cells, ctx.params().aubry_margin);

    ForcingStage modify;
    modify.kind = StageKind::Modify;
    modify.c = target_c;
    modify.graph = modify_cohomology(cert.stages.back().graph, target_c, set);
    cert.stages.push_back(modify);

    const ActionKernel& kt = ctx.kernel(target_c);
    const AlphaEstimate& at = ctx.alpha_of(target_c);
    RestrictedEvolution re = evolve_restricted(cert.stages.back().graph, kt, at, set,
                                               ctx.params().restrict_N,
                                               ctx.params().restrict_N_prime);
    ForcingStage restricted;
    restricted.kind = StageKind::Restricted;
    restricted.c = target_c;
    restricted.graph = re.graph;
    restricted.attainments = std::move(re.attainments);
    restricted.source_set = set;
    restricted.steps = ctx.params().restrict_N_prime;
    cert.stages.push_back(std::move(restricted));

    cert.stages.push_back(burn_stage(kt, at, cert.stages.back().graph, ctx.params().n_settle));
    cert.N = ctx.params().n_burn + ctx.params().restrict_N_prime + ctx.params().n_settle;
    cert.mechanism = "mather";
    cert.inclusion_defect = verify_certificate(ctx, cert, 1);
    return cert;
}

ForcingCertificate arnold_step(ForcingContext& ctx, const CohomologyClass& c,
                               const CohomologyClass& target_c) {
    const ActionKernel& k0 = ctx.kernel(c);
    const PeierlsBarrier& barrier = ctx.barrier_of(c);
    const AubrySet& aubry = ctx.aubry_of(c);
    StaticClassPartition classes = static_classes(aubry, barrier);
    if (classes.classes.size() < 2)
        throw WkamError("arnold step needs at least two static classes; "
                        "run on a covered model when the base has one");
    std::sort(classes.classes.begin(), classes.classes.end());
    const std::vector<int>& s0 = classes.classes[0];
    const std::vector<int>& s1 = classes.classes[1];
    double tol_mane = ctx.tol_mane_of(c);
    auto hets = heteroclinic_points(barrier, s0, s1, tol_mane);
    if (hets.empty())
        throw NoConnectionError("no heteroclinic point within tol_mane = " +
                                std::to_string(tol_mane));

    int a0 = s0[0];
    for (int cell : s0)
        if (barrier.at(cell, cell) < barrier.at(a0, a0)) a0 = cell;
    WeakKamSolution elem = elementary_solution(k0, barrier, a0, ctx.params().tol_fix);

    ForcingCertificate cert;
    cert.from_c = c;
    cert.to_c = target_c;
    ForcingStage init;
    init.kind = StageKind::Init;
    init.c = c;
    init.graph = Pseudograph{c, elem.u, false};
    cert.stages.push_back(init);

    // Heteroclinic box off the Aubry set, shrinking until disjoint.
    std::vector<char> in_aubry(static_cast<size_t>(ctx.grid().count()), 0);
    for (int cell : aubry.cells) in_aubry[static_cast<size_t>(cell)] = 1;
    CellSet het_set(ctx.grid());
    bool placed = false;
    for (int margin = ctx.params().het_margin; margin >= 0 && !placed; --margin) {
        CellSet candidate(ctx.grid());
        candidate.add_ball(hets[0].first, margin);
        bool clean = true;
        for (int cell : candidate.cells())
            if (in_aubry[static_cast<size_t>(cell)]) clean = false;
        if (clean) {
            het_set = candidate;
            placed = true;
        }
    }
    if (!placed) throw AcyclicityError("heteroclinic box cannot avoid the Aubry set");

    ForcingStage modify;
    modify.kind = StageKind::Modify;
    modify.c = target_c;
    modify.graph = modify_cohomology(cert.stages.back().graph, target_c, het_set);
    cert.stages.push_back(modify);

    const ActionKernel& kt = ctx.kernel(target_c);
    const AlphaEstimate& at = ctx.alpha_of(target_c);
    RestrictedEvolution jump = evolve_restricted(cert.stages.back().graph, kt, at, het_set,
                                                 ctx.params().restrict_N,
                                                 ctx.params().restrict_N_prime);
    ForcingStage through;
    through.kind = StageKind::Restricted;
    through.c = target_c;
    through.graph = jump.graph;
    through.attainments = std::move(jump.attainments);
    through.source_set = het_set;
    through.steps = ctx.params().restrict_N_prime;
    cert.stages.push_back(std::move(through));

    CellSet landing = inflate_cells(ctx.grid(), s1, ctx.params().aubry_margin);
    RestrictedEvolution close = evolve_restricted(cert.stages.back().graph, kt, at, landing,
                                                  ctx.params().restrict_N,
                                                  ctx.params().restrict_N_prime);
    ForcingStage settle;
    settle.kind = StageKind::Restricted;
    settle.c = target_c;
    settle.graph = close.graph;
    settle.attainments = std::move(close.attainments);
    settle.source_set = landing;
    settle.steps = ctx.params().restrict_N_prime;
    cert.stages.push_back(std::move(settle));

    cert.stages.push_back(burn_stage(kt, at, cert.stages.back().graph, ctx.params().n_settle));
    cert.N = 2 * ctx.params().restrict_N_prime + ctx.params().n_settle;
    cert.mechanism = "arnold";
    cert.inclusion_defect = verify_certificate(ctx, cert, 1);
    return cert;
}

ForcingClassScan twist_forcing_scan(const LagrangianModel& model, double c_lo, double c_hi,
                                    double resolution, const SpatialGrid& grid, int substeps,
                                    ForcingParams params) {
    if (model.dim != 1) throw WkamError("twist scan requires one degree of freedom");
    ForcingClassScan scan;
    scan.min_circle_abs_c = kInf;
    for (double c = c_lo; c <= c_hi + resolution / 2.0; c += resolution)
        scan.samples.push_back(c);
    scan.invariant_circle.assign(scan.samples.size(), 0);
    for (size_t i = 0; i < scan.samples.size(); ++i) {
        CohomologyClass c(scan.samples[i]);
        ActionKernel kernel = build_kernel(model, c, grid, substeps);
        AlphaEstimate a = alpha(kernel, params.n_alpha);
        PeierlsBarrier barrier =
            truncated_barrier(kernel, a, params.barrier_N, params.barrier_N_prime);
        GridFunction diag = barrier.diagonal();
        // Min-normalized diagonal cancels the uniform discretization bias;
        // a circle leaves the whole diagonal uniformly small.
        double spread = diag.span();
        double tol = std::max(3.0 * barrier.error_bound,
                              params.tol_aubry > 0.0 ? params.tol_aubry : 0.0);
        if (spread <= tol) {
            scan.invariant_circle[i] = 1;
            scan.min_circle_abs_c = std::min(scan.min_circle_abs_c, std::abs(scan.samples[i]));
        }
    }
    size_t i = 0;
    while (i < scan.samples.size()) {
        if (scan.invariant_circle[i]) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j + 1 < scan.samples.size() && !scan.invariant_circle[j + 1]) ++j;
        scan.interval_classes.emplace_back(scan.samples[i], scan.samples[j]);
        i = j + 1;
    }
    return scan;
}

double verify_certificate(ForcingContext& ctx, const ForcingCertificate& cert,
                          int sample_targets) {
    const GridFunction& final_u = cert.stages.back().graph.u;
    std::vector<int> order(static_cast<size_t>(final_u.size()));
    for (int i = 0; i < final_u.size(); ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return final_u[a] < final_u[b]; });
    double worst = 0.0;
    for (int t = 0; t < sample_targets && t < final_u.size(); ++t) {
        auto segments = trace_segments(cert, order[static_cast<size_t>(t)], nullptr);
        ConnectingOrbit orbit = assemble_orbit(ctx, segments);
        worst = std::max(worst, orbit.max_joint_defect);
    }
    return worst;
}

ConnectingOrbit connecting_orbit(ForcingContext& ctx, const ForcingCertificate& cert,
                                 const GridFunction& dual_target) {
    Pseudograph dual_graph;
    dual_graph.c = cert.to_c;
    dual_graph.u = dual_target;
    dual_graph.dual = true;
    WedgeSet w = wedge(cert.stages.back().graph, dual_graph, ctx.tol_fix());
    if (w.cells.empty()) throw WkamError("empty wedge in connecting orbit");
    int target = w.cells[0];
    int initial = -1;
    auto segments = trace_segments(cert, target, &initial);
    ConnectingOrbit orbit = assemble_orbit(ctx, segments);
    if (!orbit.joints.empty()) {
        Vec2 grad0 = grid_gradient(cert.stages.front().graph.u, initial);
        Vec2 gradT = grid_gradient(dual_target, target);
        double d0 = 0.0, dT = 0.0;
        for (int i = 0; i < ctx.model().dim; ++i) {
            double e0 = orbit.joints.front().momentum[i] - (cert.from_c[i] + grad0[i]);
            double eT = orbit.joints.back().momentum[i] - (cert.to_c[i] + gradT[i]);
            d0 += e0 * e0;
            dT += eT * eT;
        }
        orbit.boundary_defect_start = std::sqrt(d0);
        orbit.boundary_defect_end = std::sqrt(dT);
    }
    return orbit;
}

ConfinementReport confinement_check(ForcingContext& ctx, const CohomologyClass& c) {
    if (ctx.model().dim != 2) throw WkamError("confinement check needs two degrees of freedom");
    if (c.dim != 2 || c[1] != 0.0)
        throw WkamError("confinement check expects a class with zero second component");
    const PeierlsBarrier& barrier = ctx.barrier_of(c);
    const AubrySet& aubry = ctx.aubry_of(c);
    GridFunction defects = mane_defects(barrier, aubry);
    double tol_mane = ctx.tol_mane_of(c);
    ConfinementReport report;
    for (int x = 0; x < defects.size(); ++x) {
        if (defects[x] > tol_mane) continue;
        report.mane_cells.push_back(x);
        TorusPoint q = ctx.grid().point(x);
        report.max_q2_dist = std::max(report.max_q2_dist, std::abs(wrap_half(q[1])));
        // Momentum of the elementary solution whose barrier leg attains the defect.
        int best_a = aubry.cells[0];
        double best = kInf;
        for (int a : aubry.cells) {
            for (int b : aubry.cells) {
                double v = barrier.at(a, x) + barrier.at(x, b) - barrier.at(a, b);
                if (v < best) {
                    best = v;
                    best_a = a;
                }
            }
        }
        GridFunction row = barrier.row(best_a);
        Vec2 grad = grid_gradient(row, x);
        report.max_p2 = std::max(report.max_p2, std::abs(c[1] + grad[1]));
    }
    return report;
}

DiffusionChain diffusion_chain(const LagrangianModel& model, double P, double P_prime,
                               const SpatialGrid& grid, int substeps, ForcingParams params) {
    DiffusionChain chain;
    ForcingContext base(model, grid, substeps, params);
    const int cover_k = 2;
    const int cover_axis = model.dim == 2 ? 1 : 0;
    LagrangianModel covered = cover_model(model, cover_axis, cover_k);
    SpatialGrid cover_grid = model.dim == 2
                                 ? SpatialGrid(grid.sizes[0], cover_k * grid.sizes[1])
                                 : SpatialGrid(cover_k * grid.sizes[0]);
    ForcingContext cover(covered, cover_grid, substeps, params);

    auto make_class = [&](double c1) {
        return model.dim == 2 ? CohomologyClass(c1, 0.0) : CohomologyClass(c1);
    };
    const double sign = P_prime >= P ? 1.0 : -1.0;
    double c1 = P;
    chain.classes.push_back(make_class(c1));
    if (P == P_prime) {
        chain.complete = true;
        return chain;
    }
    const int max_steps = 64;
    try {
        for (int step = 0; step < max_steps; ++step) {
            if (sign * (P_prime - c1) <= 1e-12) break;
            CohomologyClass c = make_class(c1);
            const AubrySet& aubry = base.aubry_of(c);
            auto admissible = r_space_approx(grid, {aubry.cells});
            bool mather_ok =
                std::find(admissible.begin(), admissible.end(), 0) != admissible.end();
            DiffusionStep ds;
            ds.from_c = c;
            if (mather_ok) {
                double size = std::min(params.mather_step_size, 0.8 * base.step_cap());
                double next = c1 + sign * std::min(size, sign * (P_prime - c1));
                ds.to_c = make_class(next);
                Pseudograph g{c, base.solution_of(c).u, false};
                ds.certificate = mather_step(base, g, ds.to_c);
                ds.orbit = connecting_orbit(base, ds.certificate, base.dual_of(ds.to_c));
                ds.on_cover = false;
                c1 = next;
            } else {
                double size = std::min(params.arnold_step_size, 0.8 * cover.step_cap());
                double next = c1 + sign * std::min(size, sign * (P_prime - c1));
                ds.to_c = make_class(next);
                CohomologyClass cc = lift_class(c, cover_axis, cover_k);
                CohomologyClass ct = lift_class(ds.to_c, cover_axis, cover_k);
                ds.certificate = arnold_step(cover, cc, ct);
                ds.orbit = connecting_orbit(cover, ds.certificate, cover.dual_of(ct));
                // Report the orbit on the base torus.
                for (auto& joint : ds.orbit.joints) {
                    PhasePoint base_pt = project_to_base(covered, joint);
                    joint = base_pt;
                }
                for (auto& sample : ds.orbit.samples) {
                    sample.point.coords[cover_axis] =
                        wrap01(sample.point.coords[cover_axis] * cover_k);
                    sample.velocity[cover_axis] *= cover_k;
                }
                ds.on_cover = true;
                c1 = next;
            }
            if (!ds.orbit.joints.empty()) {
                ds.p1_start = ds.orbit.joints.front().momentum[0];
                ds.p1_end = ds.orbit.joints.back().momentum[0];
                double best = kInf;
                const AubrySet& from_aubry = base.aubry_of(ds.from_c);
                for (int cell : from_aubry.cells)
                    best = std::min(best, torus_dist(ds.orbit.joints.front().position,
                                                     grid.point(cell)));
                ds.aubry_visit_dist = best;
            }
            chain.steps.push_back(std::move(ds));
            chain.classes.push_back(make_class(c1));
        }
        chain.complete = sign * (P_prime - c1) <= 1e-12;
        if (!chain.complete) chain.failure = "step budget exhausted";
    } catch (const WkamError& err) {
        chain.complete = false;
        chain.failure = err.what();
    }
    return chain;
}

}  // namespace wkam
