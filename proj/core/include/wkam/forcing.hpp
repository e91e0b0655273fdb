#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wkam/aubry.hpp"
#include "wkam/pseudograph.hpp"

namespace wkam {

struct ForcingParams {
    int n_alpha = 4096;        // iterations for the alpha bracket
    int n_burn = 48;           // forward evolutions toward the fixed set
    int n_settle = 16;         // evolutions after a cohomology change
    int barrier_N = 12;
    int barrier_N_prime = 40;
    int restrict_N = 8;
    int restrict_N_prime = 32;
    int aubry_margin = 2;      // box inflation (in cells) around detected cells
    int het_margin = 2;        // box half-width around heteroclinic points
    double tol_aubry = -1.0;   // <= 0: derived from the barrier error bound
    double tol_fix = -1.0;     // <= 0: default_tol_fix of the kernel
    double step_cap_factor = 10.0;   // |dc| <= factor * (h + 1/M) per step
    double tol_orbit_factor = 10.0;  // pseudo-orbit budget = factor * (h + 1/M)
    double mather_step_size = 0.15;
    double arnold_step_size = 0.1;
};

// Shared per-model computation cache: kernels, alpha brackets, barriers,
// Aubry sets and solutions keyed by cohomology class.
class ForcingContext {
public:
    ForcingContext(const LagrangianModel& model, const SpatialGrid& grid, int substeps,
                   ForcingParams params = {});

    const LagrangianModel& model() const { return model_; }
    const SpatialGrid& grid() const { return grid_; }
    int substeps() const { return substeps_; }
    const ForcingParams& params() const { return params_; }
    ForcingParams& params() { return params_; }

    const ActionKernel& kernel(const CohomologyClass& c);
    const AlphaEstimate& alpha_of(const CohomologyClass& c);
    const PeierlsBarrier& barrier_of(const CohomologyClass& c);
    const AubrySet& aubry_of(const CohomologyClass& c);
    const WeakKamSolution& solution_of(const CohomologyClass& c);
    const GridFunction& dual_of(const CohomologyClass& c);

    double tol_aubry_of(const CohomologyClass& c);
    double tol_mane_of(const CohomologyClass& c) { return 2.0 * tol_aubry_of(c); }
    double tol_fix() const;
    double tol_orbit() const;
    double step_cap() const;

private:
    std::string key(const CohomologyClass& c) const;

    LagrangianModel model_;
    SpatialGrid grid_;
    int substeps_;
    ForcingParams params_;
    std::map<std::string, std::shared_ptr<ActionKernel>> kernels_;
    std::map<std::string, AlphaEstimate> alphas_;
    std::map<std::string, std::shared_ptr<PeierlsBarrier>> barriers_;
    std::map<std::string, AubrySet> aubry_;
    std::map<std::string, WeakKamSolution> solutions_;
    std::map<std::string, GridFunction> duals_;
};

enum class StageKind { Init, Burn, Modify, Restricted };

struct ForcingStage {
    StageKind kind = StageKind::Init;
    CohomologyClass c;        // kernel class acting during the stage
    Pseudograph graph;        // state after the stage
    std::vector<std::vector<int>> step_sources;  // Burn: per-step argmin maps
    std::vector<Attainment> attainments;         // Restricted: per-target records
    CellSet source_set;                          // Restricted: source cells
    int steps = 0;                               // unit-time steps consumed
};

struct ForcingCertificate {
    CohomologyClass from_c, to_c;
    int N = 0;  // total unit-time step bound
    std::vector<ForcingStage> stages;
    double inclusion_defect = 0.0;  // flow-shadowing defect from verification
    std::string mechanism;          // "mather" | "arnold" | "trivial"
};

struct ConnectingOrbit {
    std::vector<MinimizerPath::Sample> samples;  // substep resolution
    std::vector<PhasePoint> joints;              // integer-time phase points
    std::vector<double> joint_times;
    double max_joint_defect = 0.0;       // time-1 flow shadowing at joints
    double boundary_defect_start = 0.0;  // |p(0) - (c + du)| on the initial graph
    double boundary_defect_end = 0.0;    // |p(T) - (c' + du')| on the dual graph
};

struct ForcingClassScan {
    std::vector<double> samples;
    std::vector<char> invariant_circle;  // c in G
    std::vector<std::pair<double, double>> interval_classes;
    double min_circle_abs_c = 0.0;  // smallest |c| flagged as a circle
};

struct ConfinementReport {
    double max_p2 = 0.0;
    double max_q2_dist = 0.0;
    std::vector<int> mane_cells;
};

struct DiffusionStep {
    CohomologyClass from_c, to_c;
    ForcingCertificate certificate;
    ConnectingOrbit orbit;
    double p1_start = 0.0, p1_end = 0.0;
    double aubry_visit_dist = 0.0;  // start joint distance to the Aubry set of from_c
    bool on_cover = false;
};

struct DiffusionChain {
    std::vector<CohomologyClass> classes;
    std::vector<DiffusionStep> steps;
    bool complete = false;
    std::string failure;
};

// Coordinate directions with a transversal slab free of every listed cell set.
std::vector<int> r_space_approx(const SpatialGrid& grid,
                                const std::vector<std::vector<int>>& invariant_cells);

ForcingCertificate mather_step(ForcingContext& ctx, const Pseudograph& g,
                               const CohomologyClass& target_c);

// Heteroclinic jump between two static classes (covered model when the base
// has one class).  The context must expose at least two classes at c.
ForcingCertificate arnold_step(ForcingContext& ctx, const CohomologyClass& c,
                               const CohomologyClass& target_c);

ForcingClassScan twist_forcing_scan(const LagrangianModel& model, double c_lo, double c_hi,
                                    double resolution, const SpatialGrid& grid, int substeps,
                                    ForcingParams params = {});

ConnectingOrbit connecting_orbit(ForcingContext& ctx, const ForcingCertificate& cert,
                                 const GridFunction& dual_target);

// Replays traced minimizers of up to sample_targets final cells against the
// Hamiltonian flow; returns the worst per-unit-time defect.
double verify_certificate(ForcingContext& ctx, const ForcingCertificate& cert,
                          int sample_targets = 3);

ConfinementReport confinement_check(ForcingContext& ctx, const CohomologyClass& c);

DiffusionChain diffusion_chain(const LagrangianModel& model, double P, double P_prime,
                               const SpatialGrid& grid, int substeps, ForcingParams params = {});

}  // namespace wkam
