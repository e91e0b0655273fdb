// Command-line front end: model configuration, computation verbs, and
// plot-ready artifact emission (CSV curves, JSON reports, binary tables).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "wkam/aubry.hpp"
#include "wkam/forcing.hpp"
#include "wkam/io.hpp"
#include "wkam/semiconcave.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string model_name = "pendulum";
    std::vector<std::string> params;
    std::string lagrangian_expr;
    int expr_dim = 1;
    std::string grid_text = "256";
    int substeps = 16;
    double c1 = 0.0, c2 = 0.0;
    bool has_c2 = false;
    std::string c_range;  // lo:hi:step
    double tol_fix = -1.0, tol_aubry = -1.0, tol_orbit = -1.0;
    std::string out_dir = "out";
    std::string cache_dir;
    uint64_t seed = 1;
    std::string cover;  // axis:k
    int n_alpha = 64;
    int barrier_N = 12, barrier_N_prime = 40;
    double p0 = 0.0, p1 = 0.6;
    double scan_lo = -2.0, scan_hi = 2.0, scan_step = 0.01;
};

wkam::LagrangianModel build_model(const RunConfig& cfg) {
    wkam::LagrangianModel model;
    if (!cfg.lagrangian_expr.empty()) {
        model = wkam::make_expression_model(cfg.lagrangian_expr, cfg.expr_dim);
    } else {
        wkam::BuiltinModel spec;
        spec.name = cfg.model_name;
        for (const std::string& kv : cfg.params) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw wkam::WkamError("bad --param, expected k=v");
            spec.parameters[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
        model = wkam::make_builtin(spec);
    }
    if (!cfg.cover.empty()) {
        auto colon = cfg.cover.find(':');
        if (colon == std::string::npos) throw wkam::WkamError("bad --cover, expected axis:k");
        int axis = std::stoi(cfg.cover.substr(0, colon));
        int k = std::stoi(cfg.cover.substr(colon + 1));
        model = wkam::cover_model(model, axis, k);
    }
    return model;
}

wkam::SpatialGrid parse_grid(const std::string& text, int dim) {
    auto x = text.find('x');
    if (x == std::string::npos) {
        int n = std::stoi(text);
        return dim == 2 ? wkam::SpatialGrid(n, n) : wkam::SpatialGrid(n);
    }
    return wkam::SpatialGrid(std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1)));
}

wkam::SpatialGrid grid_for(const RunConfig& cfg, const wkam::LagrangianModel& model) {
    wkam::SpatialGrid g = parse_grid(cfg.grid_text, model.dim);
    if (g.dim != model.dim) throw wkam::WkamError("grid dimension does not match the model");
    return g;
}

wkam::CohomologyClass class_for(const RunConfig& cfg, const wkam::LagrangianModel& model) {
    return model.dim == 2 ? wkam::CohomologyClass(cfg.c1, cfg.has_c2 ? cfg.c2 : 0.0)
                          : wkam::CohomologyClass(cfg.c1);
}

std::vector<double> parse_range(const std::string& text) {
    std::vector<double> vals;
    double lo, hi, step;
    char sep1, sep2;
    std::istringstream in(text);
    if (!(in >> lo >> sep1 >> hi >> sep2 >> step) || sep1 != ':' || sep2 != ':' || step <= 0)
        throw wkam::WkamError("bad range, expected lo:hi:step");
    for (double c = lo; c <= hi + step / 2.0; c += step) vals.push_back(c);
    return vals;
}

std::string canonical_config(const RunConfig& cfg, const std::string& verb) {
    std::ostringstream out;
    out.precision(17);
    out << "verb=" << verb << ";model=" << cfg.model_name << ";expr=" << cfg.lagrangian_expr;
    for (const auto& p : cfg.params) out << ";param=" << p;
    out << ";grid=" << cfg.grid_text << ";M=" << cfg.substeps << ";c=" << cfg.c1 << ","
        << (cfg.has_c2 ? cfg.c2 : 0.0) << ";range=" << cfg.c_range << ";cover=" << cfg.cover
        << ";n_alpha=" << cfg.n_alpha << ";bN=" << cfg.barrier_N << ";bNp=" << cfg.barrier_N_prime
        << ";tol=" << cfg.tol_fix << "," << cfg.tol_aubry << "," << cfg.tol_orbit
        << ";seed=" << cfg.seed << ";p=" << cfg.p0 << "," << cfg.p1 << ";scan=" << cfg.scan_lo
        << "," << cfg.scan_hi << "," << cfg.scan_step;
    return out.str();
}

json tolerance_block(const RunConfig& cfg, const wkam::ActionKernel& kernel) {
    json j;
    j["tol_fix"] = cfg.tol_fix > 0 ? cfg.tol_fix : wkam::default_tol_fix(kernel);
    j["tol_aubry"] = cfg.tol_aubry;
    j["tol_orbit"] = cfg.tol_orbit;
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

struct BarrierBundle {
    wkam::ActionKernel kernel;
    wkam::AlphaEstimate alpha;
    wkam::PeierlsBarrier barrier;
};

BarrierBundle barrier_bundle(const RunConfig& cfg, const wkam::LagrangianModel& model,
                             const std::string& hash) {
    BarrierBundle b;
    wkam::SpatialGrid grid = grid_for(cfg, model);
    wkam::CohomologyClass c = class_for(cfg, model);
    std::string cache_path;
    if (!cfg.cache_dir.empty()) {
        fs::create_directories(cfg.cache_dir);
        cache_path = (fs::path(cfg.cache_dir) / (hash + ".tbl")).string();
    }
    b.kernel = wkam::build_kernel(model, c, grid, cfg.substeps);
    if (!cache_path.empty() && fs::exists(cache_path)) {
        wkam::TableFile file = wkam::read_table(cache_path);
        b.alpha.c = c;
        b.alpha.lower = file.extra.at("alpha_lower");
        b.alpha.upper = file.extra.at("alpha_upper");
        b.alpha.value = file.extra.at("alpha_value");
        b.alpha.n_used = static_cast<int>(file.extra.at("alpha_n"));
        b.barrier.c = c;
        b.barrier.grid = grid;
        b.barrier.table = std::move(file.table);
        b.barrier.N = static_cast<int>(file.extra.at("N"));
        b.barrier.N_prime = static_cast<int>(file.extra.at("N_prime"));
        b.barrier.error_bound = file.extra.at("error_bound");
        b.barrier.alpha = b.alpha;
        return b;
    }
    b.alpha = wkam::alpha(b.kernel, cfg.n_alpha);
    b.barrier = wkam::truncated_barrier(b.kernel, b.alpha, cfg.barrier_N, cfg.barrier_N_prime);
    if (!cache_path.empty()) {
        wkam::TableFile file;
        file.grid = grid;
        file.c = c;
        file.substeps = cfg.substeps;
        file.table = b.barrier.table;
        file.extra = {{"alpha_lower", b.alpha.lower},
                      {"alpha_upper", b.alpha.upper},
                      {"alpha_value", b.alpha.value},
                      {"alpha_n", static_cast<double>(b.alpha.n_used)},
                      {"N", static_cast<double>(b.barrier.N)},
                      {"N_prime", static_cast<double>(b.barrier.N_prime)},
                      {"error_bound", b.barrier.error_bound}};
        wkam::write_table(cache_path, file);
    }
    return b;
}

int verb_alpha(const RunConfig& cfg) {
    wkam::LagrangianModel model = build_model(cfg);
    wkam::SpatialGrid grid = grid_for(cfg, model);
    std::vector<std::vector<double>> rows;
    if (!cfg.c_range.empty()) {
        for (double c : parse_range(cfg.c_range)) {
            try {
                wkam::CohomologyClass cc =
                    model.dim == 2 ? wkam::CohomologyClass(c, 0.0) : wkam::CohomologyClass(c);
                wkam::ActionKernel kernel = wkam::build_kernel(model, cc, grid, cfg.substeps);
                wkam::AlphaEstimate a = wkam::alpha(kernel, cfg.n_alpha);
                rows.push_back({c, a.lower, a.upper, a.value});
            } catch (const wkam::WkamError& err) {
                std::cerr << "c=" << c << ": " << err.what() << "\n";
            }
        }
    }
    fs::create_directories(cfg.out_dir);
    std::string hash = wkam::config_hash(canonical_config(cfg, "alpha"));
    wkam::write_csv((fs::path(cfg.out_dir) / ("alpha_" + hash + ".csv")).string(),
                    {"c", "lower", "upper", "midpoint"}, rows);
    std::cout << "alpha table: " << rows.size() << " rows, config " << hash << "\n";
    return 0;
}

int verb_solve(const RunConfig& cfg) {
    wkam::LagrangianModel model = build_model(cfg);
    std::string hash = wkam::config_hash(canonical_config(cfg, "solve"));
    wkam::SpatialGrid grid = grid_for(cfg, model);
    wkam::CohomologyClass c = class_for(cfg, model);
    wkam::ActionKernel kernel = wkam::build_kernel(model, c, grid, cfg.substeps);
    wkam::AlphaEstimate a = wkam::alpha(kernel, cfg.n_alpha);
    wkam::SolveOptions opts;
    opts.tol_fix = cfg.tol_fix;
    wkam::WeakKamSolution sol =
        wkam::weak_kam_solve(kernel, a, wkam::GridFunction(grid, 0.0), opts);
    wkam::SemiconcavityReport sc = wkam::semiconcavity_constant(sol.u);
    fs::create_directories(cfg.out_dir);
    wkam::write_grid_function((fs::path(cfg.out_dir) / ("solution_" + hash + ".tbl")).string(),
                              sol.u,
                              {{"alpha_value", a.value}, {"residual", sol.residual}});
    json report;
    report["config_hash"] = hash;
    report["model"] = model.name;
    report["c"] = {c[0], c.dim == 2 ? c[1] : 0.0};
    report["alpha"] = {{"lower", a.lower}, {"upper", a.upper}, {"midpoint", a.value},
                       {"n", a.n_used}};
    report["residual"] = sol.residual;
    report["semiconcavity_constant"] = sc.constant;
    report["tolerances"] = tolerance_block(cfg, kernel);
    write_json((fs::path(cfg.out_dir) / ("solve_" + hash + ".json")).string(), report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int verb_barrier(const RunConfig& cfg) {
    wkam::LagrangianModel model = build_model(cfg);
    std::string hash = wkam::config_hash(canonical_config(cfg, "barrier"));
    BarrierBundle b = barrier_bundle(cfg, model, hash);
    fs::create_directories(cfg.out_dir);
    wkam::TableFile file;
    file.grid = b.barrier.grid;
    file.c = b.barrier.c;
    file.substeps = cfg.substeps;
    file.table = b.barrier.table;
    file.extra = {{"error_bound", b.barrier.error_bound},
                  {"N", static_cast<double>(b.barrier.N)},
                  {"N_prime", static_cast<double>(b.barrier.N_prime)}};
    wkam::write_table((fs::path(cfg.out_dir) / ("barrier_" + hash + ".tbl")).string(), file);
    wkam::GridFunction diag = b.barrier.diagonal();
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < diag.size(); ++i) {
        wkam::TorusPoint q = diag.grid.point(i);
        rows.push_back({q[0], diag.grid.dim == 2 ? q[1] : 0.0, diag[i]});
    }
    wkam::write_csv((fs::path(cfg.out_dir) / ("barrier_diag_" + hash + ".csv")).string(),
                    {"q1", "q2", "h_xx"}, rows);
    json report;
    report["config_hash"] = hash;
    report["error_bound"] = b.barrier.error_bound;
    report["alpha"] = {{"lower", b.alpha.lower}, {"upper", b.alpha.upper}};
    write_json((fs::path(cfg.out_dir) / ("barrier_" + hash + ".json")).string(), report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int verb_aubry(const RunConfig& cfg) {
    wkam::LagrangianModel model = build_model(cfg);
    std::string hash = wkam::config_hash(canonical_config(cfg, "aubry"));
    BarrierBundle b = barrier_bundle(cfg, model, hash);
    double tol = cfg.tol_aubry > 0 ? std::max(cfg.tol_aubry, 2.0 * b.barrier.error_bound)
                                   : std::max(3.0 * b.barrier.error_bound, 1e-8);
    wkam::AubrySet aubry = wkam::aubry_set(b.barrier, tol);
    wkam::StaticClassPartition classes = wkam::static_classes(aubry, b.barrier);
    json report;
    report["config_hash"] = hash;
    report["tol_aubry"] = tol;
    report["error_bound"] = b.barrier.error_bound;
    report["cell_count"] = aubry.cells.size();
    report["class_count"] = classes.classes.size();
    json cells = json::array();
    for (size_t i = 0; i < aubry.cells.size(); ++i) {
        wkam::TorusPoint q = b.barrier.grid.point(aubry.cells[i]);
        cells.push_back({{"index", aubry.cells[i]},
                         {"q", {q[0], b.barrier.grid.dim == 2 ? q[1] : 0.0}},
                         {"p", {aubry.momenta[i][0], aubry.momenta[i][1]}}});
    }
    report["cells"] = cells;
    json cls = json::array();
    for (const auto& cl : classes.classes) cls.push_back(cl);
    report["classes"] = cls;
    report["warnings"] = classes.warnings;
    fs::create_directories(cfg.out_dir);
    write_json((fs::path(cfg.out_dir) / ("aubry_" + hash + ".json")).string(), report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int verb_scan(const RunConfig& cfg) {
    wkam::LagrangianModel model = build_model(cfg);
    std::string hash = wkam::config_hash(canonical_config(cfg, "scan"));
    wkam::SpatialGrid grid = grid_for(cfg, model);
    wkam::ForcingParams params;
    params.n_alpha = cfg.n_alpha;
    params.barrier_N = cfg.barrier_N;
    params.barrier_N_prime = cfg.barrier_N_prime;
    params.tol_aubry = cfg.tol_aubry;
    wkam::ForcingClassScan scan = wkam::twist_forcing_scan(model, cfg.scan_lo, cfg.scan_hi,
                                                           cfg.scan_step, grid, cfg.substeps,
                                                           params);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < scan.samples.size(); ++i)
        rows.push_back({scan.samples[i], static_cast<double>(scan.invariant_circle[i])});
    fs::create_directories(cfg.out_dir);
    wkam::write_csv((fs::path(cfg.out_dir) / ("scan_" + hash + ".csv")).string(),
                    {"c", "invariant_circle"}, rows);
    json report;
    report["config_hash"] = hash;
    report["min_circle_abs_c"] = scan.min_circle_abs_c;
    json intervals = json::array();
    for (const auto& [lo, hi] : scan.interval_classes) intervals.push_back({lo, hi});
    report["interval_classes"] = intervals;
    write_json((fs::path(cfg.out_dir) / ("scan_" + hash + ".json")).string(), report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int verb_diffuse(const RunConfig& cfg) {
    wkam::LagrangianModel model = build_model(cfg);
    std::string hash = wkam::config_hash(canonical_config(cfg, "diffuse"));
    wkam::SpatialGrid grid = grid_for(cfg, model);
    wkam::ForcingParams params;
    if (cfg.n_alpha > 64) params.n_alpha = cfg.n_alpha;
    params.barrier_N = cfg.barrier_N;
    params.barrier_N_prime = cfg.barrier_N_prime;
    params.tol_aubry = cfg.tol_aubry;
    params.tol_fix = cfg.tol_fix;
    wkam::DiffusionChain chain =
        wkam::diffusion_chain(model, cfg.p0, cfg.p1, grid, cfg.substeps, params);
    std::vector<std::vector<double>> rows;
    double t0 = 0.0;
    for (const auto& step : chain.steps) {
        for (const auto& s : step.orbit.samples) {
            wkam::Vec2 p{s.velocity[0], s.velocity[1]};  // kinetic momenta at samples
            rows.push_back({t0 + s.time, s.point[0], model.dim == 2 ? s.point[1] : 0.0, p[0],
                            model.dim == 2 ? p[1] : 0.0});
        }
        if (!step.orbit.joint_times.empty()) t0 += step.orbit.joint_times.back();
    }
    fs::create_directories(cfg.out_dir);
    wkam::write_csv((fs::path(cfg.out_dir) / ("orbit_" + hash + ".csv")).string(),
                    {"t", "q1", "q2", "v1", "v2"}, rows);
    json report;
    report["config_hash"] = hash;
    report["complete"] = chain.complete;
    report["failure"] = chain.failure;
    json steps = json::array();
    for (const auto& step : chain.steps) {
        steps.push_back({{"from_c1", step.from_c[0]},
                         {"to_c1", step.to_c[0]},
                         {"mechanism", step.certificate.mechanism},
                         {"on_cover", step.on_cover},
                         {"N", step.certificate.N},
                         {"inclusion_defect", step.certificate.inclusion_defect},
                         {"max_joint_defect", step.orbit.max_joint_defect},
                         {"p1_start", step.p1_start},
                         {"p1_end", step.p1_end}});
    }
    report["steps"] = steps;
    write_json((fs::path(cfg.out_dir) / ("diffuse_" + hash + ".json")).string(), report);
    std::cout << report.dump(2) << "\n";
    return chain.complete ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak KAM / pseudograph toolkit"};
    app.set_config("--config");
    RunConfig cfg;
    std::string verb;
    app.add_option("verb", verb, "alpha | solve | barrier | aubry | scan | diffuse")->required();
    app.add_option("--model", cfg.model_name, "free | pendulum | forced_pendulum | arnold");
    app.add_option("--param", cfg.params, "model parameter k=v (repeatable)");
    app.add_option("--lagrangian", cfg.lagrangian_expr, "expression model for L(t,q,v)");
    app.add_option("--dim", cfg.expr_dim, "dimension of the expression model");
    app.add_option("--grid", cfg.grid_text, "N or N1xN2");
    app.add_option("--substeps", cfg.substeps, "substeps per unit time");
    app.add_option("--c", cfg.c1, "first cohomology component");
    auto* c2opt = app.add_option("--c2", cfg.c2, "second cohomology component");
    app.add_option("--c-range", cfg.c_range, "lo:hi:step for the alpha verb");
    app.add_option("--tol-fix", cfg.tol_fix, "fixed point tolerance");
    app.add_option("--tol-aubry", cfg.tol_aubry, "Aubry detection tolerance");
    app.add_option("--tol-orbit", cfg.tol_orbit, "pseudo-orbit tolerance");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--cache", cfg.cache_dir, "content-addressed cache directory");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--cover", cfg.cover, "axis:k covering");
    app.add_option("--n-alpha", cfg.n_alpha, "iterations for the alpha bracket");
    app.add_option("--barrier-n", cfg.barrier_N, "barrier truncation lower bound");
    app.add_option("--barrier-np", cfg.barrier_N_prime, "barrier truncation upper bound");
    app.add_option("--p0", cfg.p0, "diffusion start momentum");
    app.add_option("--p1", cfg.p1, "diffusion end momentum");
    app.add_option("--scan-lo", cfg.scan_lo, "scan range start");
    app.add_option("--scan-hi", cfg.scan_hi, "scan range end");
    app.add_option("--scan-step", cfg.scan_step, "scan resolution");
    CLI11_PARSE(app, argc, argv);
    cfg.has_c2 = c2opt->count() > 0;

    try {
        if (verb == "alpha") return verb_alpha(cfg);
        if (verb == "solve") return verb_solve(cfg);
        if (verb == "barrier") return verb_barrier(cfg);
        if (verb == "aubry") return verb_aubry(cfg);
        if (verb == "scan") return verb_scan(cfg);
        if (verb == "diffuse") return verb_diffuse(cfg);
        std::cerr << "unknown verb: " << verb << "\n";
        return 1;
    } catch (const wkam::ObstructionError& err) {
        std::cerr << json{{"error", "obstruction"}, {"message", err.what()}}.dump() << "\n";
        return 2;
    } catch (const wkam::NoConnectionError& err) {
        std::cerr << json{{"error", "no_connection"}, {"message", err.what()}}.dump() << "\n";
        return 2;
    } catch (const wkam::WkamError& err) {
        std::cerr << json{{"error", "failure"}, {"message", err.what()}}.dump() << "\n";
        return 1;
    }
}
