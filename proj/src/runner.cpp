#include "cisim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>
#include <omp.h>

#include "cisim/analysis.hpp"
#include "cisim/io.hpp"

namespace cisim {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json config_json(const ExperimentConfig& cfg) {
    boost::property_tree::ptree tree;
    std::istringstream in(emit_config(cfg));
    boost::property_tree::read_ini(in, tree);
    json out = json::object();
    for (const auto& [section, body] : tree)
        for (const auto& [key, value] : body) out[section][key] = value.data();
    return out;
}

// Collects artifacts of one run and writes the manifest.
class RunContext {
public:
    RunContext(const ExperimentConfig& cfg, std::string command) : cfg_(cfg), command_(std::move(command)) {
        dir_ = cfg.output.dir;
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) fail(ErrorCode::IoError, "cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void record(const std::string& name) { files_.push_back(name); }

    void grid(const std::string& stem, const SpatialGrid& g) {
        write_grid_csv(path(stem + ".csv"), g);
        record(stem + ".csv");
        write_grid_sidecar(path(stem + ".json"), g);
        record(stem + ".json");
        if (cfg_.output.pgm) pgm(stem, g.values);
    }

    void pgm(const std::string& stem, const Eigen::MatrixXd& values) {
        const PgmScale s = write_pgm(path(stem + ".pgm"), values);
        record(stem + ".pgm");
        scales_[stem + ".pgm"] = {{"min", s.min}, {"max", s.max}};
    }

    void samples(const std::string& stem, const FourierSamples& s) {
        write_samples_csv(path(stem + "_cos.csv"), s, SamplePart::cos_part);
        record(stem + "_cos.csv");
        write_samples_csv(path(stem + "_sin.csv"), s, SamplePart::sin_part);
        record(stem + "_sin.csv");
        write_samples_sidecar(path(stem + ".json"), s);
        record(stem + ".json");
    }

    void curve(const std::string& name, const RatioCurve& c) {
        write_ratio_curve_csv(path(name), c);
        record(name);
    }

    void table(const std::string& name, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
        write_table_csv(path(name), header, columns);
        record(name);
    }

    void json_file(const std::string& name, const json& j) {
        write_text(path(name), j.dump(2) + "\n");
        record(name);
    }

    json& summary() { return summary_; }

    RunReport finish() {
        json artifacts = json::object();
        for (const auto& f : files_) artifacts[f] = sha256_file(path(f));
        json manifest{{"command", command_},
                      {"seed", cfg_.run.seed},
                      {"config", config_json(cfg_)},
                      {"artifacts", artifacts},
                      {"pgm_scales", scales_},
                      {"summary", summary_}};
        write_text(path("manifest.json"), manifest.dump(2) + "\n");
        RunReport r{dir_.string(), files_, summary_.dump()};
        r.artifacts.push_back("manifest.json");
        return r;
    }

private:
    const ExperimentConfig& cfg_;
    std::string command_;
    fs::path dir_;
    std::vector<std::string> files_;
    json scales_ = json::object();
    json summary_ = json::object();
};

double mean_expectation(const SpinBosonState& s, const OperatorMatrix& op) { return expectation(s, op).real(); }

SpinBosonState exact_final(const ExperimentConfig& cfg, double tau, int substeps, RampShape shape) {
    ExperimentConfig c = cfg;
    c.schedule.tau_us = tau;
    c.schedule.substeps = substeps;
    c.schedule.ramp = shape;
    c.schedule.scheme = TrotterScheme::exact_simultaneous;
    c.run.samples = 0;
    return ideal_evolution(c).final_state;
}

struct EvolveOutcome {
    DensityMatrix motional;
    std::vector<double> times;
    std::vector<double> j_series;
    json diagnostics;
};

EvolveOutcome evolve_configured(const ExperimentConfig& cfg) {
    const ModeSpace space = cfg.mode_space();
    const OperatorMatrix j = conserved_j(space);
    const OperatorMatrix x = position(space, Mode::x);
    const OperatorMatrix y = position(space, Mode::y);
    if (!cfg.noise.enabled) {
        const EvolutionResult r = ideal_evolution(cfg);
        EvolveOutcome out{partial_trace_spin(r.final_state), {}, r.diagnostics.j_series, json::object()};
        for (const auto& s : r.trajectory) out.times.push_back(s.time);
        double norm_drift = 0.0;
        for (double d : r.diagnostics.norm_drift) norm_drift = std::max(norm_drift, d);
        out.diagnostics = {{"mode", "unitary"},
                           {"max_norm_drift", norm_drift},
                           {"max_edge_population", r.diagnostics.max_edge_population},
                           {"final_x", mean_expectation(r.final_state, x)},
                           {"final_y", mean_expectation(r.final_state, y)},
                           {"final_j", mean_expectation(r.final_state, j)}};
        return out;
    }
    const DensityMatrix rho0 = DensityMatrix::from_pure(SpinBosonState::plus_vacuum(space));
    const OpenEvolutionResult r =
        lindblad_evolve(rho0, cfg.model_params(), cfg.ramp_schedule(), cfg.lindblad_spec(), cfg.evolution_options());
    EvolveOutcome out{partial_trace_spin(r.final_state), {}, {}, json::object()};
    for (const auto& s : r.trajectory) {
        out.times.push_back(s.time);
        out.j_series.push_back(expectation(s.state, j).real());
    }
    out.diagnostics = {{"mode", "lindblad"},
                       {"max_trace_drift", r.max_trace_drift},
                       {"min_sampled_eigenvalue", r.min_sampled_eigenvalue},
                       {"max_edge_population", r.max_edge_population},
                       {"final_x", expectation(r.final_state, x).real()},
                       {"final_y", expectation(r.final_state, y).real()},
                       {"final_j", expectation(r.final_state, j).real()}};
    return out;
}

json curve_summary(const RatioCurve& c) {
    double dev = 0.0;
    for (double r : c.ratio) dev = std::max(dev, std::abs(r - 1.0));
    return {{"ratio_at_0", c.ratio.front()}, {"ratio_at_pi_over_2", c.ratio.back()}, {"max_abs_ratio_minus_1", dev}};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void study_adiabaticity(const ExperimentConfig& cfg, RunContext& ctx) {
    const ModeSpace space = cfg.mode_space();
    const ModelParams p = cfg.model_params();
    const RampSchedule s = cfg.ramp_schedule();
    std::vector<double> ts, metric;
    for (int k = 1; k <= cfg.study.t_points; ++k) {
        const double t = s.total_time * k / cfg.study.t_points;
        ts.push_back(t);
        metric.push_back(adiabaticity_metric(space, p, s, t, cfg.study.n_excited));
    }
    ctx.table("adiabaticity.csv", {"t_us", "metric"}, {ts, metric});
    ctx.summary() = {{"max", *std::max_element(metric.begin(), metric.end())}, {"median", median(metric)}};
}

void study_fidelity(const ExperimentConfig& cfg, RunContext& ctx) {
    const double tau = cfg.schedule.tau_us;
    const double ref_tau = cfg.study.reference_tau_us;
    const int sub = cfg.schedule.substeps;
    const int ref_sub = cfg.study.reference_substeps;
    ExperimentConfig tc = cfg;
    tc.run.samples = 0;
    const SpinBosonState trotter = ideal_evolution(tc).final_state;
    const SpinBosonState symmetric = exact_final(cfg, tau, sub, RampShape::linear);
    const SpinBosonState reference = exact_final(cfg, ref_tau, ref_sub, RampShape::linear);
    const SpinBosonState naive = exact_final(cfg, tau, sub, RampShape::staggered);
    const SpinBosonState naive_reference = exact_final(cfg, ref_tau, ref_sub, RampShape::staggered);
    ctx.summary() = {{"trotter_vs_exact", fidelity(trotter, symmetric)},
                     {"symmetric_vs_reference", fidelity(symmetric, reference)},
                     {"trotter_vs_reference", fidelity(trotter, reference)},
                     {"naive_vs_naive_reference", fidelity(naive, naive_reference)},
                     {"naive_vs_reference", fidelity(naive, reference)}};
    ctx.json_file("fidelity.json", ctx.summary());
}

void study_trotter_convergence(const ExperimentConfig& cfg, RunContext& ctx) {
    const SpinBosonState exact = exact_final(cfg, cfg.schedule.tau_us, cfg.schedule.substeps, cfg.schedule.ramp);
    std::vector<double> rounds, infidelity, distance;
    for (int n : cfg.study.rounds_list) {
        ExperimentConfig c = cfg;
        c.schedule.rounds = n;
        c.run.samples = 0;
        if (c.schedule.scheme == TrotterScheme::exact_simultaneous) c.schedule.scheme = TrotterScheme::first_order_split;
        const SpinBosonState psi = ideal_evolution(c).final_state;
        const double overlap = std::abs(exact.amplitudes().dot(psi.amplitudes()));
        rounds.push_back(n);
        infidelity.push_back(1.0 - overlap * overlap);
        // Distance after removing the global phase.
        distance.push_back(std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap)));
    }
    ctx.table("trotter_convergence.csv", {"rounds", "infidelity", "distance"}, {rounds, infidelity, distance});
    ctx.summary() = {{"rounds", rounds}, {"infidelity", infidelity}};
}

void study_ci_vs_nonci(const ExperimentConfig& cfg, RunContext& ctx) {
    const GeometricControlRuns runs = geometric_control_runs(cfg);
    const SpatialGridSpec spec = cfg.grid_spec();
    const std::array<std::pair<const char*, const SpinBosonState*>, 3> cases{
        {{"ci", &runs.ci}, {"switched", &runs.switched}, {"non_ci", &runs.non_ci}}};
    for (const auto& [name, state] : cases) {
        const SpatialGrid g = position_distribution(*state, spec);
        ctx.grid(std::string(name) + "_distribution", g);
        const RatioCurve c = ratio_curve(g, cfg.tomography.ratio_angles);
        ctx.curve(std::string(name) + "_ratio_curve.csv", c);
        ctx.summary()[name] = curve_summary(c);
    }
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return 4;
        case ErrorCode::TruncationLeak:
        case ErrorCode::PositivityViolation:
        case ErrorCode::TraceDrift:
        case ErrorCode::ConvergenceFailure:
        case ErrorCode::DegenerateGap:
        case ErrorCode::NotHermitian:
        case ErrorCode::NegativeSpectrum: return 3;
        default: return 2;
    }
}

void set_worker_threads(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
}

EvolutionResult ideal_evolution(const ExperimentConfig& cfg) {
    cfg.validate();
    const ModeSpace space = cfg.mode_space();
    return trotter_evolve(SpinBosonState::plus_vacuum(space), cfg.model_params(), cfg.ramp_schedule(),
                          cfg.evolution_options());
}

GeometricControlRuns geometric_control_runs(const ExperimentConfig& cfg) {
    cfg.validate();
    const ModeSpace space = cfg.mode_space();
    const ModelParams p = cfg.model_params();
    RampSchedule s = cfg.ramp_schedule();
    s.shape = RampShape::linear;
    const JahnTellerParts jt = jahn_teller_parts(space, p);
    const OperatorMatrix oscillator = p.nu * (number(space, Mode::x) + number(space, Mode::y));
    const OperatorMatrix non_ci_push = build_non_ci(space, p, 1.0) - oscillator;
    const auto scales = [&](double t) { return s.scales_at(t); };
    const auto ci_h = [&](double t) {
        const auto sc = s.scales_at(t);
        return jt.at(sc[0], sc[1]);
    };
    const auto non_ci_h = [&](double t) { return oscillator + s.scales_at(t)[0] * non_ci_push; };
    const auto switched_h = [&](double t) { return t < 0.5 * s.total_time ? ci_h(t) : non_ci_h(t); };

    EvolutionOptions opts = cfg.evolution_options();
    opts.samples = 0;
    const SpinBosonState psi0 = SpinBosonState::plus_vacuum(space);
    const auto run_with = [&](const std::function<OperatorMatrix(double)>& h) {
        return evolve_piecewise(psi0, s.total_time, s.substeps, h, scales, opts).final_state;
    };
    return {run_with(ci_h), run_with(switched_h), run_with(non_ci_h)};
}

RunReport run_surface(const ExperimentConfig& cfg) {
    cfg.validate();
    RunContext ctx(cfg, "surface");
    ModelParams p = cfg.model_params();
    if (cfg.surface.units == SurfaceUnits::raw) {
        p.nu = cfg.model.nu_khz;
        p.omega = cfg.model.omega_khz;
        p.delta = cfg.model.delta_khz;
    }
    const SpatialGridSpec spec{cfg.surface.half_width, cfg.surface.resolution, 0.0};
    const Eigen::VectorXd axis = spec.axis();
    SpatialGrid plus{spec, Eigen::MatrixXd(axis.size(), axis.size()), std::nullopt};
    SpatialGrid minus = plus;
    double min_gap = INFINITY;
    double min_v = INFINITY;
    double ring = 0.0;
    for (Eigen::Index i = 0; i < axis.size(); ++i)
        for (Eigen::Index j = 0; j < axis.size(); ++j) {
            plus.values(i, j) = semiclassical_surface(p, axis[i], axis[j], Branch::plus);
            minus.values(i, j) = semiclassical_surface(p, axis[i], axis[j], Branch::minus);
            min_gap = std::min(min_gap, plus.values(i, j) - minus.values(i, j));
            if (minus.values(i, j) < min_v) {
                min_v = minus.values(i, j);
                ring = std::hypot(axis[i], axis[j]);
            }
        }
    write_grid_csv(ctx.path("surface_plus.csv"), plus);
    ctx.record("surface_plus.csv");
    write_grid_csv(ctx.path("surface_minus.csv"), minus);
    ctx.record("surface_minus.csv");
    if (cfg.output.pgm) {
        ctx.pgm("surface_plus", plus.values);
        ctx.pgm("surface_minus", minus.values);
    }
    ctx.summary() = {{"min_lower_surface", min_v},
                     {"grid_ring_radius", ring},
                     {"analytic_ring_radius", p.omega / (std::sqrt(2.0) * p.nu)},
                     {"min_gap", min_gap}};
    return ctx.finish();
}

RunReport run_evolve(const ExperimentConfig& cfg) {
    cfg.validate();
    RunContext ctx(cfg, "evolve");
    const EvolveOutcome out = evolve_configured(cfg);
    const SpatialGrid dist = position_distribution(out.motional, cfg.grid_spec());
    ctx.grid("distribution", dist);
    const RatioCurve curve = ratio_curve(dist, cfg.tomography.ratio_angles);
    ctx.curve("ratio_curve.csv", curve);
    ctx.table("j_series.csv", {"t_us", "j"}, {out.times, out.j_series});
    json diag = out.diagnostics;
    diag["angular_centroid"] = angular_centroid(dist);
    diag["ratio"] = curve_summary(curve);
    ctx.json_file("diagnostics.json", diag);
    ctx.summary() = diag;
    return ctx.finish();
}

RunReport run_tomo(const ExperimentConfig& cfg) {
    cfg.validate();
    RunContext ctx(cfg, "tomo");
    const EvolveOutcome out = evolve_configured(cfg);
    const SpatialGridSpec spec = cfg.grid_spec();
    const KGrid grid = cfg.k_grid();
    const SpatialGrid truth = position_distribution(out.motional, spec);
    ctx.grid("truth", truth);

    const SpatialGridSpec out_spec = cfg.output_spec();
    // Distances to the ground truth only make sense on the same axes.
    const bool comparable = out_spec == spec;

    const FourierSamples exact = scan(out.motional, grid);
    ctx.samples("samples_exact", exact);
    const SpatialGrid rec_exact = reconstruct(exact, out_spec);
    ctx.grid("reconstruction_exact", rec_exact);
    const RatioCurve curve_exact = ratio_curve(rec_exact, cfg.tomography.ratio_angles);
    ctx.curve("ratio_curve_exact.csv", curve_exact);

    const double cut_angle = cfg.tomography.cut_angle_deg * std::numbers::pi / 180.0;
    const CutLine cut_exact = cut_line(exact, cut_angle, cfg.tomography.cut_points);
    std::vector<std::string> header{"s", "exact_cos", "exact_sin"};
    std::vector<std::vector<double>> cols{cut_exact.s, cut_exact.cos_part, cut_exact.sin_part};

    json summary{{"k0_exact", exact.cos_part(grid.points / 2, grid.points / 2)},
                 {"ratio_exact", curve_summary(curve_exact)}};
    if (comparable) summary["l1_exact_vs_truth"] = distribution_distance(rec_exact, truth, DistanceMetric::L1);
    if (cfg.tomography.shots > 0) {
        const FourierSamples noisy = scan(out.motional, grid, cfg.tomography.shots, cfg.run.seed);
        ctx.samples("samples_noisy", noisy);
        const SpatialGrid rec_noisy = reconstruct(noisy, out_spec);
        ctx.grid("reconstruction_noisy", rec_noisy);
        const RatioCurve curve_noisy = ratio_curve(rec_noisy, cfg.tomography.ratio_angles);
        ctx.curve("ratio_curve_noisy.csv", curve_noisy);
        const CutLine cut_noisy = cut_line(noisy, cut_angle, cfg.tomography.cut_points);
        header.insert(header.end(), {"noisy_cos", "noisy_sin"});
        cols.push_back(cut_noisy.cos_part);
        cols.push_back(cut_noisy.sin_part);
        if (comparable) summary["l1_noisy_vs_truth"] = distribution_distance(rec_noisy, truth, DistanceMetric::L1);
        summary["noisy_negative_mass"] = rec_noisy.negative_mass();
        summary["ratio_noisy"] = curve_summary(curve_noisy);
    }
    ctx.table("cut_line.csv", header, cols);
    ctx.summary() = summary;
    return ctx.finish();
}

RunReport run_berry(const ExperimentConfig& cfg) {
    cfg.validate();
    RunContext ctx(cfg, "berry");
    const BerrySection& b = cfg.berry;
    const double deg = std::numbers::pi / 180.0;
    PlanarPath path;
    switch (b.path) {
        case BerryPathKind::circle: path = circle_path(b.center_x, b.center_y, b.radius, b.segments); break;
        case BerryPathKind::arc:
            path = arc_path(b.center_x, b.center_y, b.radius, b.theta0_deg * deg, b.theta1_deg * deg, b.segments);
            break;
        case BerryPathKind::shifted_loop: path = shifted_loop(b.eps, std::max(2, b.segments / 2)); break;
    }
    if (b.clockwise) path = path.reversed();
    std::vector<double> xs, ys;
    for (const auto& v : path.vertices) {
        xs.push_back(v[0]);
        ys.push_back(v[1]);
    }
    ctx.table("path.csv", {"x", "y"}, {xs, ys});
    json result{{"closed", path.closed}, {"winding_number", winding_number(path)}};
    for (const auto& [name, branch] : {std::pair{"plus", Branch::plus}, std::pair{"minus", Branch::minus}}) {
        result[name] = {{"line_integral", berry_phase_line_integral(path, branch)},
                        {"connection_numeric", connection_numeric(path, branch)}};
    }
    const ModelParams p = cfg.model_params();
    if (p.omega > 0.0 || p.delta > 0.0) result["solid_angle_phase"] = solid_angle_phase(p);
    ctx.json_file("berry.json", result);
    ctx.summary() = result;
    return ctx.finish();
}

RunReport run_study(const ExperimentConfig& cfg) {
    cfg.validate();
    RunContext ctx(cfg, "study");
    switch (cfg.study.kind) {
        case StudyKind::adiabaticity: study_adiabaticity(cfg, ctx); break;
        case StudyKind::fidelity: study_fidelity(cfg, ctx); break;
        case StudyKind::trotter_convergence: study_trotter_convergence(cfg, ctx); break;
        case StudyKind::ci_vs_nonci: study_ci_vs_nonci(cfg, ctx); break;
    }
    return ctx.finish();
}

RunReport run(Subcommand cmd, const ExperimentConfig& cfg) {
    switch (cmd) {
        case Subcommand::surface: return run_surface(cfg);
        case Subcommand::evolve: return run_evolve(cfg);
        case Subcommand::tomo: return run_tomo(cfg);
        case Subcommand::berry: return run_berry(cfg);
        case Subcommand::study: return run_study(cfg);
    }
    fail(ErrorCode::InvalidArgument, "unknown subcommand");
}

}  // namespace cisim
