#include "kramers/runner.hpp"
#include "kramers/integrator.hpp"
#include "kramers/oracles.hpp"
#include "kramers/projection.hpp"
#include "kramers/version.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace kramers {

namespace fs = std::filesystem;

json derived_quantities(const RunConfig& cfg)
{
    const Params P = build_params(cfg.params);
    auto g = make_grid(cfg.grid, P.hbar);
    json d = {{"hbar", P.hbar},
              {"omega", P.omega},
              {"c", P.c},
              {"gamma", P.gamma},
              {"beta", P.beta},
              {"T", P.T},
              {"kTm", P.kTm()},
              {"rest_energy", P.rest_energy()},
              {"hx", g->hx()},
              {"hp", g->hp()},
              {"ds", g->ds()}};
    if (P.T > 0) {
        ProjectionContext pc(P, g);
        d["C"] = pc.C;
        d["sigma"] = std::sqrt(pc.sigma2);
    } else {
        d["C"] = nullptr;
        d["sigma"] = nullptr;
    }
    OperatorContext ctx(P, cfg.potential, cfg.hamiltonian, g, cfg.p_order, cfg.boundary_tol);
    const auto sd = stable_dt(ctx);
    d["stable_dt"] = {{"dt", sd.dt},           {"binding", sd.binding},     {"transport", sd.transport},
                      {"force", sd.force},     {"diffusion", sd.diffusion}, {"phase", sd.phase}};
    double vmax = 0.0;
    for (double v : ctx.V) vmax = std::max(vmax, std::abs(v));
    d["max_abs_V_over_mc2"] = vmax / P.rest_energy();
    return d;
}

WaveField build_initial_state(const RunConfig& cfg, GridPtr grid, Diagnostics* diag)
{
    const auto& is = cfg.initial_state;
    switch (is.kind) {
    case InitialState::Kind::random_smooth: return random_smooth_field(grid, is.random);
    case InitialState::Kind::file: {
        WaveField phi = io::read_snapshot(is.path);
        if (!(phi.grid->spec() == grid->spec()) || phi.grid->hbar() != grid->hbar())
            throw ShapeError("initial_state.path: snapshot grid does not match the config grid");
        phi.grid = grid;
        phi.t = 0.0;
        return phi;
    }
    case InitialState::Kind::embedded_gaussian: {
        const Params P = build_params(cfg.params);
        ProjectionContext pc(P, grid, diag);
        return embed_psi(gaussian_psi(grid, is.center, is.width, is.momentum), pc);
    }
    }
    throw ConfigError("initial_state.kind is not recognised");
}

void startup_checks(const RunConfig& cfg, const WaveField& phi0, Diagnostics* diag)
{
    const Params P = build_params(cfg.params);
    const double smax = occupied_s_extent(phi0, 1e-8);
    const double need = smax + 8.0 * std::sqrt(P.kTm());
    if (cfg.grid.Pmax < need) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "Pmax=%g is below max|s| + 8 sqrt(kTm) = %g; the p-edges may truncate the state",
                      cfg.grid.Pmax, need);
        warn(diag, buf);
    }
    if (P.T > 0) ProjectionContext pc(P, phi0.grid, diag);
}

namespace {

struct ScenarioOutcome {
    json verdicts = json::object();
    json metrics = json::object();
    bool failed = false;
    bool partial = false;
    std::string error;
    double primary = 0.0;
    std::string primary_name;
};

void write_snapshot_to(io::OutputSet& out, const RunConfig& cfg, int index, const WaveField& f)
{
    if (!cfg.outputs.snapshots) return;
    char name[64];
    std::snprintf(name, sizeof name, "snapshots/phi_%05d", index);
    io::write_snapshot(out.path(name), f);
    out.add(std::string(name) + ".bin");
    out.add(std::string(name) + ".json");
}

void write_series(io::OutputSet& out, const RunConfig& cfg, const std::string& name, const MetricSeries& s)
{
    if (!cfg.outputs.metrics) return;
    io::write_series_csv(out.path(name), s);
    out.add(name);
}

json verdict(bool pass, double measured, double threshold, const std::string& rule)
{
    return {{"passed", pass}, {"measured", measured}, {"threshold", threshold}, {"rule", rule}};
}

// pure relaxation: only the gamma*B part, stepped with the exact propagator
ScenarioOutcome run_relaxation(const RunConfig& cfg, const Params& P, const WaveField& phi0, io::OutputSet& out)
{
    ScenarioOutcome o;
    if (!(P.gamma > 0)) throw ConfigError("scenario relaxation needs params.gamma > 0");
    ProjectionContext pc(P, phi0.grid);
    const WaveField target = project_p0(phi0, pc);
    const int steps = plan_steps(cfg.plan);
    OUPropagator prop(P, phi0.grid, cfg.plan.dt);
    const double n0 = l2_norm(phi0);
    MetricSeries res{"residual", {}, {}};
    WaveField cur = phi0;
    int snap = 0;
    for (int k = 0; k <= steps; ++k) {
        if (k > 0) {
            cur = prop.apply(cur);
            cur.t = k * cfg.plan.dt;
        }
        res.push(cur.t, field_error(cur, target, NormKind::L2) / n0);
        if (k == 0 || k == steps || (cfg.plan.snapshot_stride > 0 && k % cfg.plan.snapshot_stride == 0))
            write_snapshot_to(out, cfg, snap++, cur);
    }
    write_series(out, cfg, "residual.csv", res);
    const auto fit = fit_decay_rate(res);
    const double rel = std::abs(fit.rate - P.gamma) / P.gamma;
    o.metrics = {{"fitted_rate", fit.rate}, {"gamma", P.gamma}, {"fit_window", {res.times[fit.first], res.times[fit.last - 1]}},
                 {"fit_residual", fit.residual}, {"final_residual", res.values.back()}};
    o.verdicts["decay_rate"] = verdict(rel <= 0.05, rel, 0.05, "|rate - gamma| / gamma");
    o.primary = rel;
    o.primary_name = "rate_relative_error";
    return o;
}

ScenarioOutcome run_evolution(const RunConfig& cfg, const Params& P, const WaveField& phi0, io::OutputSet& out,
                              Diagnostics* diag)
{
    ScenarioOutcome o;
    OperatorContext ctx(P, cfg.potential, cfg.hamiltonian, phi0.grid, cfg.p_order, cfg.boundary_tol);

    if (cfg.scenario == Scenario::liouville_limit && P.gamma != 0.0)
        throw ConfigError("scenario liouville_limit needs params.gamma = 0");
    if (cfg.scenario == Scenario::free_phase_check &&
        (P.gamma != 0.0 || !is_free(cfg.potential) || cfg.hamiltonian != HamiltonianMode::quadratic))
        throw ConfigError("scenario free_phase_check needs gamma = 0, a free potential and the quadratic hamiltonian");

    // schrodinger reference, advanced between snapshots
    std::optional<ProjectionContext> pc;
    PsiField ref;
    SchrodingerOptions sopts = schrodinger_options_for(P);
    const double ref_dt = cfg.reference_dt > 0 ? cfg.reference_dt : cfg.plan.dt / 10.0;
    MetricSeries psi_err{"psi_relative_error", {}, {}};
    if (cfg.scenario == Scenario::schrodinger_limit) {
        pc.emplace(P, phi0.grid);
        ref = extract_psi(phi0, *pc);
    }

    int snap = 0;
    Observer obs = [&](double t, const WaveField& f) {
        write_snapshot_to(out, cfg, snap++, f);
        if (pc) {
            if (t > ref.t) {
                ref = schrodinger_evolve(ref, P, cfg.potential, t - ref.t, ref_dt, sopts, diag);
                ref.t = t;
            }
            psi_err.push(t, field_error(extract_psi(f, *pc), ref, NormKind::relative_L2));
        }
    };
    const auto traj = evolve(phi0, ctx, cfg.plan, {obs}, diag);
    write_series(out, cfg, "norm.csv", traj.norm);
    write_series(out, cfg, "p_boundary.csv", traj.boundary);

    const double n0 = traj.norm.values.front(), n1 = traj.norm.values.back();
    o.metrics["steps_taken"] = traj.steps_taken;
    o.metrics["final_norm"] = n1;
    o.metrics["norm_relative_change"] = std::abs(n1 * n1 - n0 * n0) / (n0 * n0);
    o.primary = o.metrics["norm_relative_change"];
    o.primary_name = "norm_relative_change";
    if (traj.aborted) {
        o.failed = true;
        o.partial = true;
        o.error = traj.abort_reason;
        return o;
    }

    switch (cfg.scenario) {
    case Scenario::schrodinger_limit: {
        write_series(out, cfg, "psi_error.csv", psi_err);
        o.metrics["psi_relative_error"] = psi_err.values.back();
        o.metrics["reference_dt"] = ref_dt;
        o.primary = psi_err.values.back();
        o.primary_name = "psi_relative_error";
        break;
    }
    case Scenario::liouville_limit: {
        LiouvilleOptions lo;
        lo.substep = cfg.liouville_substep;
        const DensityField rho0 = rho_from_phi(phi0);
        const DensityField exact = liouville_transport(rho0, ctx, cfg.plan.t_end, diag, lo);
        const double err = field_error(rho_from_phi(traj.final_state), exact, NormKind::relative_L2);
        const double m0 = phase_space_integral(rho0);
        const double drift = std::abs(phase_space_integral(rho_from_phi(traj.final_state)) - m0) / m0;
        o.metrics["rho_relative_error"] = err;
        o.metrics["mass_drift"] = drift;
        o.verdicts["conservation"] = verdict(drift <= 1e-8, drift, 1e-8, "relative drift of the integral of |phi|^2");
        o.primary = err;
        o.primary_name = "rho_relative_error";
        break;
    }
    case Scenario::free_phase_check: {
        const WaveField exact = free_phase(phi0, ctx, cfg.plan.t_end);
        const double err = field_error(traj.final_state, exact, NormKind::relative_L2);
        o.metrics["relative_error"] = err;
        o.verdicts["free_phase"] = verdict(err <= 1e-6, err, 1e-6, "relative L2 error against the closed form");
        o.primary = err;
        o.primary_name = "relative_error";
        break;
    }
    default: break;
    }
    return o;
}

} // namespace

RunResult run(const RunConfig& cfg, const fs::path& out_dir)
{
    const auto start = std::chrono::steady_clock::now();
    RunResult rr;
    rr.out_dir = out_dir;
    Diagnostics diag;
    io::OutputSet out(out_dir);
    ScenarioOutcome o;
    json derived;
    try {
        derived = derived_quantities(cfg);
        const Params P = build_params(cfg.params);
        auto grid = make_grid(cfg.grid, P.hbar);
        const WaveField phi0 = build_initial_state(cfg, grid, &diag);
        startup_checks(cfg, phi0, &diag);
        if (cfg.scenario == Scenario::relaxation)
            o = run_relaxation(cfg, P, phi0, out);
        else
            o = run_evolution(cfg, P, phi0, out, &diag);
    } catch (const std::exception& e) {
        o.failed = true;
        o.partial = !out.entries().empty();
        o.error = e.what();
    }

    bool verdict_ok = true;
    for (const auto& [k, v] : o.verdicts.items()) verdict_ok = verdict_ok && v.at("passed").get<bool>();
    rr.exit_code = o.failed ? exit_error : (verdict_ok ? exit_ok : exit_verdict_failed);
    rr.partial = o.partial;
    rr.error = o.error;
    rr.warnings = diag.warnings;
    rr.primary_metric = o.primary;
    rr.primary_name = o.primary_name;

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rr.manifest = {{"tool", "kramers"},
                   {"version", version_string()},
                   {"command", "run"},
                   {"resolved_config", to_json(cfg)},
                   {"derived", derived},
                   {"files", out.entries()},
                   {"metrics", o.metrics},
                   {"verdicts", o.verdicts},
                   {"warnings", diag.warnings},
                   {"partial", o.partial},
                   {"status", o.failed ? "error" : (verdict_ok ? "ok" : "verdict_failed")},
                   {"exit_code", rr.exit_code},
                   {"wall_clock_seconds", wall}};
    if (o.failed) rr.manifest["error"] = o.error;
    io::write_json_atomic(out.path("manifest.json"), rr.manifest);
    return rr;
}

std::string resolve_axis(const json& cfg, const std::string& axis)
{
    if (axis.empty()) throw ConfigError("sweep axis is empty");
    if (axis.find('.') != std::string::npos) return axis;
    for (const char* block : {"params", "grid", "plan"})
        if (cfg.contains(block) && cfg.at(block).contains(axis)) return std::string(block) + "." + axis;
    if (axis == "gamma" || axis == "beta" || axis == "T") return "params." + axis;
    throw ConfigError("sweep axis '" + axis + "' does not name a numeric config field");
}

SweepResult sweep(const json& cfg, const std::string& axis, const std::vector<double>& values, const fs::path& out_dir,
                  int threads)
{
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    SweepResult sr;
    sr.axis = resolve_axis(cfg, axis);
    sr.values = values;
    sr.runs.resize(values.size());

    // validate every member before starting any of them
    std::vector<RunConfig> members;
    for (double v : values) {
        json j = cfg;
        const bool integral = sr.axis.rfind("grid.N", 0) == 0 || sr.axis == "plan.snapshot_stride" || sr.axis == "p_order" ||
                              sr.axis == "initial_state.seed" || sr.axis == "initial_state.cutoff";
        if (integral) {
            if (v != std::floor(v)) throw ConfigError(sr.axis + " takes integer values");
            set_json_path(j, sr.axis, static_cast<long long>(v));
        } else {
            apply_override(j, sr.axis + "=" + io::format_double(v));
        }
        members.push_back(parse_run_config(j));
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < values.size(); k = next++) {
            char name[32];
            std::snprintf(name, sizeof name, "run_%03zu", k);
            sr.runs[k] = run(members[k], out_dir / name);
        }
    };
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(values.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<double> errs;
    std::vector<bool> valid;
    json runs = json::array();
    for (std::size_t k = 0; k < values.size(); ++k) {
        const auto& r = sr.runs[k];
        const bool ok = r.exit_code != exit_error && std::isfinite(r.primary_metric) && r.primary_metric > 0;
        errs.push_back(r.primary_metric);
        valid.push_back(ok);
        if (r.exit_code != exit_ok) sr.exit_code = exit_verdict_failed;
        runs.push_back({{"value", values[k]},
                        {"directory", r.out_dir.filename().string()},
                        {"exit_code", r.exit_code},
                        {"metric", r.primary_name},
                        {"value_of_metric", r.primary_metric},
                        {"error", r.error}});
    }
    sr.report = fit_scaling(values, errs, valid);
    const bool grid_axis = sr.axis == "grid.Nx" || sr.axis == "grid.Np";
    sr.summary = {{"axis", sr.axis},
                  {"values", values},
                  {"runs", runs},
                  {"metric", sr.runs.front().primary_name},
                  {"exponent", std::isfinite(sr.report.exponent) ? json(sr.report.exponent) : json(nullptr)},
                  {"fit_residual", sr.report.residual},
                  {"pair_ratios", sr.report.pair_ratios},
                  {"notes", sr.report.notes}};
    if (grid_axis && std::isfinite(sr.report.exponent)) sr.summary["convergence_order"] = -sr.report.exponent;
    io::write_json_atomic(out_dir / "sweep.json", sr.summary);
    return sr;
}

} // namespace kramers
