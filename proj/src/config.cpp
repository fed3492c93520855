#include "kramers/config.hpp"
#include "kramers/errors.hpp"
#include "kramers/io.hpp"

#include <set>

namespace kramers {

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    std::string bad;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) bad += (bad.empty() ? "" : ", ") + (where.empty() ? "" : where + ".") + it.key();
    if (!bad.empty()) throw ConfigError("unknown configuration keys: " + bad);
}

std::string join(const std::string& where, const char* key)
{
    return where.empty() ? key : where + "." + key;
}

template <class T>
T get(const json& obj, const std::string& where, const char* key)
{
    if (!obj.contains(key)) throw ConfigError("missing required field " + join(where, key));
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("field " + join(where, key) + " has the wrong type");
    }
}

template <class T>
T get_or(const json& obj, const std::string& where, const char* key, T fallback)
{
    if (!obj.contains(key)) return fallback;
    return get<T>(obj, where, key);
}

template <class T>
std::optional<T> get_opt(const json& obj, const std::string& where, const char* key)
{
    if (!obj.contains(key)) return std::nullopt;
    return get<T>(obj, where, key);
}

PotentialSpec parse_potential(const json& j)
{
    const auto kind = get<std::string>(j, "potential", "kind");
    if (kind == "free") {
        reject_unknown(j, "potential", {"kind"});
        return FreePotential{};
    }
    if (kind == "harmonic") {
        reject_unknown(j, "potential", {"kind", "k"});
        return HarmonicPotential{get<double>(j, "potential", "k")};
    }
    if (kind == "double_well") {
        reject_unknown(j, "potential", {"kind", "a", "b"});
        return DoubleWellPotential{get<double>(j, "potential", "a"), get<double>(j, "potential", "b")};
    }
    if (kind == "polynomial") {
        reject_unknown(j, "potential", {"kind", "coeffs"});
        return PolynomialPotential{get<std::vector<double>>(j, "potential", "coeffs")};
    }
    throw ConfigError("potential.kind: unknown kind '" + kind + "'");
}

json potential_to_json(const PotentialSpec& pot)
{
    json j{{"kind", potential_kind(pot)}};
    if (auto* h = std::get_if<HarmonicPotential>(&pot)) j["k"] = h->k;
    if (auto* w = std::get_if<DoubleWellPotential>(&pot)) {
        j["a"] = w->a;
        j["b"] = w->b;
    }
    if (auto* p = std::get_if<PolynomialPotential>(&pot)) j["coeffs"] = p->coeffs;
    return j;
}

} // namespace

std::string to_string(Scenario s)
{
    switch (s) {
    case Scenario::relaxation: return "relaxation";
    case Scenario::schrodinger_limit: return "schrodinger_limit";
    case Scenario::liouville_limit: return "liouville_limit";
    case Scenario::free_phase_check: return "free_phase_check";
    case Scenario::custom: return "custom";
    }
    return "custom";
}

Scenario scenario_from_string(const std::string& s)
{
    for (auto sc : {Scenario::relaxation, Scenario::schrodinger_limit, Scenario::liouville_limit,
                    Scenario::free_phase_check, Scenario::custom})
        if (to_string(sc) == s) return sc;
    throw ConfigError("scenario: unknown scenario '" + s + "'");
}

void collect_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                     std::vector<std::string>& out)
{
    if (!obj.is_object()) return;
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) out.push_back(where.empty() ? it.key() : where + "." + it.key());
}

// every unknown key in the document, so one error names all of them
void reject_all_unknown(const json& j)
{
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    std::vector<std::string> bad;
    collect_unknown(j, "", {"params", "grid", "potential", "hamiltonian", "p_order", "boundary_tol", "scenario",
                            "initial_state", "plan", "reference_dt", "liouville_substep", "outputs"},
                    bad);
    if (j.contains("params"))
        collect_unknown(j["params"], "params",
                        {"m", "c", "omega", "hbar", "beta", "gamma", "k_B", "T", "d", "remove_rest_energy"}, bad);
    if (j.contains("grid")) collect_unknown(j["grid"], "grid", {"Lx", "Nx", "Pmax", "Np", "d", "x_min"}, bad);
    if (j.contains("plan"))
        collect_unknown(j["plan"], "plan", {"scheme", "dt", "t_end", "snapshot_stride", "allow_unstable"}, bad);
    if (j.contains("outputs")) collect_unknown(j["outputs"], "outputs", {"directory", "snapshots", "metrics"}, bad);
    if (!bad.empty()) {
        std::string msg;
        for (const auto& b : bad) msg += (msg.empty() ? "" : ", ") + b;
        throw ConfigError("unknown configuration keys: " + msg);
    }
}

RunConfig parse_run_config(const json& j)
{
    reject_all_unknown(j);
    RunConfig cfg;

    const json& pj = j.contains("params") ? j["params"] : throw ConfigError("missing required block params");
    reject_unknown(pj, "params", {"m", "c", "omega", "hbar", "beta", "gamma", "k_B", "T", "d", "remove_rest_energy"});
    cfg.params.m = get_or<double>(pj, "params", "m", 1.0);
    cfg.params.c = get_opt<double>(pj, "params", "c");
    cfg.params.omega = get_opt<double>(pj, "params", "omega");
    cfg.params.hbar = get_opt<double>(pj, "params", "hbar");
    cfg.params.beta = get_opt<double>(pj, "params", "beta");
    cfg.params.gamma = get_opt<double>(pj, "params", "gamma");
    cfg.params.k_B = get_or<double>(pj, "params", "k_B", 1.0);
    cfg.params.T = get_opt<double>(pj, "params", "T");
    cfg.params.d = get_or<int>(pj, "params", "d", 1);
    cfg.params.remove_rest_energy = get_or<bool>(pj, "params", "remove_rest_energy", true);
    build_params(cfg.params);

    const json& gj = j.contains("grid") ? j["grid"] : throw ConfigError("missing required block grid");
    reject_unknown(gj, "grid", {"Lx", "Nx", "Pmax", "Np", "d", "x_min"});
    cfg.grid.Lx = get<double>(gj, "grid", "Lx");
    cfg.grid.Nx = get<int>(gj, "grid", "Nx");
    cfg.grid.Pmax = get<double>(gj, "grid", "Pmax");
    cfg.grid.Np = get<int>(gj, "grid", "Np");
    cfg.grid.d = get_or<int>(gj, "grid", "d", 1);
    cfg.grid.x_min = get_or<double>(gj, "grid", "x_min", 0.0);
    validate_grid_spec(cfg.grid);

    if (!j.contains("potential")) throw ConfigError("missing required block potential");
    cfg.potential = parse_potential(j["potential"]);
    validate_potential(cfg.potential);

    cfg.hamiltonian = hamiltonian_mode_from_string(get_or<std::string>(j, "", "hamiltonian", "quadratic"));
    cfg.p_order = get_or<int>(j, "", "p_order", 6);
    if (cfg.p_order != 2 && cfg.p_order != 4 && cfg.p_order != 6) throw ConfigError("p_order must be 2, 4 or 6");
    cfg.boundary_tol = get_or<double>(j, "", "boundary_tol", 1e-10);
    cfg.scenario = scenario_from_string(get<std::string>(j, "", "scenario"));

    const json& ij = j.contains("initial_state") ? j["initial_state"] : throw ConfigError("missing required block initial_state");
    const auto kind = get<std::string>(ij, "initial_state", "kind");
    if (kind == "embedded_gaussian") {
        reject_unknown(ij, "initial_state", {"kind", "center", "width", "momentum"});
        cfg.initial_state.kind = InitialState::Kind::embedded_gaussian;
        cfg.initial_state.center = get_or<double>(ij, "initial_state", "center", 0.0);
        cfg.initial_state.width = get<double>(ij, "initial_state", "width");
        cfg.initial_state.momentum = get_or<double>(ij, "initial_state", "momentum", 0.0);
        if (!(cfg.initial_state.width > 0)) throw ConfigError("initial_state.width must be positive");
    } else if (kind == "random_smooth") {
        reject_unknown(ij, "initial_state",
                       {"kind", "seed", "cutoff", "bumps", "p_spread", "width_min", "width_max", "x_envelope", "x_center"});
        auto& r = cfg.initial_state.random;
        cfg.initial_state.kind = InitialState::Kind::random_smooth;
        r.seed = get<std::uint64_t>(ij, "initial_state", "seed");
        r.cutoff = get<int>(ij, "initial_state", "cutoff");
        r.bumps = get_or<int>(ij, "initial_state", "bumps", r.bumps);
        r.p_spread = get_or<double>(ij, "initial_state", "p_spread", r.p_spread);
        r.width_min = get_or<double>(ij, "initial_state", "width_min", r.width_min);
        r.width_max = get_or<double>(ij, "initial_state", "width_max", r.width_max);
        r.x_envelope = get_or<double>(ij, "initial_state", "x_envelope", 0.0);
        r.x_center = get_or<double>(ij, "initial_state", "x_center", 0.0);
    } else if (kind == "file") {
        reject_unknown(ij, "initial_state", {"kind", "path"});
        cfg.initial_state.kind = InitialState::Kind::file;
        cfg.initial_state.path = get<std::string>(ij, "initial_state", "path");
    } else {
        throw ConfigError("initial_state.kind: unknown kind '" + kind + "'");
    }

    const json& lj = j.contains("plan") ? j["plan"] : throw ConfigError("missing required block plan");
    reject_unknown(lj, "plan", {"scheme", "dt", "t_end", "snapshot_stride", "allow_unstable"});
    cfg.plan.scheme = scheme_from_string(get<std::string>(lj, "plan", "scheme"));
    cfg.plan.dt = get<double>(lj, "plan", "dt");
    cfg.plan.t_end = get<double>(lj, "plan", "t_end");
    cfg.plan.snapshot_stride = get_or<int>(lj, "plan", "snapshot_stride", 0);
    cfg.plan.allow_unstable = get_or<bool>(lj, "plan", "allow_unstable", false);
    try {
        plan_steps(cfg.plan);
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }

    cfg.reference_dt = get_or<double>(j, "", "reference_dt", 0.0);
    cfg.liouville_substep = get_or<double>(j, "", "liouville_substep", 1e-3);
    if (cfg.reference_dt < 0 || !(cfg.liouville_substep > 0)) throw ConfigError("reference_dt/liouville_substep out of range");

    if (j.contains("outputs")) {
        const json& oj = j["outputs"];
        reject_unknown(oj, "outputs", {"directory", "snapshots", "metrics"});
        cfg.outputs.directory = get_or<std::string>(oj, "outputs", "directory", "");
        cfg.outputs.snapshots = get_or<bool>(oj, "outputs", "snapshots", true);
        cfg.outputs.metrics = get_or<bool>(oj, "outputs", "metrics", true);
    }
    return cfg;
}

json to_json(const RunConfig& cfg)
{
    json params{{"m", cfg.params.m}, {"k_B", cfg.params.k_B}, {"d", cfg.params.d},
                {"remove_rest_energy", cfg.params.remove_rest_energy}};
    if (cfg.params.c) params["c"] = *cfg.params.c;
    if (cfg.params.omega) params["omega"] = *cfg.params.omega;
    if (cfg.params.hbar) params["hbar"] = *cfg.params.hbar;
    if (cfg.params.beta) params["beta"] = *cfg.params.beta;
    if (cfg.params.gamma) params["gamma"] = *cfg.params.gamma;
    if (cfg.params.T) params["T"] = *cfg.params.T;

    json init;
    const auto& is = cfg.initial_state;
    switch (is.kind) {
    case InitialState::Kind::embedded_gaussian:
        init = {{"kind", "embedded_gaussian"}, {"center", is.center}, {"width", is.width}, {"momentum", is.momentum}};
        break;
    case InitialState::Kind::random_smooth:
        init = {{"kind", "random_smooth"},       {"seed", is.random.seed},           {"cutoff", is.random.cutoff},
                {"bumps", is.random.bumps},      {"p_spread", is.random.p_spread},   {"width_min", is.random.width_min},
                {"width_max", is.random.width_max}, {"x_envelope", is.random.x_envelope}, {"x_center", is.random.x_center}};
        break;
    case InitialState::Kind::file: init = {{"kind", "file"}, {"path", is.path}}; break;
    }

    return json{
        {"params", params},
        {"grid", io::grid_to_json(cfg.grid)},
        {"potential", potential_to_json(cfg.potential)},
        {"hamiltonian", to_string(cfg.hamiltonian)},
        {"p_order", cfg.p_order},
        {"boundary_tol", cfg.boundary_tol},
        {"scenario", to_string(cfg.scenario)},
        {"initial_state", init},
        {"plan",
         {{"scheme", to_string(cfg.plan.scheme)},
          {"dt", cfg.plan.dt},
          {"t_end", cfg.plan.t_end},
          {"snapshot_stride", cfg.plan.snapshot_stride},
          {"allow_unstable", cfg.plan.allow_unstable}}},
        {"reference_dt", cfg.reference_dt},
        {"liouville_substep", cfg.liouville_substep},
        {"outputs",
         {{"directory", cfg.outputs.directory}, {"snapshots", cfg.outputs.snapshots}, {"metrics", cfg.outputs.metrics}}},
    };
}

RunConfig load_run_config(const std::string& path)
{
    return parse_run_config(io::read_json(path));
}

std::vector<std::string> preset_names()
{
    return {"harmonic", "free", "double-well"};
}

RunConfig preset_config(const std::string& name)
{
    RunConfig cfg;
    cfg.params.m = 1.0;
    cfg.params.c = 10.0;
    cfg.params.hbar = 1.0;
    cfg.params.k_B = 1.0;
    cfg.params.T = 1.0;
    if (name == "harmonic") {
        cfg.params.gamma = 5.0;
        cfg.grid = GridSpec{20.0, 256, 12.0, 256, 1, -10.0};
        cfg.potential = HarmonicPotential{1.0};
        cfg.scenario = Scenario::relaxation;
        cfg.initial_state.kind = InitialState::Kind::random_smooth;
        cfg.initial_state.random.seed = 1;
        cfg.initial_state.random.cutoff = 6;
        cfg.plan = StepPlan{Scheme::strang_exactB_rk4A, 0.01, 2.0, 20, false};
    } else if (name == "free") {
        cfg.params.gamma = 0.0;
        cfg.grid = GridSpec{40.0, 256, 14.0, 256, 1, -20.0};
        cfg.potential = FreePotential{};
        cfg.scenario = Scenario::free_phase_check;
        cfg.initial_state.kind = InitialState::Kind::embedded_gaussian;
        cfg.initial_state.center = -2.0;
        cfg.initial_state.width = 1.0;
        cfg.initial_state.momentum = 1.0;
        cfg.plan = StepPlan{Scheme::rk4_full, 1e-3, 1.0, 250, false};
    } else if (name == "double-well") {
        cfg.params.gamma = 20.0;
        cfg.grid = GridSpec{10.0, 128, 17.0, 256, 1, -5.0};
        cfg.potential = DoubleWellPotential{1.0, 0.5};
        cfg.scenario = Scenario::schrodinger_limit;
        cfg.initial_state.kind = InitialState::Kind::embedded_gaussian;
        cfg.initial_state.center = -1.0;
        cfg.initial_state.width = 0.5;
        cfg.plan = StepPlan{Scheme::strang_exactB_rk4A, 5e-4, 0.5, 100, false};
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return cfg;
}

void set_json_path(json& cfg, const std::string& dotted, const json& value)
{
    json* node = &cfg;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("bad override path '" + dotted + "'");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        if (!node->contains(key)) (*node)[key] = json::object();
        node = &(*node)[key];
        start = dot + 1;
    }
}

void apply_override(json& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    // a gamma override displaces beta (and vice versa), likewise omega/hbar
    auto drop = [&](const char* a, const char* b) {
        if (key == std::string("params.") + a && cfg.contains("params")) cfg["params"].erase(b);
    };
    drop("gamma", "beta");
    drop("beta", "gamma");
    drop("hbar", "omega");
    drop("omega", "hbar");
    set_json_path(cfg, key, value);
}

} // namespace kramers
