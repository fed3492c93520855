#pragma once

#include "kramers/core_model.hpp"
#include "kramers/integrator.hpp"
#include "kramers/phase_field.hpp"
#include "kramers/random_field.hpp"

#include "json.hpp"

#include <string>

namespace kramers {

using json = nlohmann::json;

enum class Scenario { relaxation, schrodinger_limit, liouville_limit, free_phase_check, custom };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct InitialState {
    enum class Kind { embedded_gaussian, random_smooth, file };
    Kind kind = Kind::embedded_gaussian;
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;
    RandomSmoothSpec random;
    std::string path;
};

struct OutputOptions {
    std::string directory;     // empty: decided by the caller
    bool snapshots = true;
    bool metrics = true;
};

struct RunConfig {
    ParamsInput params;
    GridSpec grid;
    PotentialSpec potential = FreePotential{};
    HamiltonianMode hamiltonian = HamiltonianMode::quadratic;
    int p_order = 6;
    double boundary_tol = 1e-10;
    Scenario scenario = Scenario::custom;
    InitialState initial_state;
    StepPlan plan;
    double reference_dt = 0.0;       // schrodinger_limit: 0 means plan.dt / 10
    double liouville_substep = 1e-3; // liouville_limit
    OutputOptions outputs;
};

// Strict: unknown keys and missing required fields raise ConfigError naming the offending path.
RunConfig parse_run_config(const json& j);
json to_json(const RunConfig& cfg);

RunConfig load_run_config(const std::string& path);

RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Dotted-path override on the JSON form, e.g. "params.gamma=20"; the value is parsed as JSON when possible.
void apply_override(json& cfg, const std::string& assignment);
void set_json_path(json& cfg, const std::string& dotted, const json& value);

} // namespace kramers
