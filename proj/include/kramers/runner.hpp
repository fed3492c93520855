#pragma once

#include "kramers/analysis.hpp"
#include "kramers/config.hpp"
#include "kramers/io.hpp"
#include "kramers/operators.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace kramers {

enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_verdict_failed = 2 };

struct RunResult {
    int exit_code = exit_ok;
    std::filesystem::path out_dir;
    json manifest;
    double primary_metric = 0.0;   // scenario-specific, used by sweeps
    std::string primary_name;
    bool partial = false;
    std::string error;
    std::vector<std::string> warnings;
};

// hbar/omega, gamma/beta, C, sigma, stable_dt with its binding constraint, max|V|/mc^2, spacings.
json derived_quantities(const RunConfig& cfg);

WaveField build_initial_state(const RunConfig& cfg, GridPtr grid, Diagnostics* diag);

// Pmax >= max|s| + 8 sqrt(kTm) and coherent-state width vs hx; returns the warnings it raised.
void startup_checks(const RunConfig& cfg, const WaveField& phi0, Diagnostics* diag);

// Never throws for scenario failures; errors become exit_error with the message in the manifest.
RunResult run(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct SweepResult {
    int exit_code = exit_ok;
    std::string axis;
    std::vector<double> values;
    std::vector<RunResult> runs;
    ScalingReport report;
    json summary;
};

// axis is a dotted config path; a bare name is looked up in params, grid and plan.
std::string resolve_axis(const json& cfg, const std::string& axis);

SweepResult sweep(const json& cfg, const std::string& axis, const std::vector<double>& values,
                  const std::filesystem::path& out_dir, int threads = 1);

} // namespace kramers
