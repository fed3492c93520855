#include "kramers/runner.hpp"
#include "kramers/verification.hpp"
#include "kramers/version.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

using namespace kramers;
namespace fs = std::filesystem;

namespace {

fs::path output_root(const std::string& out, const std::string& fallback)
{
    if (!out.empty()) return out;
    if (const char* env = std::getenv("KRAMERS_OUT_DIR"); env && *env) return fs::path(env) / fallback;
    return fs::path("kramers_out") / fallback;
}

json load_config_json(const std::string& config, const std::string& preset, std::string& label)
{
    if (!config.empty() && !preset.empty()) throw ConfigError("give either --config or --preset, not both");
    if (!preset.empty()) {
        label = preset;
        return to_json(preset_config(preset));
    }
    if (config.empty()) throw ConfigError("one of --config or --preset is required");
    label = fs::path(config).stem().string();
    json j = io::read_json(config);
    // a run manifest can be fed back as a config
    if (j.is_object() && j.contains("resolved_config")) return j.at("resolved_config");
    return j;
}

void apply_common(json& j, const std::vector<std::string>& sets, const std::optional<std::uint64_t>& seed)
{
    for (const auto& s : sets) apply_override(j, s);
    if (seed) {
        if (!j.contains("initial_state") || j["initial_state"].value("kind", "") != "random_smooth")
            throw ConfigError("--seed applies to random_smooth initial states only");
        j["initial_state"]["seed"] = *seed;
    }
}

void print_warnings(const std::vector<std::string>& w)
{
    for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Phase-space wave-field simulator and verification suite"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());

    std::string config, preset, out;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    int threads = 1;

    auto* run_cmd = app.add_subcommand("run", "run one scenario");
    run_cmd->add_option("--config", config, "config JSON (or a run manifest)");
    run_cmd->add_option("--preset", preset, "bundled preset: harmonic, free, double-well");
    run_cmd->add_option("--out", out, "output directory");
    run_cmd->add_option("--seed", seed, "seed override for random_smooth initial states");
    run_cmd->add_option("--set", sets, "dotted override, e.g. params.gamma=20");
    run_cmd->add_option("--threads", threads, "accepted for symmetry; a single run is single-threaded");

    int theorem = 0;
    std::vector<double> gammas;
    double temperature = 0.0;
    bool skip_degenerate = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite for theorem 1, 2 or 3");
    verify_cmd->add_option("theorem", theorem, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
    verify_cmd->add_option("--preset", preset, "base preset (only harmonic)");
    verify_cmd->add_option("--out", out, "output directory");
    verify_cmd->add_option("--seed", seed, "seed for the random fields");
    verify_cmd->add_option("--set", sets, "dotted override on the harmonic preset");
    verify_cmd->add_option("--gammas", gammas, "gamma values for verify 2, in oscillator-frequency units")->delimiter(',');
    verify_cmd->add_option("--temperature", temperature, "temperature for verify 2 (default 0.5)");
    verify_cmd->add_flag("--skip-degenerate", skip_degenerate, "verify 2: skip the informational run at the preset temperature");
    verify_cmd->add_option("--threads", threads, "worker threads");

    std::string axis;
    std::vector<double> values;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario over values of one config field");
    sweep_cmd->add_option("--config", config, "config JSON");
    sweep_cmd->add_option("--preset", preset, "bundled preset");
    sweep_cmd->add_option("--axis", axis, "dotted config path, or gamma / Nx / Np / dt ...")->required();
    sweep_cmd->add_option("--values", values, "comma-separated values")->delimiter(',')->required();
    sweep_cmd->add_option("--out", out, "output directory");
    sweep_cmd->add_option("--seed", seed, "seed override");
    sweep_cmd->add_option("--set", sets, "dotted override");
    sweep_cmd->add_option("--threads", threads, "parallel sweep members")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            std::string label;
            json j = load_config_json(config, preset, label);
            apply_common(j, sets, seed);
            const RunConfig cfg = parse_run_config(j);
            const fs::path dir = out.empty() && !cfg.outputs.directory.empty() ? fs::path(cfg.outputs.directory)
                                                                               : output_root(out, "run-" + label);
            const auto rr = run(cfg, dir);
            print_warnings(rr.warnings);
            for (const auto& [k, v] : rr.manifest["verdicts"].items())
                std::cout << (v["passed"].get<bool>() ? "PASS " : "FAIL ") << k << ": " << v["rule"].get<std::string>()
                          << " = " << v["measured"].get<double>() << " (threshold " << v["threshold"].get<double>() << ")\n";
            if (!rr.error.empty()) std::cerr << "error: " << rr.error << (rr.partial ? " (partial outputs kept)" : "") << "\n";
            std::cout << "manifest: " << (dir / "manifest.json").string() << "\n";
            return rr.exit_code;
        }
        if (*verify_cmd) {
            if (!preset.empty() && preset != "harmonic") throw ConfigError("verify runs on the harmonic preset; use --set for changes");
            VerifyOptions opts;
            opts.overrides = sets;
            if (seed) opts.seed = *seed;
            if (!gammas.empty()) opts.gammas = gammas;
            if (temperature > 0) opts.slow_temperature = temperature;
            opts.degenerate_check = !skip_degenerate;
            opts.threads = threads;
            const fs::path dir = output_root(out, "verify-" + std::to_string(theorem));
            const auto rep = verify_theorem(theorem, opts, dir);
            for (const auto& r : rep.results) std::cout << format_result_line(r) << "\n";
            std::cout << "verify " << theorem << ": " << (rep.passed() ? "PASS" : "FAIL") << " (report in " << dir.string()
                      << ")\n";
            return rep.passed() ? exit_ok : exit_verdict_failed;
        }
        if (*sweep_cmd) {
            std::string label;
            json j = load_config_json(config, preset, label);
            apply_common(j, sets, seed);
            const fs::path dir = output_root(out, "sweep-" + label);
            const auto sr = sweep(j, axis, values, dir, threads);
            for (const auto& r : sr.summary["runs"])
                std::cout << sr.axis << "=" << r["value"].get<double>() << ": " << r["metric"].get<std::string>() << " = "
                          << r["value_of_metric"].get<double>() << " (exit " << r["exit_code"].get<int>() << ")\n";
            if (!sr.summary["exponent"].is_null()) std::cout << "fitted exponent: " << sr.summary["exponent"].get<double>() << "\n";
            std::cout << "report: " << (dir / "sweep.json").string() << "\n";
            return sr.exit_code;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_ok;
}
