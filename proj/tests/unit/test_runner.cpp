#include "doctest.h"

#include "kramers/errors.hpp"
#include "kramers/runner.hpp"

#include <set>

using namespace kramers;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("kramers_runner_" + name);
    fs::remove_all(p);
    return p;
}

json small_free()
{
    json j = to_json(preset_config("free"));
    j["grid"]["Nx"] = 64;
    j["grid"]["Np"] = 64;
    j["plan"]["t_end"] = 0.1;
    j["plan"]["snapshot_stride"] = 50;
    return j;
}

json small_relaxation()
{
    json j = to_json(preset_config("harmonic"));
    j["grid"]["Nx"] = 64;
    j["grid"]["Np"] = 64;
    j["initial_state"]["cutoff"] = 3;
    return j;
}

std::set<std::string> files_on_disk(const fs::path& root)
{
    std::set<std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out.insert(fs::relative(e.path(), root).generic_string());
    return out;
}

} // namespace

TEST_CASE("a run lists every output with its checksum")
{
    const fs::path dir = scratch("free");
    const auto rr = run(parse_run_config(small_free()), dir);
    CHECK(rr.exit_code == exit_ok);
    const json& m = rr.manifest;
    CHECK(m["verdicts"]["free_phase"]["passed"] == true);
    CHECK(m["derived"]["stable_dt"].contains("binding"));
    CHECK(m["derived"].contains("max_abs_V_over_mc2"));
    CHECK(m["derived"].contains("C"));

    std::set<std::string> listed{"manifest.json"};
    for (const auto& f : m["files"]) {
        listed.insert(f["path"].get<std::string>());
        CHECK(io::sha256_file(dir / f["path"].get<std::string>()) == f["sha256"].get<std::string>());
    }
    CHECK(listed == files_on_disk(dir));
    CHECK(io::read_json(dir / "manifest.json").dump() == m.dump());
}

TEST_CASE("reruns and manifest round trips are bit-identical")
{
    const auto a = run(parse_run_config(small_free()), scratch("a"));
    const auto b = run(parse_run_config(small_free()), scratch("b"));
    CHECK(a.manifest["files"] == b.manifest["files"]);
    const auto c = run(parse_run_config(a.manifest["resolved_config"]), scratch("c"));
    CHECK(a.manifest["files"] == c.manifest["files"]);
}

TEST_CASE("relaxation scenario")
{
    const auto rr = run(parse_run_config(small_relaxation()), scratch("relax"));
    CHECK(rr.exit_code == exit_ok);
    CHECK(rr.manifest["metrics"]["fitted_rate"].get<double>() == doctest::Approx(5.0).epsilon(0.05));
    CHECK(fs::exists(rr.out_dir / "residual.csv"));
}

TEST_CASE("divergence gives exit 1 with partial outputs")
{
    json j = small_relaxation();
    j["scenario"] = "custom";
    j["params"]["gamma"] = 0.0;
    j["plan"] = {{"scheme", "rk4_full"}, {"dt", 0.5}, {"t_end", 50.0}, {"snapshot_stride", 0}, {"allow_unstable", true}};
    const auto rr = run(parse_run_config(j), scratch("diverge"));
    CHECK(rr.exit_code == exit_error);
    CHECK(rr.manifest["partial"] == true);
    CHECK(rr.manifest["status"] == "error");
}

TEST_CASE("scenario preconditions are reported as errors")
{
    json j = small_free();
    j["params"]["gamma"] = 1.0;
    const auto rr = run(parse_run_config(j), scratch("precond"));
    CHECK(rr.exit_code == exit_error);
    CHECK(rr.manifest["error"].get<std::string>().find("free_phase_check") != std::string::npos);
}

TEST_CASE("sweeps")
{
    CHECK_THROWS_AS(sweep(small_relaxation(), "gamma", {}, scratch("empty")), ConfigError);
    CHECK_THROWS_AS(sweep(small_relaxation(), "nonsense", {1.0}, scratch("axis")), ConfigError);
    CHECK(resolve_axis(small_relaxation(), "Np") == "grid.Np");

    json j = small_relaxation();
    const fs::path dir = scratch("gamma");
    const auto sr = sweep(j, "gamma", {2.0, 4.0, 8.0}, dir, 2);
    CHECK(sr.axis == "params.gamma");
    CHECK(sr.runs.size() == 3);
    for (const auto& r : sr.runs) CHECK(r.exit_code == exit_ok);
    CHECK(fs::exists(dir / "sweep.json"));
    CHECK(fs::exists(dir / "run_000" / "manifest.json"));
    CHECK(std::isfinite(sr.report.exponent));

    json l = small_free();
    l["scenario"] = "liouville_limit";
    l["potential"] = {{"kind", "harmonic"}, {"k", 1.0}};
    l["grid"] = {{"Lx", 12.0}, {"Nx", 32}, {"Pmax", 8.0}, {"Np", 32}, {"d", 1}, {"x_min", -6.0}};
    l["initial_state"] = {{"kind", "random_smooth"}, {"seed", 3}, {"cutoff", 3}, {"bumps", 3}, {"p_spread", 1.0},
                          {"width_min", 0.6}, {"width_max", 1.0}, {"x_envelope", 1.0}, {"x_center", 0.0}};
    l["plan"] = {{"scheme", "rk4_full"}, {"dt", 1.0 / 1024}, {"t_end", 0.25}, {"snapshot_stride", 0}, {"allow_unstable", true}};
    const auto conv = sweep(l, "grid.Np", {32, 64, 128}, scratch("np"));
    CHECK(conv.summary.contains("convergence_order"));
}
