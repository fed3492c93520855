#pragma once

#include "kramers/config.hpp"
#include "kramers/io.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kramers {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    bool informational = false;   // reported, but not part of the verdict
    std::string summary;
    json data = json::object();
};

struct VerifyOptions {
    std::vector<std::string> overrides;       // dotted assignments on the harmonic preset
    std::vector<double> gammas{25.0, 50.0, 100.0};
    double slow_temperature = 0.5;            // see README: kT = hbar*omega is degenerate
    bool degenerate_check = true;
    std::uint64_t seed = 20240611;
    int threads = 1;
};

// Pass thresholds, fixed in code.
namespace thresholds {
inline constexpr double relaxation_rate_rel = 0.05;
inline constexpr double relaxation_final = 1e-6;
inline constexpr double projector_idempotency = 1e-10;
inline constexpr double projector_routes = 1e-8;
inline constexpr double projector_norm = 1e-8;
inline constexpr double annihilation = 1e-6;
inline constexpr double min_order = 1.7;
inline constexpr double ou_relative = 1e-3;
inline constexpr double gamma_ratio_lo = 0.4;
inline constexpr double gamma_ratio_hi = 0.6;
inline constexpr double gamma_exponent_lo = -1.3;
inline constexpr double gamma_exponent_hi = -0.7;
inline constexpr double liouville_relative = 1e-3;
inline constexpr double conservation = 1e-8;
inline constexpr double free_phase_relative = 1e-6;
inline constexpr double proper_time_relative = 1e-12;
inline constexpr double gibbs_relative = 1e-3;
} // namespace thresholds

std::vector<int> criteria_for_theorem(int theorem);

// Harmonic preset with the overrides applied.
RunConfig verification_base(const VerifyOptions& opts);

// Runs the listed criteria (1..11); extra files land in `out` when given.
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const VerifyOptions& opts, io::OutputSet* out);

struct VerifyReport {
    int theorem = 0;
    std::vector<CriterionResult> results;
    json manifest;
    bool passed() const;
};

// verify {1|2|3}: runs the suite, writes report.json + manifest.json under out_dir.
VerifyReport verify_theorem(int theorem, const VerifyOptions& opts, const std::filesystem::path& out_dir);

// Criterion 12: reruns suites with identical settings and compares manifest checksums.
// Suites found in `reference` are rerun once and compared against it; the rest run twice.
CriterionResult check_determinism(const VerifyOptions& opts, const std::filesystem::path& scratch,
                                  const std::vector<int>& theorems, const std::map<int, json>& reference = {});

std::string format_result_line(const CriterionResult& r);
json to_json(const CriterionResult& r);

} // namespace kramers
