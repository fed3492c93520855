// One PASS/FAIL line per acceptance criterion (1-12).
#include "kramers/verification.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <iostream>
#include <map>

using namespace kramers;
namespace fs = std::filesystem;

int main(int argc, char** argv)
{
    CLI::App app{"acceptance suite"};
    std::string out = "acceptance_out";
    std::vector<int> only;
    app.add_option("--out", out, "scratch directory");
    app.add_option("--only", only, "restrict to these theorem suites (1, 2, 3)")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const fs::path root(out);
    fs::remove_all(root);
    const VerifyOptions opts;
    std::vector<int> suites = only.empty() ? std::vector<int>{1, 2, 3} : only;

    std::vector<CriterionResult> results;
    std::map<int, json> manifests;
    for (int th : suites) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto rep = verify_theorem(th, opts, root / ("verify_" + std::to_string(th)));
            manifests[th] = rep.manifest;
            results.insert(results.end(), rep.results.begin(), rep.results.end());
        } catch (const std::exception& e) {
            for (int id : criteria_for_theorem(th))
                results.push_back(CriterionResult{id, "suite " + std::to_string(th), false, false, std::string("error: ") + e.what(), {}});
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "verify " << th << " took " << s << " s\n";
    }
    if (only.empty()) {
        // suite 2 is the long one; rerunning 1 and 3 exercises every output kind
        try {
            results.push_back(check_determinism(opts, root / "determinism", {1, 3}, manifests));
        } catch (const std::exception& e) {
            results.push_back(CriterionResult{12, "determinism", false, false, std::string("error: ") + e.what(), {}});
        }
    }

    bool ok = true;
    for (const auto& r : results) {
        std::cout << format_result_line(r) << "\n";
        if (!r.informational && !r.passed) ok = false;
    }
    std::cout << (ok ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
    return ok ? 0 : 1;
}
