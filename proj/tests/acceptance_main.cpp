// Runs the acceptance battery and prints one PASS/FAIL line per criterion.
//
//   acceptance [--strict] [--json path] [A1 A5 ...]
//
// Exit status is 1 when a check could not run.  With --strict a FAIL also
// gives status 1; without it a FAIL is reported and the run still succeeds.

#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "shortwave/acceptance.hpp"

using namespace shortwave;

int main(int argc, char** argv) {
    bool strict = false;
    std::string json_path;
    std::vector<std::string> ids;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) {
            strict = true;
        } else if (std::strcmp(argv[i], "--json") == 0 && i + 1 < argc) {
            json_path = argv[++i];
        } else {
            ids.emplace_back(argv[i]);
        }
    }
    AcceptanceOptions opt;
    std::vector<CriterionResult> results;
    try {
        results = run_acceptance(opt, ids, [](const CriterionResult& r) { std::cout << format_result_line(r) << std::endl; });
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << "\n";
        return 1;
    }
    std::cout << "\n" << format_summary_table(results);
    if (!json_path.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : results) arr.push_back(to_json(r));
        std::ofstream(json_path) << arr.dump(2) << "\n";
    }
    bool errors = false, failures = false;
    for (const auto& r : results) {
        errors = errors || r.error;
        failures = failures || !r.pass;
    }
    if (errors) return 1;
    return strict && failures ? 1 : 0;
}
