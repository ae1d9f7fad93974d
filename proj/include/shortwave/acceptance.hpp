// acceptance.hpp
//
// The acceptance battery A1..A10.  Each check returns a structured verdict;
// none of them throws for a failed comparison.

#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

namespace shortwave {

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    // The check itself threw; `detail` holds the message.
    bool error = false;
    std::string detail;
    nlohmann::json data;
    double seconds = 0.0;
};

// Engineering thresholds for the desk-scale CLT check.
struct CltThresholds {
    double mean = 0.05;
    double variance = 0.15;
    double skewness = 0.15;
    double kurtosis = 0.5;
    double ks_D = 0.03;
    int seeds = 5;
    int required = 4;
};

struct AcceptanceOptions {
    int workers = 0;
    // Coefficients streamed exactly up to this index in A3.
    std::uint64_t series_exact_limit = 1'000'000'000ULL;
    CltThresholds clt;
    std::uint64_t seed = 20240601;
};

CriterionResult check_a1(const AcceptanceOptions& opt);
CriterionResult check_a2(const AcceptanceOptions& opt);
CriterionResult check_a3(const AcceptanceOptions& opt);
CriterionResult check_a4(const AcceptanceOptions& opt);
CriterionResult check_a5(const AcceptanceOptions& opt);
CriterionResult check_a6(const AcceptanceOptions& opt);
CriterionResult check_a7(const AcceptanceOptions& opt);
CriterionResult check_a8(const AcceptanceOptions& opt);
CriterionResult check_a9(const AcceptanceOptions& opt);
CriterionResult check_a10(const AcceptanceOptions& opt);

// Runs the selected ids ("A1".."A10"; empty means all) in order.  An
// exception inside a check becomes a FAIL carrying the message.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<std::string>& ids = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result_line(const CriterionResult& r);
std::string format_summary_table(const std::vector<CriterionResult>& results);
nlohmann::json to_json(const CriterionResult& r);

}  // namespace shortwave
