// config.hpp
//
// Experiment configuration: a single JSON document whose keys mirror the
// command-line flags (kebab-case).  Flags override values read from a file.

#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "shortwave/acceptance.hpp"

namespace shortwave {

inline const std::vector<std::string> kExperimentKinds{"sample",  "voronoi-check", "variance", "moments",
                                                       "algebra-check", "window-check", "report", "suite"};

struct ExperimentConfig {
    std::string kind;
    // Built-in name, a descriptor JSON file, or a coefficient CSV with a
    // sidecar JSON naming its descriptor.
    std::string descriptor = "gaussian_ideals";
    double x = 1e6;
    double delta = 0.02;
    std::int64_t samples = 5000;
    std::optional<std::int64_t> truncation;  // N; each kind has its own default
    std::uint64_t seed = 42;
    std::string out = "shortwave-out";
    int workers = 0;
    int k_max = 4;
    int m = 2;
    int k = 3;
    std::string method = "direct";
    int bins = 60;
    bool plot = false;
    bool assert_clt = false;
    std::string runs;  // input directory for kind=report
    std::vector<std::string> criteria;  // subset for kind=suite
    std::uint64_t exact_limit = 1'000'000'000ULL;
    CltThresholds clt;
};

// Merges the keys of `j` into `cfg`.  Type errors and unknown keys are
// appended to `errors`; valid keys are still applied.
void apply_config_json(const nlohmann::json& j, ExperimentConfig& cfg, std::vector<std::string>& errors);

// Every violated field, one message each; empty when the config is valid.
std::vector<std::string> validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace shortwave
