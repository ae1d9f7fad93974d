// experiments.hpp
//
// One pipeline per experiment kind.  Each run writes manifest.json and
// summary.txt plus kind-specific CSVs into the output directory.

#pragma once

#include <json.hpp>
#include <ostream>
#include <stdexcept>
#include <string>

#include "shortwave/config.hpp"

namespace shortwave {

inline constexpr const char* kShortwaveVersion = "0.1.0";

// A failure inside a named pipeline stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct RunOutcome {
    int status = 0;  // 0 when every enforced check passes
    nlohmann::json manifest;
};

// Runs a validated config.  Progress goes to `log`.  Throws StageError on
// runtime failure.
RunOutcome run_experiment(const ExperimentConfig& cfg, std::ostream& log);

nlohmann::json version_info();

}  // namespace shortwave
