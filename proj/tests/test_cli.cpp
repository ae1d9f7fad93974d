#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "shortwave/experiments.hpp"

using namespace shortwave;
namespace fs = std::filesystem;

namespace {

bool has_message(const std::vector<std::string>& errors, const std::string& needle) {
    for (const auto& e : errors) {
        if (e.find(needle) != std::string::npos) return true;
    }
    return false;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("shortwave_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validation lists every violated field") {
    ExperimentConfig cfg;
    cfg.kind = "sample";
    CHECK(validate(cfg).empty());
    cfg.samples = 0;
    cfg.x = 0.5;
    cfg.delta = 1.5;
    cfg.truncation = 0;
    cfg.k_max = 9;
    cfg.method = "fast";
    cfg.descriptor = "tau_x";
    auto e = validate(cfg);
    CHECK(has_message(e, "M must be ≥ 1"));
    CHECK(has_message(e, "x must be > 1"));
    CHECK(has_message(e, "delta must lie in (0, 1)"));
    CHECK(has_message(e, "N must be ≥ 1"));
    CHECK(has_message(e, "k-max"));
    CHECK(has_message(e, "method"));
    CHECK(has_message(e, "descriptor"));
    CHECK(e.size() == 7);

    ExperimentConfig bad_kind;
    bad_kind.kind = "plot";
    CHECK(has_message(validate(bad_kind), "kind must be one of"));
}

TEST_CASE("JSON config merging") {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    apply_config_json(nlohmann::json::parse(R"({"kind": "variance", "delta": 0.01, "truncation": 5000,
        "descriptor": "tau_2", "thresholds": {"ks-D": 0.05}, "comment": "ignored"})"),
                      cfg, errors);
    CHECK(errors.empty());
    CHECK(cfg.kind == "variance");
    CHECK(cfg.delta == 0.01);
    CHECK(*cfg.truncation == 5000);
    CHECK(cfg.descriptor == "tau_2");
    CHECK(cfg.clt.ks_D == 0.05);

    apply_config_json(nlohmann::json::parse(R"({"dleta": 0.1, "samples": "many", "seed": -1, "x": 100})"), cfg,
                      errors);
    CHECK(has_message(errors, "unknown config key 'dleta'"));
    CHECK(has_message(errors, "samples must be an integer"));
    CHECK(has_message(errors, "seed must be a non-negative integer"));
    CHECK(cfg.x == 100.0);

    std::vector<std::string> none;
    ExperimentConfig back;
    apply_config_json(to_json(cfg), back, none);
    CHECK(none.empty());
    CHECK(to_json(back) == to_json(cfg));
}

TEST_CASE("algebra-check writes a complete manifest") {
    auto dir = fresh_dir("runs");
    ExperimentConfig cfg;
    cfg.kind = "algebra-check";
    cfg.m = 2;
    cfg.truncation = 5;
    cfg.k = 2;
    cfg.out = (dir / "algebra").string();
    std::ostringstream log;
    auto outcome = run_experiment(cfg, log);
    CHECK(outcome.status == 0);
    auto m = read_json(dir / "algebra" / "manifest.json");
    for (const char* key : {"tool", "kind", "config", "versions", "workers_used", "descriptor", "validity_advisory",
                            "results", "checks", "pass", "outputs", "wall_seconds"}) {
        CHECK_MESSAGE(m.contains(key), key);
    }
    CHECK(m["pass"] == true);
    CHECK(m["results"]["min_alternating_sum_value"].get<double>() == doctest::Approx(0.2360679775));
    CHECK(m["results"]["exact_zeros"] == 10);
    CHECK(m["validity_advisory"].contains("ratio"));
    CHECK(fs::exists(dir / "algebra" / "summary.txt"));
    std::string first = slurp(dir / "algebra" / "diagonal.jsonl");
    CHECK(!first.empty());

    // Re-running from the manifest's config reproduces the data byte for byte.
    ExperimentConfig again;
    std::vector<std::string> errors;
    apply_config_json(m["config"], again, errors);
    REQUIRE(errors.empty());
    again.out = (dir / "algebra_again").string();
    run_experiment(again, log);
    CHECK(slurp(dir / "algebra_again" / "diagonal.jsonl") == first);
}

TEST_CASE("sample run is reproducible and report aggregates runs") {
    auto dir = fresh_dir("sample");
    ExperimentConfig cfg;
    cfg.kind = "sample";
    cfg.descriptor = "gaussian_ideals";
    cfg.x = 1e4;
    cfg.delta = 0.05;
    cfg.samples = 300;
    cfg.workers = 2;
    cfg.out = (dir / "a").string();
    std::ostringstream log;
    auto a = run_experiment(cfg, log);
    CHECK(a.status == 0);
    cfg.out = (dir / "b").string();
    cfg.workers = 1;
    run_experiment(cfg, log);
    CHECK(slurp(dir / "a" / "samples.csv") == slurp(dir / "b" / "samples.csv"));
    CHECK(slurp(dir / "a" / "histogram.csv") == slurp(dir / "b" / "histogram.csv"));
    auto m = read_json(dir / "a" / "manifest.json");
    CHECK(m["validity_advisory"]["advisory"] == true);

    ExperimentConfig rep;
    rep.kind = "report";
    rep.runs = dir.string();
    rep.out = (dir / "report").string();
    auto r = run_experiment(rep, log);
    CHECK(r.status == 0);
    auto rows = read_json(dir / "report" / "report.json");
    CHECK(rows.size() == 2);
    CHECK(rows[0]["kind"] == "sample");
    CHECK(rows[0]["descriptor"] == "gaussian_ideals");
    CHECK(slurp(dir / "report" / "report.txt").find("2 runs") != std::string::npos);
}

TEST_CASE("runtime failures name their stage") {
    auto dir = fresh_dir("fail");
    ExperimentConfig cfg;
    cfg.kind = "variance";
    cfg.descriptor = "tau_2";
    cfg.truncation = 1'000'000'000;
    cfg.out = dir.string();
    std::ostringstream log;
    try {
        run_experiment(cfg, log);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "coefficients");
    }
    CHECK(version_info()["shortwave"] == kShortwaveVersion);
}

}
