#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "shortwave/config.hpp"
#include "shortwave/experiments.hpp"

using namespace shortwave;

namespace {

// Integers may be written as 1e6; anything with a fractional part is rejected.
bool parse_integer(const std::string& text, long double& out) {
    char* end = nullptr;
    out = std::strtold(text.c_str(), &end);
    return end != text.c_str() && *end == '\0' && std::isfinite(out) && out == std::floor(out);
}

bool parse_real(const std::string& text, double& out) {
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end != text.c_str() && *end == '\0';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shortwave: numerical experiments on short-interval sums of L-function coefficients"};
    app.set_help_all_flag("--help-all");

    std::string kind, config_path;
    std::map<std::string, std::string> text;
    std::vector<std::string> criteria;
    bool plot = false, assert_clt = false;

    std::string kinds;
    for (const auto& k : kExperimentKinds) kinds += (kinds.empty() ? "" : ", ") + k;
    app.add_option("kind", kind, "experiment kind: " + kinds);
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    struct Flag {
        const char* name;
        const char* help;
    };
    const std::vector<Flag> valued{
        {"descriptor", "built-in name, descriptor JSON, or coefficient CSV"},
        {"x", "scale X (samples x uniform in [X, 2X])"},
        {"delta", "interval length delta in (0, 1)"},
        {"samples", "sample count M"},
        {"truncation", "dual-sum truncation N (for algebra-check: N of the enumeration)"},
        {"seed", "RNG seed"},
        {"out", "output directory"},
        {"workers", "worker threads; 0 uses SHORTWAVE_WORKERS or all cores"},
        {"k-max", "highest moment"},
        {"m", "root degree for algebra-check"},
        {"k", "tuple length for algebra-check"},
        {"method", "sample statistic: direct or dual"},
        {"bins", "histogram bins"},
        {"runs", "directory of prior runs for kind=report"},
        {"exact-limit", "exact streaming limit for the variance series in the suite"},
    };
    std::map<std::string, CLI::Option*> options;
    for (const auto& f : valued) {
        options[f.name] = app.add_option(std::string("--") + f.name, text[f.name], f.help);
    }
    auto* plot_opt = app.add_flag("--plot", plot, "also write a gnuplot script");
    auto* assert_opt = app.add_flag("--assert-clt", assert_clt, "enforce the CLT thresholds in kind=sample");
    auto* criteria_opt = app.add_option("--criteria", criteria, "acceptance ids for kind=suite (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ExperimentConfig cfg;
    std::vector<std::string> errors;
    if (!config_path.empty()) {
        try {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config file " + config_path);
            auto j = nlohmann::json::parse(in);
            // A manifest from an earlier run carries its config under "config".
            if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
            apply_config_json(j, cfg, errors);
        } catch (const std::exception& e) {
            errors.push_back(std::string("config: ") + e.what());
        }
    }
    if (!kind.empty()) cfg.kind = kind;

    for (const auto& [name, opt] : options) {
        if (opt->count() == 0) continue;
        const std::string& v = text[name];
        auto integer = [&](auto& dst) {
            long double n = 0;
            if (!parse_integer(v, n)) {
                errors.push_back(name + " must be an integer (got '" + v + "')");
                return;
            }
            using T = std::decay_t<decltype(dst)>;
            if constexpr (std::is_unsigned_v<T>) {
                if (n < 0) {
                    errors.push_back(name + " must be a non-negative integer");
                    return;
                }
            }
            dst = static_cast<T>(n);
        };
        auto real = [&](double& dst) {
            if (!parse_real(v, dst)) errors.push_back(name + " must be a number (got '" + v + "')");
        };
        if (name == "descriptor") cfg.descriptor = v;
        else if (name == "x") real(cfg.x);
        else if (name == "delta") real(cfg.delta);
        else if (name == "samples") integer(cfg.samples);
        else if (name == "truncation") {
            std::int64_t n = 0;
            std::size_t before = errors.size();
            integer(n);
            if (errors.size() == before) cfg.truncation = n;
        } else if (name == "seed") integer(cfg.seed);
        else if (name == "out") cfg.out = v;
        else if (name == "workers") integer(cfg.workers);
        else if (name == "k-max") integer(cfg.k_max);
        else if (name == "m") integer(cfg.m);
        else if (name == "k") integer(cfg.k);
        else if (name == "method") cfg.method = v;
        else if (name == "bins") integer(cfg.bins);
        else if (name == "runs") cfg.runs = v;
        else if (name == "exact-limit") integer(cfg.exact_limit);
    }
    if (plot_opt->count() > 0) cfg.plot = plot;
    if (assert_opt->count() > 0) cfg.assert_clt = assert_clt;
    if (criteria_opt->count() > 0) cfg.criteria = criteria;

    for (auto& e : validate(cfg)) errors.push_back(std::move(e));
    if (!errors.empty()) {
        std::cerr << "shortwave: invalid configuration\n";
        for (const auto& e : errors) std::cerr << "  " << e << "\n";
        return 2;
    }

    try {
        auto outcome = run_experiment(cfg, std::cerr);
        std::ifstream summary(cfg.out + "/summary.txt");
        std::cout << summary.rdbuf();
        return outcome.status;
    } catch (const StageError& e) {
        std::cerr << "shortwave: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "shortwave: stage 'run' failed: " << e.what() << "\n";
        return 1;
    }
}
