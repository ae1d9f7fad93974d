#include "shortwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "shortwave/descriptor.hpp"

namespace shortwave {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <class T>
void read_number(const nlohmann::json& v, const std::string& key, T& dst, std::vector<std::string>& errors) {
    if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) {
            errors.push_back(key + " must be a number");
            return;
        }
        dst = v.get<T>();
    } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) {
            errors.push_back(key + " must be a non-negative integer");
            return;
        }
        dst = v.get<T>();
    } else {
        if (!v.is_number_integer()) {
            errors.push_back(key + " must be an integer");
            return;
        }
        dst = v.get<T>();
    }
}

void read_string(const nlohmann::json& v, const std::string& key, std::string& dst, std::vector<std::string>& errors) {
    if (!v.is_string()) {
        errors.push_back(key + " must be a string");
        return;
    }
    dst = v.get<std::string>();
}

void read_bool(const nlohmann::json& v, const std::string& key, bool& dst, std::vector<std::string>& errors) {
    if (!v.is_boolean()) {
        errors.push_back(key + " must be true or false");
        return;
    }
    dst = v.get<bool>();
}

void apply_thresholds(const nlohmann::json& j, CltThresholds& t, std::vector<std::string>& errors) {
    if (!j.is_object()) {
        errors.push_back("thresholds must be an object");
        return;
    }
    for (const auto& [key, v] : j.items()) {
        std::string name = "thresholds." + key;
        if (key == "mean") read_number(v, name, t.mean, errors);
        else if (key == "variance") read_number(v, name, t.variance, errors);
        else if (key == "skewness") read_number(v, name, t.skewness, errors);
        else if (key == "kurtosis") read_number(v, name, t.kurtosis, errors);
        else if (key == "ks-D") read_number(v, name, t.ks_D, errors);
        else if (key == "seeds") read_number(v, name, t.seeds, errors);
        else if (key == "required") read_number(v, name, t.required, errors);
        else errors.push_back("unknown config key '" + name + "'");
    }
}

}  // namespace

void apply_config_json(const nlohmann::json& j, ExperimentConfig& cfg, std::vector<std::string>& errors) {
    if (!j.is_object()) {
        errors.push_back("config must be a JSON object");
        return;
    }
    for (const auto& [key, v] : j.items()) {
        if (key == "kind") read_string(v, key, cfg.kind, errors);
        else if (key == "descriptor") read_string(v, key, cfg.descriptor, errors);
        else if (key == "x") read_number(v, key, cfg.x, errors);
        else if (key == "delta") read_number(v, key, cfg.delta, errors);
        else if (key == "samples") read_number(v, key, cfg.samples, errors);
        else if (key == "truncation") {
            if (v.is_null()) {
                cfg.truncation.reset();
            } else {
                std::int64_t n = 0;
                std::size_t before = errors.size();
                read_number(v, key, n, errors);
                if (errors.size() == before) cfg.truncation = n;
            }
        } else if (key == "seed") read_number(v, key, cfg.seed, errors);
        else if (key == "out") read_string(v, key, cfg.out, errors);
        else if (key == "workers") read_number(v, key, cfg.workers, errors);
        else if (key == "k-max") read_number(v, key, cfg.k_max, errors);
        else if (key == "m") read_number(v, key, cfg.m, errors);
        else if (key == "k") read_number(v, key, cfg.k, errors);
        else if (key == "method") read_string(v, key, cfg.method, errors);
        else if (key == "bins") read_number(v, key, cfg.bins, errors);
        else if (key == "plot") read_bool(v, key, cfg.plot, errors);
        else if (key == "assert-clt") read_bool(v, key, cfg.assert_clt, errors);
        else if (key == "runs") read_string(v, key, cfg.runs, errors);
        else if (key == "exact-limit") read_number(v, key, cfg.exact_limit, errors);
        else if (key == "thresholds") apply_thresholds(v, cfg.clt, errors);
        else if (key == "criteria") {
            if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_string(); })) {
                errors.push_back("criteria must be an array of strings");
            } else {
                cfg.criteria = v.get<std::vector<std::string>>();
            }
        } else if (key == "versions" || key == "comment") {
            // Manifest echoes carry these; they are ignored on input.
        } else {
            errors.push_back("unknown config key '" + key + "'");
        }
    }
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
    std::vector<std::string> e;
    if (std::find(kExperimentKinds.begin(), kExperimentKinds.end(), cfg.kind) == kExperimentKinds.end()) {
        std::string list;
        for (const auto& k : kExperimentKinds) list += (list.empty() ? "" : ", ") + k;
        e.push_back("kind must be one of " + list + " (got '" + cfg.kind + "')");
    }
    if (!(cfg.x > 1.0) || !std::isfinite(cfg.x)) e.push_back("x must be > 1");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) e.push_back("delta must lie in (0, 1)");
    if (cfg.samples < 1) e.push_back("M must be ≥ 1 (--samples)");
    if (cfg.truncation && *cfg.truncation < 1) e.push_back("N must be ≥ 1 (--truncation)");
    if (cfg.workers < 0) e.push_back("workers must be ≥ 0");
    if (cfg.k_max < 1 || cfg.k_max > 8) e.push_back("k-max must lie in [1, 8]");
    if (cfg.m < 2) e.push_back("m must be ≥ 2");
    if (cfg.k < 1) e.push_back("k must be ≥ 1");
    if (cfg.method != "direct" && cfg.method != "dual") e.push_back("method must be 'direct' or 'dual'");
    if (cfg.bins < 1) e.push_back("bins must be ≥ 1");
    if (cfg.out.empty()) e.push_back("out must not be empty");
    if (cfg.exact_limit < 1) e.push_back("exact-limit must be ≥ 1");
    const auto& t = cfg.clt;
    if (!(t.mean > 0 && t.variance > 0 && t.skewness > 0 && t.kurtosis > 0 && t.ks_D > 0)) {
        e.push_back("thresholds must all be > 0");
    }
    if (t.seeds < 1 || t.required < 1 || t.required > t.seeds) {
        e.push_back("thresholds.required must lie in [1, thresholds.seeds]");
    }
    bool uses_descriptor = cfg.kind != "report" && cfg.kind != "suite" && cfg.kind != "algebra-check";
    if (uses_descriptor) {
        const auto& name = cfg.descriptor;
        if (ends_with(name, ".csv") || ends_with(name, ".json")) {
            if (!std::filesystem::exists(name)) e.push_back("descriptor file not found: " + name);
        } else {
            try {
                builtin_descriptor(name);
            } catch (const std::exception& ex) {
                e.push_back(std::string("descriptor: ") + ex.what());
            }
        }
    }
    return e;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j{{"kind", cfg.kind},
                     {"descriptor", cfg.descriptor},
                     {"x", cfg.x},
                     {"delta", cfg.delta},
                     {"samples", cfg.samples},
                     {"truncation", cfg.truncation ? nlohmann::json(*cfg.truncation) : nlohmann::json(nullptr)},
                     {"seed", cfg.seed},
                     {"out", cfg.out},
                     {"workers", cfg.workers},
                     {"k-max", cfg.k_max},
                     {"m", cfg.m},
                     {"k", cfg.k},
                     {"method", cfg.method},
                     {"bins", cfg.bins},
                     {"plot", cfg.plot},
                     {"assert-clt", cfg.assert_clt},
                     {"runs", cfg.runs},
                     {"criteria", cfg.criteria},
                     {"exact-limit", cfg.exact_limit},
                     {"thresholds",
                      {{"mean", cfg.clt.mean},
                       {"variance", cfg.clt.variance},
                       {"skewness", cfg.clt.skewness},
                       {"kurtosis", cfg.clt.kurtosis},
                       {"ks-D", cfg.clt.ks_D},
                       {"seeds", cfg.clt.seeds},
                       {"required", cfg.clt.required}}}};
    return j;
}

}  // namespace shortwave
