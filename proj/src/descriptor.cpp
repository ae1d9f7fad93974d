#include "shortwave/descriptor.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shortwave/euler_product.hpp"
#include "shortwave/stieltjes.hpp"

namespace shortwave {

double reduce_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r;
}

LFunctionDescriptor::LFunctionDescriptor(DescriptorFields fields) : f_(std::move(fields)) {
    std::string errors;
    if (f_.id.empty()) errors += " id is empty;";
    if (f_.m < 2) errors += " m must be >= 2;";
    if (!(f_.conductor > 0.0)) errors += " conductor D must be > 0;";
    if (f_.root_number != 1 && f_.root_number != -1) errors += " root number w must be +1 or -1;";
    if (static_cast<int>(f_.kappa_re.size()) != f_.m) errors += " kappa_re must have m entries;";
    if (f_.pole_order < 0) errors += " pole_order must be >= 0;";
    if (f_.rs_r < 1) errors += " rs_r must be >= 1;";
    if (f_.rs_c && !(*f_.rs_c > 0.0)) errors += " rs_c must be > 0;";
    if (f_.pole_order == 0) {
        for (double c : f_.main_term_poly) {
            if (c != 0.0) {
                errors += " main_term_poly must vanish when pole_order = 0;";
                break;
            }
        }
        f_.main_term_poly.clear();
    } else if (static_cast<int>(f_.main_term_poly.size()) != f_.pole_order) {
        errors += " main_term_poly must have degree pole_order - 1;";
    }
    if (!errors.empty()) throw std::invalid_argument("invalid descriptor '" + f_.id + "':" + errors);

    for (double k : f_.kappa_re) weight_ += k;
    phase_ = reduce_phase(std::numbers::pi / 2.0 * ((f_.m - 1) / 2.0 - weight_));
}

double LFunctionDescriptor::main_term(double y) const {
    if (f_.main_term_poly.empty() || y <= 0.0) return 0.0;
    return y * evaluate_polynomial(f_.main_term_poly, std::log(y));
}

double LFunctionDescriptor::main_term_difference(double y0, double y1) const {
    const auto& p = f_.main_term_poly;
    if (p.empty()) return 0.0;
    double dy = y1 - y0;
    double u0 = std::log(y0);
    double du = std::log1p(dy / y0);
    double u1 = u0 + du;
    // P(u1) - P(u0) = du * sum_j c_j sum_{i<j} u1^i u0^{j-1-i}
    double dp = 0.0;
    for (std::size_t j = 1; j < p.size(); ++j) {
        double s = 0.0;
        double a = 1.0;
        for (std::size_t i = 0; i < j; ++i) {
            s += a * std::pow(u0, static_cast<double>(j - 1 - i));
            a *= u1;
        }
        dp += p[j] * s;
    }
    dp *= du;
    return dy * evaluate_polynomial(p, u1) + y0 * dp;
}

nlohmann::json LFunctionDescriptor::to_json() const {
    nlohmann::json j;
    j["id"] = f_.id;
    j["m"] = f_.m;
    j["D"] = f_.conductor;
    j["kappa_re"] = f_.kappa_re;
    j["weight_k"] = weight_;
    j["w"] = f_.root_number;
    j["phi"] = phase_;
    j["pole_order"] = f_.pole_order;
    if (f_.rs_c) {
        j["rs_c"] = *f_.rs_c;
    } else {
        j["rs_c"] = "estimate";
    }
    j["rs_r"] = f_.rs_r;
    j["main_term_poly"] = f_.main_term_poly;
    return j;
}

LFunctionDescriptor LFunctionDescriptor::from_json(const nlohmann::json& j) {
    DescriptorFields f;
    f.id = j.at("id").get<std::string>();
    f.m = j.at("m").get<int>();
    f.conductor = j.at("D").get<double>();
    f.kappa_re = j.at("kappa_re").get<std::vector<double>>();
    f.root_number = j.at("w").get<int>();
    f.pole_order = j.at("pole_order").get<int>();
    const auto& c = j.at("rs_c");
    if (c.is_number()) f.rs_c = c.get<double>();
    f.rs_r = j.at("rs_r").get<int>();
    f.main_term_poly = j.at("main_term_poly").get<std::vector<double>>();
    LFunctionDescriptor d(std::move(f));
    if (j.contains("weight_k") && std::fabs(j["weight_k"].get<double>() - d.weight()) > 1e-12) {
        throw std::invalid_argument("descriptor '" + d.id() + "': weight_k differs from sum of kappa_re");
    }
    if (j.contains("phi")) {
        double diff = reduce_phase(j["phi"].get<double>() - d.phase());
        if (std::fabs(diff) > 1e-12) {
            throw std::invalid_argument("descriptor '" + d.id() + "': phi inconsistent with m and weight");
        }
    }
    return d;
}

LFunctionDescriptor tau_k_descriptor(int k) {
    if (k < 2) throw std::invalid_argument("tau_k: k must be >= 2");
    if (k - 2 > kStieltjesCount - 1) {
        throw std::out_of_range("tau_k: k too large for the Stieltjes table");
    }
    DescriptorFields f;
    f.id = "tau_" + std::to_string(k);
    f.m = k;
    f.conductor = 1.0;
    f.kappa_re.assign(static_cast<std::size_t>(k), 0.0);
    f.root_number = 1;
    f.pole_order = k;
    f.rs_r = k * k;
    if (k == 2) {
        f.rs_c = 1.0 / (std::numbers::pi * std::numbers::pi);
    } else {
        f.rs_c = euler_product_c_tau_k(k, 1'000'000).value;
    }
    f.main_term_poly = main_term_polynomial(laurent_pow(zeta_laurent(k - 2), k));
    return LFunctionDescriptor(std::move(f));
}

LFunctionDescriptor builtin_descriptor(std::string_view name) {
    if (name.starts_with("tau_")) {
        auto digits = name.substr(4);
        int k = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
            throw std::invalid_argument("unknown descriptor: " + std::string(name));
        }
        return tau_k_descriptor(k);
    }
    DescriptorFields f;
    if (name == "gaussian_ideals" || name == "gaussian_lattice") {
        bool lattice = name == "gaussian_lattice";
        f.id = std::string(name);
        f.m = 2;
        f.conductor = 4.0;
        f.kappa_re = {0.0, 1.0};
        f.root_number = 1;
        f.pole_order = 1;
        f.rs_r = 2;
        // r_2 = 4 lambda: residue and Rankin-Selberg constant scale by 4 and 16.
        double residue = std::numbers::pi / 4.0 * (lattice ? 4.0 : 1.0);
        f.rs_c = lattice ? 4.0 : 0.25;
        f.main_term_poly = main_term_polynomial(LaurentSeries(-1, {residue}));
        return LFunctionDescriptor(std::move(f));
    }
    if (name == "ramanujan") {
        f.id = "ramanujan";
        f.m = 2;
        f.conductor = 1.0;
        f.kappa_re = {5.5, 6.5};
        f.root_number = 1;
        f.pole_order = 0;
        f.rs_r = 1;
        return LFunctionDescriptor(std::move(f));
    }
    throw std::invalid_argument("unknown descriptor: " + std::string(name));
}

double resolve_rs_c(const LFunctionDescriptor& d, const std::optional<Calibration>& cal) {
    if (d.rs_c()) return *d.rs_c();
    if (cal && cal->descriptor_id == d.id()) return cal->rs_c;
    throw std::invalid_argument("Rankin-Selberg constant for '" + d.id() +
                                "' is unresolved: calibrate it from coefficient data");
}

}  // namespace shortwave
