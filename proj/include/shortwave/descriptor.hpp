// descriptor.hpp
//
// Immutable description of one self-dual L-function instance: degree,
// conductor, gamma shifts, root number, dual-sum phase, residue main term
// and Rankin-Selberg data.

#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shortwave/laurent.hpp"

namespace shortwave {

struct DescriptorFields {
    std::string id;
    int m = 2;
    double conductor = 1.0;
    std::vector<double> kappa_re;
    int root_number = 1;
    int pole_order = 0;
    // Empty when c_f must be estimated from coefficient data.
    std::optional<double> rs_c;
    int rs_r = 1;
    Polynomial main_term_poly;
};

class LFunctionDescriptor {
public:
    // Validates every invariant and derives weight and phase.
    explicit LFunctionDescriptor(DescriptorFields fields);

    const std::string& id() const { return f_.id; }
    int m() const { return f_.m; }
    double conductor() const { return f_.conductor; }
    const std::vector<double>& kappa_re() const { return f_.kappa_re; }
    double weight() const { return weight_; }
    int root_number() const { return f_.root_number; }
    // (pi/2)((m-1)/2 - weight) reduced to (-pi, pi].
    double phase() const { return phase_; }
    int pole_order() const { return f_.pole_order; }
    const std::optional<double>& rs_c() const { return f_.rs_c; }
    int rs_r() const { return f_.rs_r; }
    const Polynomial& main_term_poly() const { return f_.main_term_poly; }

    // y * P(ln y); zero for entire L-functions.
    double main_term(double y) const;
    // MainTerm(y1) - MainTerm(y0) without cancelling the y-linear part.
    double main_term_difference(double y0, double y1) const;

    nlohmann::json to_json() const;
    static LFunctionDescriptor from_json(const nlohmann::json& j);

private:
    DescriptorFields f_;
    double weight_ = 0.0;
    double phase_ = 0.0;
};

// Reduces an angle to (-pi, pi].
double reduce_phase(double phi);

// Built-ins: "tau_<k>" (k >= 2), "gaussian_ideals", "gaussian_lattice"
// (the same field with lattice-point normalization r_2(n)), "ramanujan".
LFunctionDescriptor builtin_descriptor(std::string_view name);
LFunctionDescriptor tau_k_descriptor(int k);

// Calibrated Rankin-Selberg constant for descriptors whose rs_c is an
// estimate.  Kept apart from the descriptor, which never changes.
struct Calibration {
    std::string descriptor_id;
    long long n_max = 0;
    double rs_c = 0.0;
    double spread = 0.0;
};

// rs_c from the descriptor, else from the calibration; throws if neither.
double resolve_rs_c(const LFunctionDescriptor& d, const std::optional<Calibration>& cal = std::nullopt);

}  // namespace shortwave
