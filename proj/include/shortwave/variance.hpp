// variance.hpp
//
// Predicted variance sigma_f(delta)^2, its truncation sigma_f(delta; N)^2,
// Rankin-Selberg constants from data, and the tail check.

#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shortwave/coefficients.hpp"
#include "shortwave/descriptor.hpp"
#include "shortwave/laurent.hpp"

namespace shortwave {

// rs_c m^{rs_r} delta (ln 1/delta)^{rs_r - 1}.
double sigma_sq_asymptotic(const LFunctionDescriptor& d, double delta,
                           const std::optional<Calibration>& cal = std::nullopt);

// (2/pi^2) sum_{n<=N} lambda(n)^2/n sin^2(pi n_breve delta)/n_breve.
double sigma_sq_truncated(const LFunctionDescriptor& d, const CoefficientTable& table, double delta, std::int64_t N);

// sigma_sq_truncated at every N in `cutoffs` (ascending), one pass.
std::vector<double> sigma_sq_truncated_prefixes(const LFunctionDescriptor& d, const CoefficientTable& table,
                                                double delta, const std::vector<std::int64_t>& cutoffs);

struct SeriesTerm {
    double delta = 0.0;
    std::uint64_t N = 0;
    std::uint64_t exact_limit = 0;  // terms n <= exact_limit summed exactly
    double exact_part = 0.0;
    double model_part = 0.0;  // integral over (exact_limit, N] against the fitted mean-square law
    double value = 0.0;
};

struct SeriesRun {
    std::vector<SeriesTerm> terms;
    // sum_{n<=y} lambda(n)^2 ~ y Q(ln y), fitted on the streamed prefix.
    Polynomial mean_square_fit;
    std::uint64_t streamed_to = 0;
};

// sigma_f(delta; N)^2 for N far beyond any stored table: coefficients are
// streamed from a segmented sieve up to min(N, exact_limit); beyond that the
// series is integrated against y Q(ln y), with Q of degree rs_r - 1 fitted by
// least squares on the streamed prefix sums of lambda^2.  Supports tau_k and
// the Gaussian field.
SeriesRun sigma_sq_series(const LFunctionDescriptor& d, const std::vector<double>& deltas,
                          const std::vector<std::uint64_t>& N, std::uint64_t exact_limit);

struct TailCheck {
    std::vector<std::int64_t> N;
    std::vector<double> sigma_sq;
    std::vector<double> increments;  // sigma^2(N_{j+1}) - sigma^2(N_j)
    std::vector<double> bounds;      // N_j^{-1/m} (ln N_j)^{r-1}
    std::vector<double> normalized;  // increments / (C bounds)
    double C = 0.0;
    double slack = 3.0;
    bool pass = true;
};

TailCheck tail_bound_check(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                           std::vector<std::int64_t> N_list, double slack = 3.0);

struct RankinSelbergFit {
    double c_hat = 0.0;
    double spread = 0.0;  // (max - min) / mean over the dyadic points
    bool converged = true;
    std::vector<std::int64_t> y;
    std::vector<double> values;
};

RankinSelbergFit rankin_selberg_fit(const CoefficientTable& table, int r);

Calibration calibrate(const LFunctionDescriptor& d, const CoefficientTable& table);

struct VarianceReport {
    double delta = 0.0;
    double sigma_sq_asymptotic = 0.0;
    double sigma_sq_truncated = 0.0;
    std::int64_t N_used = 0;
    double tail_bound = 0.0;
    double ratio = 0.0;
};

// Default truncation 10^3 delta^{-m}.
std::int64_t default_truncation(const LFunctionDescriptor& d, double delta);

VarianceReport variance_report(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                               std::int64_t N, const std::optional<Calibration>& cal = std::nullopt);

nlohmann::json to_json(const VarianceReport& r);
std::string format_variance_table(const std::vector<VarianceReport>& rows);

}  // namespace shortwave
