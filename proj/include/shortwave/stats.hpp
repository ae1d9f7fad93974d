// stats.hpp
//
// Monte-Carlo sampling of the normalized short-interval statistic and its
// comparison with the standard Gaussian.

#pragma once

#include <cstdint>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "shortwave/descriptor.hpp"
#include "shortwave/summatory.hpp"
#include "shortwave/voronoi.hpp"

namespace shortwave {

struct Summary {
    double mean = 0.0;
    double variance = 0.0;  // population variance
    double skewness = 0.0;
    double kurtosis = 0.0;  // m4 / m2^2, equal to 3 for a Gaussian
    double ks_D = 0.0;
    double ks_p = 1.0;
};

// Moments use pairwise sums in index order, so the result depends only on z.
Summary summarize(std::span<const double> z);

struct SampleRun {
    std::uint64_t seed = 0;
    std::string descriptor_id;
    double X = 0.0;
    double delta = 0.0;
    std::size_t M = 0;
    std::string method;  // "direct" or "dual"
    std::int64_t N = 0;  // truncation for the dual method
    double sigma = 0.0;
    double validity_ratio = 0.0;  // ln(1/delta) / ln X
    bool validity_advisory = false;  // ratio above 1/4
    std::vector<double> x;
    std::vector<double> z;
    Summary summary;
};

inline constexpr double kValidityThreshold = 0.25;

// x_i = X (1 + u_i) with u_i = uniform_at(seed, i).  With `dual` null the
// statistic is delta_pair_normalized; otherwise delta_approx(dual) / sigma.
SampleRun sample_uniform(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double X, double delta,
                         std::size_t M, std::uint64_t seed, double sigma, int workers = 0,
                         const DualSpectrum* dual = nullptr);

struct MomentEstimate {
    int k = 0;
    double moment = 0.0;
    double standard_error = 0.0;
};

// Moments of the studentized sample (population mean and sd) with
// jackknife standard errors.  Needs M >= 30; z constant gives all zeros.
std::vector<MomentEstimate> empirical_moments(std::span<const double> z, int k_max);

// k!/(2^{k/2} (k/2)!) for even k, 0 for odd k.
double gaussian_moment(int k);

// Phi(t) = erfc(-t/sqrt 2)/2.
double cdf_normal(double t);

struct KsResult {
    double D = 0.0;
    double p_value = 1.0;
};

KsResult ks_statistic(std::span<const double> z);
// Asymptotic Kolmogorov tail P(sqrt(M) D_M > lambda).
double kolmogorov_tail(double lambda);

nlohmann::json summary_json(const SampleRun& run);
void write_samples_csv(const std::string& path, const SampleRun& run);
// Columns: lo, hi, count, density, normal_density.
void write_histogram_csv(const std::string& path, std::span<const double> z, int bins, double lo = -5.0,
                         double hi = 5.0);
// Gnuplot commands overlaying the histogram and the normal density.
void write_plot_script(const std::string& path, const std::string& histogram_csv);

}  // namespace shortwave
