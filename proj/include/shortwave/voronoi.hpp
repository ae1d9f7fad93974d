// voronoi.hpp
//
// The remainder Delta_f evaluated exactly through summatory oracles and
// approximately through truncated Voronoi dual sums.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shortwave/coefficients.hpp"
#include "shortwave/descriptor.hpp"
#include "shortwave/numeric.hpp"
#include "shortwave/summatory.hpp"

namespace shortwave {

// m (n/D)^{1/m}.
double breve(std::uint64_t n, const LFunctionDescriptor& d);
DoubleDouble breve_dd(std::uint64_t n, const LFunctionDescriptor& d);

// True below the floor x >= D^{1/(2m)} where the Voronoi formula is stated.
bool below_validity_floor(const LFunctionDescriptor& d, double x);

// Precomputed terms n <= N with lambda(n) != 0.
struct DualSpectrum {
    int m = 2;
    int root_number = 1;
    double phase = 0.0;
    std::int64_t N = 0;
    std::vector<std::uint64_t> n;
    std::vector<double> amplitude;  // lambda(n) / sqrt(n) / sqrt(n_breve)
    std::vector<DoubleDouble> freq;  // n_breve
};

DualSpectrum make_dual_spectrum(const LFunctionDescriptor& d, const CoefficientTable& table, std::int64_t N);
// Same spectrum with the root number negated.
DualSpectrum flip_root_number(DualSpectrum s);

// sin(2 pi (f x mod 1) + phi) with the product reduced in double-double.
double reduced_sin(DoubleDouble f, double x, double phi);

// (w/pi) x^{(m-1)/2} sum_{n<=N} lambda(n)/sqrt(n) sin(2 pi n_breve x + phi)/sqrt(n_breve).
double dual_sum_truncated(const DualSpectrum& s, double x);

// (2w/pi) sum lambda(n)/sqrt(n) sin(pi n_breve delta)/sqrt(n_breve) cos(pi n_breve (2x+delta) + phi).
double delta_approx(const DualSpectrum& s, double x, double delta);
// Values of delta_approx truncated at every N in `cutoffs` (ascending), in one pass.
std::vector<double> delta_approx_prefixes(const DualSpectrum& s, double x, double delta,
                                          const std::vector<std::int64_t>& cutoffs);

// floor(x^m) computed exactly through double-double.
std::uint64_t floor_power(double x, int m);

// S(floor(x^m)) - x^m P(ln x^m).
double delta_direct(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double x);

// (Delta((x+delta)^m) - Delta(x^m)) / (x^{(m-1)/2} sigma).
double delta_pair_normalized(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double x, double delta,
                             double sigma);

// Delta((x+delta)^m)/(x+delta)^{(m-1)/2} - Delta(x^m)/x^{(m-1)/2}.
double delta_short_interval(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double x, double delta);

struct PhaseFit {
    double phi_hat = 0.0;
    double phi_expected = 0.0;
    double phase_error = 0.0;  // |phi_hat - phi| reduced to [0, pi]
    double amplitude = 0.0;    // 1 when the normalization is right
    double residual_ratio = 0.0;
    std::size_t samples = 0;
};

struct SampleRecord {
    double x = 0.0;
    double direct = 0.0;
    double approx = 0.0;
};

// Least-squares fit of phi_hat and amplitude rho in
// Delta(x^m) ~ rho (w/pi) x^{(m-1)/2} sum a_n sin(2 pi n_breve x + phi_hat).
// Throws std::runtime_error("degenerate fit ...") when the design is singular.
PhaseFit phase_diagnostic(const LFunctionDescriptor& d, const SummatoryOracle& oracle, const DualSpectrum& s,
                          double X, std::size_t M, std::uint64_t seed, int workers = 0,
                          std::vector<SampleRecord>* records = nullptr);

struct L2Result {
    std::int64_t N = 0;
    double mean_sq = 0.0;
    double ratio = 0.0;     // mean_sq / sigma_f(delta)^2
    double ratio_se = 0.0;  // standard error of the ratio
};

// Mean over M uniform x in [X, 2X] of (Delta_f(x, delta) - Delta_f(x, delta; N))^2 for every N in
// `cutoffs`, as a ratio to sigma_sq.  Records (for the largest N) are optional.
std::vector<L2Result> l2_deviation(const LFunctionDescriptor& d, const SummatoryOracle& oracle,
                                   const DualSpectrum& s, double X, double delta, double sigma_sq,
                                   const std::vector<std::int64_t>& cutoffs, std::size_t M, std::uint64_t seed,
                                   int workers = 0, std::vector<SampleRecord>* records = nullptr);

void write_records_csv(const std::string& path, const std::vector<SampleRecord>& records);

}  // namespace shortwave
