// algebra.hpp
//
// m-th-power-free kernels, exact zero tests for signed sums of m-th roots,
// interval lower bounds for the nonzero ones, and the diagonal moment
// oracle built on them.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "shortwave/coefficients.hpp"
#include "shortwave/descriptor.hpp"

namespace shortwave {

struct KernelDecomposition {
    std::uint64_t n = 1;
    int m = 2;
    std::uint64_t q = 1;
    std::uint64_t r = 1;
};

inline constexpr std::uint64_t kFactorizationBudget = 1'000'000'000'000ULL;

// n = q r^m with q m-th-power-free; trial division up to n <= 10^12.
KernelDecomposition powerfree_kernel(std::uint64_t n, int m);

// Kernels of 1..N by a smallest-prime-factor sieve; index 0 unused.
std::vector<KernelDecomposition> powerfree_kernels_upto(std::uint64_t N, int m);

// Exact test of sum_j eps_j n_j^{1/m} == 0 via kernel grouping.
bool is_zero_alternating(int m, const std::vector<std::uint64_t>& ns, const std::vector<int>& eps);

struct EnumerationLimits {
    std::uint64_t max_N = 20;
    int max_k = 4;
    double max_tuples = 1e9;
    // Lift max_N / max_k; max_tuples still applies.
    bool override_defaults = false;
};

struct MinAlternatingSum {
    int m = 2;
    std::uint64_t N = 0;
    int k = 0;
    std::string min_abs;        // decimal rendering of the certified lower end
    double min_abs_value = 0.0;
    std::string bound;          // (k N^{1/m})^{-(m^k - 1)}
    double log10_bound = 0.0;
    bool found_nonzero = false;
    bool above_bound = false;
    std::vector<std::uint64_t> witness_n;
    std::vector<int> witness_eps;
    std::uint64_t tuples = 0;
    std::uint64_t exact_zeros = 0;
    int max_precision_used = 0;
};

// Full enumeration over {+-1}^k x [N]^k.  Magnitudes use MPFR interval
// arithmetic starting at 128 bits and doubling to 1024 until the interval
// excludes 0.
MinAlternatingSum min_alternating_sum(int m, std::uint64_t N, int k, const EnumerationLimits& limits = {});

struct DiagonalGroup {
    std::uint64_t q = 1;
    std::vector<int> S;  // 0-based positions in [k]
    std::vector<int> eps;
    std::vector<std::uint64_t> r;
};

struct DiagonalTuple {
    std::vector<std::uint64_t> n;
    std::vector<int> eps;
    std::vector<DiagonalGroup> groups;
};

// Every (eps, n) in {+-1}^k x [N]^k with sum eps_j n_j^{1/m} = 0, grouped by kernel.
void enumerate_diagonal(int m, std::uint64_t N, int k, const std::function<void(const DiagonalTuple&)>& emit,
                        const EnumerationLimits& limits = {});
std::uint64_t count_diagonal(int m, std::uint64_t N, int k, const EnumerationLimits& limits = {});
// One JSON object per line.
void write_diagonal_jsonl(std::ostream& out, int m, std::uint64_t N, int k, const EnumerationLimits& limits = {});

// Same count, but zeroness decided numerically: |sum| < 1e-50 at 256 bits.
std::uint64_t count_diagonal_numeric(int m, std::uint64_t N, int k);

struct MomentResult {
    double value = 0.0;       // real part
    double imag = 0.0;        // must vanish
    std::size_t kernels = 0;  // number of kernel classes with a term
};

// Diagonal value of the k-th moment of Delta_f(x, delta; N):
// (w/pi)^k sum over zero-frequency (eps, n) of prod_j b(n_j) e^{i eps_j phi},
// b(n) = lambda(n)/sqrt(n) sin(pi n_breve delta)/sqrt(n_breve).  Kernel
// classes combine through their exponential generating functions.  Throws
// if the imaginary part exceeds 1e-12 relative.
MomentResult moment_oracle(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                           std::int64_t N, int k);

// The same quantity by enumerating all tuples; only for small N.
MomentResult moment_oracle_enumerated(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                                      std::int64_t N, int k, const std::vector<int>& relabel = {});

}  // namespace shortwave
