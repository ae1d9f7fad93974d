#pragma once

#include <array>

namespace shortwave {

inline constexpr int kStieltjesCount = 10;

// Published values of gamma_0 .. gamma_9, used only to validate the
// computed table.
extern const std::array<double, kStieltjesCount> kStieltjesReference;

// Stieltjes constants computed once per process by Euler-Maclaurin summation
// in 256-bit arithmetic.  Throws std::runtime_error on first use if any
// value differs from the reference table by more than 1e-10.
const std::array<double, kStieltjesCount>& stieltjes_constants();

// Same computation, uncached, at a chosen cut-off M and number of Bernoulli
// correction terms.  Exposed for convergence tests.
double compute_stieltjes(int n, int cutoff, int bernoulli_terms);

}  // namespace shortwave
