#pragma once

#include <cstdint>
#include <vector>

namespace shortwave {

struct EulerProductResult {
    // prod_p (1-1/p)^{k^2} sum_j C(j+k-1,j)^2 p^{-j} over p <= cutoff.
    double raw_product = 0.0;
    // raw_product / (k^2-1)!: the constant c with sum_{n<=y} tau_k(n)^2 ~ c y (log y)^{k^2-1}.
    double value = 0.0;
    // Bound on |value - limit| from the p > cutoff tail.
    double half_width = 0.0;
    std::int64_t prime_cutoff = 0;
};

// Local factor (1-1/p)^{k^2} sum_j C(j+k-1,j)^2 p^{-j}.
double tau_k_local_factor(int k, std::int64_t p);

EulerProductResult euler_product_c_tau_k(int k, std::int64_t prime_cutoff);

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

}  // namespace shortwave
