#include "shortwave/euler_product.hpp"

#include <cmath>
#include <stdexcept>

#include "shortwave/numeric.hpp"

namespace shortwave {

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

namespace {

// log of the local factor, computed as k^2 log1p(-x) + log1p(sum_{j>=1} ...)
// so that the O(1/p) parts cancel without loss.
double log_local_factor(int k, double x) {
    double tail = 0.0;
    double binom = 1.0;  // C(j+k-1, j)
    double xp = 1.0;
    for (int j = 1; j < 10000; ++j) {
        binom = binom * (j + k - 1) / j;
        xp *= x;
        double term = binom * binom * xp;
        tail += term;
        if (term < 1e-17 * tail) break;
    }
    return static_cast<double>(k) * k * std::log1p(-x) + std::log1p(tail);
}

}  // namespace

double tau_k_local_factor(int k, std::int64_t p) {
    if (k < 2 || p < 2) throw std::invalid_argument("tau_k_local_factor: need k >= 2, p >= 2");
    return std::exp(log_local_factor(k, 1.0 / static_cast<double>(p)));
}

EulerProductResult euler_product_c_tau_k(int k, std::int64_t prime_cutoff) {
    if (k < 2) throw std::invalid_argument("euler_product_c_tau_k: k must be >= 2");
    if (prime_cutoff < 2 || prime_cutoff > 4'000'000'000LL) {
        throw std::invalid_argument("euler_product_c_tau_k: prime cutoff out of range");
    }
    CompensatedSum log_sum;
    for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(prime_cutoff))) {
        log_sum.add(log_local_factor(k, 1.0 / p));
    }
    EulerProductResult r;
    r.prime_cutoff = prime_cutoff;
    r.raw_product = std::exp(log_sum.value());
    double factorial = 1.0;
    for (int i = 2; i <= k * k - 1; ++i) factorial *= i;
    r.value = r.raw_product / factorial;
    // sum_{p > P} k^4/p^2 <= k^4/(P ln P) bounds the missing log mass.
    double P = static_cast<double>(prime_cutoff);
    double k4 = std::pow(static_cast<double>(k), 4);
    double log_tail = k4 / (P * std::log(P));
    r.half_width = r.value * std::expm1(log_tail);
    return r;
}

}  // namespace shortwave
