// coefficients.hpp
//
// Coefficient tables lambda(1..n_max) with exact backing where available,
// the sieves that build them, CSV ingestion/export, and a segmented
// generator for multiplicative sequences too long to store.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "shortwave/numeric.hpp"

namespace shortwave {

class CoefficientTable {
public:
    // Integer-backed: lambda(n) = exact[n] / scale; exact[0] is ignored.
    static CoefficientTable from_exact(std::string descriptor_id, std::vector<std::int64_t> exact,
                                       double scale);
    // Exact 128-bit values with separately normalized floats (Hecke
    // eigenvalues tau(n) / n^{11/2}).
    static CoefficientTable from_wide_exact(std::string descriptor_id, std::vector<Int128> exact,
                                            std::vector<double> normalized);
    // Float-only table; values[0] is ignored.
    static CoefficientTable from_values(std::string descriptor_id, std::vector<double> values);

    const std::string& descriptor_id() const { return descriptor_id_; }
    std::int64_t n_max() const { return static_cast<std::int64_t>(values_.size()) - 1; }

    double lambda(std::int64_t n) const { return values_[static_cast<std::size_t>(n)]; }
    // Index n holds lambda(n); index 0 holds 0.
    std::span<const double> values() const { return values_; }

    bool has_exact() const { return !exact_.empty() || !wide_exact_.empty(); }
    // Scaled exact value (4 lambda for Gaussian ideals, tau(n) for Ramanujan).
    std::optional<Int128> exact_value(std::int64_t n) const;
    double exact_scale() const { return scale_; }

    // sum_{n<=T} lambda(n) and sum_{n<=T} lambda(n)^2 for 0 <= T <= n_max.
    double prefix_lambda(std::int64_t T) const;
    double prefix_lambda_sq(std::int64_t T) const;
    // Exact scaled prefix sum when the table is integer-backed.
    std::optional<Int128> prefix_exact(std::int64_t T) const;

    // FNV-1a over the %.17g renderings of lambda(1..n_max).
    std::uint64_t checksum() const;

private:
    CoefficientTable() = default;
    void build_float_prefixes();

    std::string descriptor_id_;
    double scale_ = 1.0;
    std::vector<std::int64_t> exact_;
    std::vector<Int128> wide_exact_;
    std::vector<double> values_;
    std::vector<Int128> prefix_exact_;
    std::vector<Int128> prefix_sq_exact_;
    std::vector<double> prefix_;
    std::vector<double> prefix_sq_;
};

// Exact values of a multiplicative function with f(p^a) = local(p, a).
// Throws std::overflow_error naming n and p^a on int64 overflow.
using LocalFactor = std::function<std::int64_t(std::uint64_t p, int a)>;
std::vector<std::int64_t> sieve_multiplicative(std::int64_t N, const LocalFactor& local);

CoefficientTable sieve_tau_k(int k, std::int64_t N);
// Table stores 4 lambda(n) = r_2(n); with lattice_normalization the table
// reports r_2(n) itself.
CoefficientTable sieve_gaussian_ideals(std::int64_t N, bool lattice_normalization = false);
// tau(n) from q prod (1-q^n)^24 via eight sparse products with Jacobi's
// series for prod (1-q^n)^3.
CoefficientTable eta24_coefficients(std::int64_t N);

std::int64_t tau_k_local(int k, int a);
std::int64_t gaussian_local(std::uint64_t p, int a);

CoefficientTable load_coefficients(const std::string& path, const std::string& descriptor_id);
// Writes "n,lambda" CSV and a sidecar JSON with descriptor_id, n_max, checksum.
void export_coefficients(const CoefficientTable& table, const std::string& csv_path,
                         const std::string& json_path);

// Builds the default table for a built-in descriptor id.
CoefficientTable build_table(const std::string& descriptor_id, std::int64_t N);

// Streams f(n) for n in [1, N] in ascending segments without storing the
// whole sequence.  `sink(first_n, values)` receives consecutive blocks.
void for_each_multiplicative_segment(
    std::uint64_t N, const LocalFactor& local,
    const std::function<void(std::uint64_t, std::span<const std::int64_t>)>& sink,
    std::uint64_t segment_length = 1u << 20);

std::uint64_t inverse_mod_2_64(std::uint64_t odd);

// Inlinable form of for_each_multiplicative_segment.
template <class Local, class Sink>
void segmented_multiplicative(std::uint64_t N, Local&& local, Sink&& sink, std::uint64_t segment_length) {
    if (N == 0) return;
    if (segment_length == 0) segment_length = 1u << 20;
    std::uint64_t root = isqrt(N);
    std::vector<std::uint32_t> primes;
    {
        std::vector<bool> composite(root + 1, false);
        for (std::uint64_t i = 2; i <= root; ++i) {
            if (composite[i]) continue;
            primes.push_back(static_cast<std::uint32_t>(i));
            for (std::uint64_t j = i * i; j <= root; j += i) composite[j] = true;
        }
    }
    // Per prime: exact-division inverse, divisibility bound, and f(p^a).
    struct PrimeData {
        std::uint64_t p, inv, lim;
        std::vector<std::int64_t> powers;
    };
    std::vector<PrimeData> pd;
    pd.reserve(primes.size());
    for (std::uint32_t p : primes) {
        PrimeData d{p, p == 2 ? 0 : inverse_mod_2_64(p), UINT64_MAX / p, {0}};
        for (unsigned __int128 q = p; q <= N; q *= p) d.powers.push_back(local(std::uint64_t(p), int(d.powers.size())));
        pd.push_back(std::move(d));
    }
    std::vector<std::uint64_t> rem(segment_length);
    std::vector<std::int64_t> val(segment_length);
    auto overflow = [](std::uint64_t n, std::uint64_t p) {
        throw std::overflow_error("multiplicative sieve overflow at n = " + std::to_string(n) + " (p = " +
                                  std::to_string(p) + ")");
    };
    for (std::uint64_t lo = 1; lo <= N; lo += segment_length) {
        std::uint64_t hi = std::min<std::uint64_t>(N, lo + segment_length - 1);
        std::size_t len = static_cast<std::size_t>(hi - lo + 1);
        for (std::size_t i = 0; i < len; ++i) {
            rem[i] = lo + i;
            val[i] = 1;
        }
        for (const auto& d : pd) {
            std::uint64_t p = d.p;
            if (p * p > hi) break;
            std::uint64_t first = (lo + p - 1) / p * p;
            for (std::uint64_t n = first; n <= hi; n += p) {
                std::size_t i = static_cast<std::size_t>(n - lo);
                std::uint64_t r = rem[i];
                int a;
                if (p == 2) {
                    a = __builtin_ctzll(r);
                    r >>= a;
                } else {
                    r *= d.inv;
                    a = 1;
                    while (r * d.inv <= d.lim) {
                        r *= d.inv;
                        ++a;
                    }
                }
                rem[i] = r;
                if (__builtin_mul_overflow(val[i], d.powers[static_cast<std::size_t>(a)], &val[i])) overflow(n, p);
            }
        }
        for (std::size_t i = 0; i < len; ++i) {
            if (rem[i] > 1) {
                if (__builtin_mul_overflow(val[i], local(rem[i], 1), &val[i])) overflow(lo + i, rem[i]);
            }
        }
        sink(lo, std::span<const std::int64_t>(val.data(), len));
    }
}

}  // namespace shortwave
