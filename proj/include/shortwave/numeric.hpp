// numeric.hpp
//
// Low-level arithmetic shared by every module: double-double numbers for
// phase reduction, exact integer roots, 128-bit helpers, compensated and
// pairwise summation, the per-index RNG and a deterministic parallel loop.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace shortwave {

using Int128 = __int128;
using UInt128 = unsigned __int128;

std::string to_string(Int128 v);
Int128 parse_int128(const std::string& s);

inline double to_double(Int128 v) { return static_cast<double>(static_cast<long double>(v)); }

// ---------------------------------------------------------------------------
// Double-double arithmetic (unevaluated sum hi + lo, |lo| <= ulp(hi)/2).
// ---------------------------------------------------------------------------

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

inline DoubleDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
    double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * DoubleDouble(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DoubleDouble(q2);
    double q3 = r.hi / b.hi;
    DoubleDouble q = quick_two_sum(q1, q2);
    return q + DoubleDouble(q3);
}

DoubleDouble dd_sqrt(DoubleDouble a);
// Real m-th root of a > 0, refined by Newton steps in double-double.
DoubleDouble dd_root(DoubleDouble a, int m);
DoubleDouble dd_pow(DoubleDouble a, int m);
DoubleDouble dd_floor(DoubleDouble a);
// Fractional part in [0, 1), rounded to double.
double dd_frac(DoubleDouble a);

// ---------------------------------------------------------------------------
// Exact integer roots.
// ---------------------------------------------------------------------------

// floor(sqrt(n)): float seed, one integer Newton step, then correction.
std::uint64_t isqrt(std::uint64_t n);
// floor(cbrt(n)).
std::uint64_t icbrt(std::uint64_t n);

// ---------------------------------------------------------------------------
// Summation.
// ---------------------------------------------------------------------------

// Neumaier variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Recursive pairwise summation with a fixed split rule; the result depends
// only on the input order, never on thread count.
double pairwise_sum(std::span<const double> xs);

// ---------------------------------------------------------------------------
// Per-index random stream and parallel loop.
// ---------------------------------------------------------------------------

// Uniform double in [0, 1) for sample index `index` under `seed`.  The
// stream is a std::mt19937_64 seeded through std::seed_seq with the four
// 32-bit words (seed lo, seed hi, index lo, index hi); the first draw is
// reduced to 53 bits.  Both components are fully specified by the
// standard, so values are identical across platforms and worker counts.
double uniform_at(std::uint64_t seed, std::uint64_t index);

// Worker count: explicit value if positive, else SHORTWAVE_WORKERS, else
// hardware concurrency.
int resolve_workers(int requested = 0);

// Runs body(i) for i in [0, count) on `workers` threads with a static
// interleaved schedule.  Each index is handled exactly once.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace shortwave
