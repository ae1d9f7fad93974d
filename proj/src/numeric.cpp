#include "shortwave/numeric.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace shortwave {

std::string to_string(Int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    UInt128 u = neg ? UInt128(0) - static_cast<UInt128>(v) : static_cast<UInt128>(v);
    std::string digits;
    while (u > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

Int128 parse_int128(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("bad integer: " + s);
    Int128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer: " + s);
        v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
}

DoubleDouble dd_sqrt(DoubleDouble a) {
    if (a.hi <= 0.0) return {0.0, 0.0};
    double x = std::sqrt(a.hi);
    // One Newton step: x + (a - x^2) / (2x).
    DoubleDouble r = a - two_prod(x, x);
    return quick_two_sum(x, r.hi / (2.0 * x));
}

DoubleDouble dd_pow(DoubleDouble a, int m) {
    DoubleDouble r(1.0);
    DoubleDouble base = a;
    while (m > 0) {
        if (m & 1) r = r * base;
        base = base * base;
        m >>= 1;
    }
    return r;
}

DoubleDouble dd_root(DoubleDouble a, int m) {
    if (m == 1) return a;
    if (m == 2) return dd_sqrt(a);
    DoubleDouble x(std::pow(a.hi, 1.0 / m));
    for (int it = 0; it < 2; ++it) {
        DoubleDouble xm1 = dd_pow(x, m - 1);
        DoubleDouble f = xm1 * x - a;
        x = x - f / (xm1 * DoubleDouble(static_cast<double>(m)));
    }
    return x;
}

DoubleDouble dd_floor(DoubleDouble a) {
    double fh = std::floor(a.hi);
    if (fh != a.hi) return {fh, 0.0};
    return quick_two_sum(fh, std::floor(a.lo));
}

double dd_frac(DoubleDouble a) {
    DoubleDouble f = a - dd_floor(a);
    double v = f.hi + f.lo;
    if (v >= 1.0) v -= 1.0;
    if (v < 0.0) v += 1.0;
    return v;
}

std::uint64_t isqrt(std::uint64_t n) {
    if (n < 2) return n;
    std::uint64_t x = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    if (x == 0) x = 1;
    x = (x + n / x) / 2;
    while (static_cast<UInt128>(x) * x > n) --x;
    while (static_cast<UInt128>(x + 1) * (x + 1) <= n) ++x;
    return x;
}

std::uint64_t icbrt(std::uint64_t n) {
    if (n < 2) return n;
    std::uint64_t x = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
    auto cube = [](std::uint64_t v) { return static_cast<UInt128>(v) * v * v; };
    while (x > 0 && cube(x) > n) --x;
    while (cube(x + 1) <= n) ++x;
    return x;
}

namespace {

double pairwise_impl(const double* p, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_impl(p, h) + pairwise_impl(p + h, n - h);
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_impl(xs.data(), xs.size()); }

double uniform_at(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 gen(seq);
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SHORTWAVE_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
    workers = std::max(1, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += w) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace shortwave
