#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <mpfr.h>
#include <numeric>
#include <vector>

#include "shortwave/numeric.hpp"

using namespace shortwave;

TEST_SUITE("numeric") {

TEST_CASE("isqrt and icbrt are exact floors") {
    for (std::uint64_t n = 0; n < 100000; ++n) {
        std::uint64_t r = isqrt(n);
        REQUIRE(r * r <= n);
        REQUIRE((r + 1) * (r + 1) > n);
    }
    for (std::uint64_t r : {4294967295ULL, 3037000499ULL, 1000000007ULL}) {
        CHECK(isqrt(r * r) == r);
        CHECK(isqrt(r * r - 1) == r - 1);
    }
    CHECK(isqrt(UINT64_MAX) == 4294967295ULL);
    for (std::uint64_t r = 1; r < 2642245; r += 9973) {
        CHECK(icbrt(r * r * r) == r);
        CHECK(icbrt(r * r * r - 1) == r - 1);
    }
}

TEST_CASE("Int128 round-trips through text") {
    Int128 v = static_cast<Int128>(1) << 100;
    v = -v + 12345;
    CHECK(parse_int128(to_string(v)) == v);
    CHECK(to_string(Int128(0)) == "0");
    CHECK(to_string(Int128(-7)) == "-7");
}

TEST_CASE("double-double keeps the low word") {
    DoubleDouble a = two_sum(1.0, 1e-20);
    CHECK(a.hi == 1.0);
    CHECK(a.lo == doctest::Approx(1e-20));
    DoubleDouble s = dd_sqrt(DoubleDouble(2.0));
    DoubleDouble sq = s * s;
    CHECK(std::fabs((sq - DoubleDouble(2.0)).value()) < 1e-30);
    DoubleDouble c = dd_root(DoubleDouble(1e12), 3);
    CHECK(std::fabs((dd_pow(c, 3) - DoubleDouble(1e12)).value()) < 1e-18);
}

TEST_CASE("dd_frac matches a 256-bit reduction") {
    mpfr_t f, x, p;
    mpfr_inits2(256, f, x, p, static_cast<mpfr_ptr>(nullptr));
    for (int i = 0; i < 2000; ++i) {
        double fv = 1.0 + 97.0 * uniform_at(11, static_cast<std::uint64_t>(i));
        double xv = 1e10 * uniform_at(12, static_cast<std::uint64_t>(i));
        DoubleDouble prod = dd_sqrt(DoubleDouble(fv)) * DoubleDouble(xv);
        mpfr_set_d(f, fv, MPFR_RNDN);
        mpfr_sqrt(f, f, MPFR_RNDN);
        mpfr_mul_d(p, f, xv, MPFR_RNDN);
        mpfr_frac(p, p, MPFR_RNDN);
        double ref = mpfr_get_d(p, MPFR_RNDN);
        double got = dd_frac(prod);
        double diff = std::fabs(got - ref);
        CHECK(std::min(diff, 1.0 - diff) < 1e-12);
    }
    mpfr_clears(f, x, p, static_cast<mpfr_ptr>(nullptr));
}

TEST_CASE("pairwise sum is exact on integers and order-stable") {
    std::vector<double> xs(100001);
    std::iota(xs.begin(), xs.end(), 0.0);
    CHECK(pairwise_sum(xs) == 5000050000.0);
    std::vector<double> ys{1e16, 1.0, -1e16, 1.0};
    CompensatedSum c;
    for (double y : ys) c.add(y);
    CHECK(c.value() == 2.0);
}

TEST_CASE("uniform_at is deterministic and in [0, 1)") {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        double u = uniform_at(42, i);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        CHECK(u == uniform_at(42, i));
        sum += u;
    }
    CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(uniform_at(42, 0) != uniform_at(43, 0));
}

TEST_CASE("parallel_for visits every index once for any worker count") {
    for (int workers : {1, 4, 16}) {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
    CHECK(resolve_workers(3) == 3);
    CHECK(resolve_workers(0) >= 1);
}

}
