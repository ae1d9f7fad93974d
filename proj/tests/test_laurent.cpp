#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shortwave/laurent.hpp"
#include "shortwave/numeric.hpp"
#include "shortwave/stieltjes.hpp"

using namespace shortwave;

namespace {

LaurentSeries random_series(std::uint64_t seed, int min_order, int len) {
    std::vector<double> c(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) c[static_cast<std::size_t>(i)] = 2.0 * uniform_at(seed, static_cast<std::uint64_t>(i)) - 1.0;
    if (c[0] == 0.0) c[0] = 0.5;
    return LaurentSeries(min_order, c);
}

// Richardson extrapolation of H_M - ln M on M = 2^j.
double euler_gamma_richardson() {
    std::vector<double> row;
    for (int j = 4; j <= 12; ++j) {
        auto M = 1u << j;
        CompensatedSum h;
        for (unsigned k = 1; k <= M; ++k) h.add(1.0 / k);
        row.push_back(h.value() - std::log(static_cast<double>(M)));
    }
    // Error expansion in powers of 1/M.
    for (int level = 1; level < static_cast<int>(row.size()); ++level) {
        double f = std::pow(2.0, level);
        for (std::size_t i = row.size() - 1; i >= static_cast<std::size_t>(level); --i) {
            row[i] = (f * row[i] - row[i - 1]) / (f - 1.0);
        }
    }
    return row.back();
}

}  // namespace

TEST_SUITE("laurent") {

TEST_CASE("gamma_0 from harmonic numbers agrees with the Stieltjes table") {
    double g = euler_gamma_richardson();
    CHECK(g == doctest::Approx(std::numbers::egamma).epsilon(1e-12));
    CHECK(stieltjes_constants()[0] == doctest::Approx(std::numbers::egamma).epsilon(1e-13));
    for (int n = 0; n < kStieltjesCount; ++n) {
        CHECK(std::fabs(stieltjes_constants()[static_cast<std::size_t>(n)] - kStieltjesReference[static_cast<std::size_t>(n)]) < 1e-10);
    }
}

TEST_CASE("zeta Laurent series at order 0") {
    auto z = zeta_laurent(0);
    CHECK(z.min_order() == -1);
    CHECK(z.coefficient(-1) == 1.0);
    CHECK(z.coefficient(0) == doctest::Approx(0.5772156649).epsilon(1e-10));
    CHECK_THROWS_AS(z.coefficient(1), std::out_of_range);
}

TEST_CASE("products and powers") {
    LaurentSeries pole(-1, {1.0});
    LaurentSeries zero(1, {1.0});
    auto one = laurent_mul(pole, zero);
    CHECK(one.min_order() == 0);
    CHECK(one.coefficient(0) == 1.0);

    const double g = std::numbers::egamma;
    auto sq = laurent_pow(LaurentSeries(-1, {1.0, g, 0.3}), 2);
    CHECK(sq.coefficient(-2) == 1.0);
    CHECK(sq.coefficient(-1) == doctest::Approx(2 * g));
    CHECK(sq.coefficient(0) == doctest::Approx(g * g + 0.6));
    CHECK_THROWS_AS(sq.coefficient(1), std::out_of_range);
}

TEST_CASE("multiplication matches a naive convolution") {
    auto a = random_series(1, -2, 6);
    auto b = random_series(2, 1, 5);
    auto p = laurent_mul(a, b);
    int hi = std::min(a.min_order() + b.valid_through(), b.min_order() + a.valid_through());
    CHECK(p.valid_through() == hi);
    for (int power = a.min_order() + b.min_order(); power <= hi; ++power) {
        double s = 0.0;
        for (int i = a.min_order(); i <= a.valid_through(); ++i) {
            int j = power - i;
            if (j >= b.min_order() && j <= b.valid_through()) s += a.coefficient(i) * b.coefficient(j);
        }
        CHECK(p.coefficient(power) == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("multiplication is associative") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto a = random_series(3 * seed + 10, -1, 7);
        auto b = random_series(3 * seed + 11, -2, 6);
        auto c = random_series(3 * seed + 12, 0, 8);
        auto l = laurent_mul(laurent_mul(a, b), c);
        auto r = laurent_mul(a, laurent_mul(b, c));
        int top = std::min(l.valid_through(), r.valid_through());
        for (int p = std::min(l.min_order(), r.min_order()); p <= top; ++p) {
            CHECK(std::fabs(l.coefficient(p) - r.coefficient(p)) <= 1e-12);
        }
    }
}

TEST_CASE("main-term polynomials") {
    auto P1 = main_term_polynomial(zeta_laurent(2));
    REQUIRE(P1.size() == 1);
    CHECK(P1[0] == 1.0);
    for (int T = 1; T <= 1000; ++T) {
        CHECK(std::fabs(T - T * evaluate_polynomial(P1, std::log(T))) <= 1.0);
    }

    auto P2 = main_term_polynomial(laurent_pow(zeta_laurent(4), 2));
    REQUIRE(P2.size() == 2);
    CHECK(std::fabs(P2[1] - 1.0) <= 1e-10);
    CHECK(std::fabs(P2[0] - (2 * std::numbers::egamma - 1.0)) <= 1e-10);

    // Residue rho only: P = rho.
    auto P3 = main_term_polynomial(LaurentSeries(-1, {std::numbers::pi / 4, 0.3}));
    REQUIRE(P3.size() == 1);
    CHECK(P3[0] == doctest::Approx(std::numbers::pi / 4));

    CHECK(main_term_polynomial(LaurentSeries(0, {1.0, 2.0})).empty());
}

TEST_CASE("main term of zeta^3 is increasing for large y") {
    auto P = main_term_polynomial(laurent_pow(zeta_laurent(6), 3));
    REQUIRE(P.size() == 3);
    CHECK(P[2] == doctest::Approx(0.5));
    double prev = -INFINITY;
    for (double u = 2.0; u < 40.0; u += 0.25) {
        double v = std::exp(u) * evaluate_polynomial(P, u);
        CHECK(v > prev);
        prev = v;
    }
}

}
