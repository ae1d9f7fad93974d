#include <doctest.h>

#include <cmath>

#include "shortwave/algebra.hpp"
#include "shortwave/variance.hpp"
#include "shortwave/window.hpp"

using namespace shortwave;

TEST_SUITE("window") {

TEST_CASE("bump window") {
    const auto& W = window_w();
    CHECK(W.mass() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(W(0.5) == 0.0);
    CHECK(W(2.5) == 0.0);
    CHECK(W(0.1) == 0.0);
    CHECK(W(3.0) == 0.0);
    CHECK(W(1.5) > 0.0);
    CHECK(W(1.5) == doctest::Approx(W.C() * std::exp(-1.0)));
    for (double t = 0.51; t < 2.5; t += 0.01) REQUIRE(W(t) >= 0.0);
    CHECK(W(1.2) == doctest::Approx(W(1.8)).epsilon(1e-14));
}

TEST_CASE("argument checks and empty spectra") {
    auto g = builtin_descriptor("gaussian_ideals");
    auto table = sieve_gaussian_ideals(100);
    auto s = make_dual_spectrum(g, table, 100);
    CHECK_THROWS_AS(window_expectation(s, 1e4, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(window_expectation(s, 1e4, 0.1, 7), std::invalid_argument);
    CHECK_THROWS_AS(window_expectation(s, 1e4, 0.1, 2, 1e-9, 5.0), std::invalid_argument);
    auto zeros = CoefficientTable::from_values("gaussian_ideals", std::vector<double>(101, 0.0));
    auto empty = make_dual_spectrum(g, zeros, 100);
    for (int k = 1; k <= 6; ++k) CHECK(window_expectation(empty, 1e4, 0.1, k).value == 0.0);
}

TEST_CASE("windowed mean and variance") {
    auto g = builtin_descriptor("gaussian_ideals");
    auto table = sieve_gaussian_ideals(100);
    auto s = make_dual_spectrum(g, table, 100);
    double s2 = sigma_sq_truncated(g, table, 0.1, 100);
    auto k1 = window_expectation(s, 1e4, 0.1, 1);
    auto k2 = window_expectation(s, 1e4, 0.1, 2);
    CHECK(std::fabs(k1.value) <= 1e-6 * std::sqrt(s2));
    CHECK(std::fabs(k2.value - s2) <= 1e-3 * s2);
    CHECK(k2.nodes > 0);
    CHECK(k2.achieved_error <= 1e-9 * s2 * 10);
}

TEST_CASE("odd third moment matches the diagonal value") {
    // For m = 2 cancellations such as sqrt(1) + sqrt(1) = sqrt(4) give a
    // nonzero diagonal, so the windowed k = 3 moment is not small.
    auto g = builtin_descriptor("gaussian_ideals");
    auto table = sieve_gaussian_ideals(100);
    auto s = make_dual_spectrum(g, table, 20);
    double oracle = moment_oracle(g, table, 0.1, 20, 3).value;
    auto k3 = window_expectation(s, 1e5, 0.1, 3);
    CHECK(std::fabs(oracle) > 0.0);
    CHECK(k3.value == doctest::Approx(oracle).epsilon(1e-3));
    double oracle4 = moment_oracle(g, table, 0.1, 20, 4).value;
    CHECK(window_expectation(s, 1e5, 0.1, 4).value == doctest::Approx(oracle4).epsilon(1e-3));
}

}
