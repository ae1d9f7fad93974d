#include <doctest.h>

#include <cmath>
#include <memory>
#include <mpfr.h>
#include <numbers>
#include <vector>

#include "shortwave/numeric.hpp"
#include "shortwave/voronoi.hpp"

using namespace shortwave;

namespace {

DualSpectrum single_term(const DualSpectrum& s, std::size_t i) {
    DualSpectrum t = s;
    t.n = {s.n[i]};
    t.amplitude = {s.amplitude[i]};
    t.freq = {s.freq[i]};
    return t;
}

}  // namespace

TEST_SUITE("voronoi") {

TEST_CASE("dual frequencies") {
    auto g = builtin_descriptor("gaussian_ideals");
    auto t2 = builtin_descriptor("tau_2");
    auto t3 = builtin_descriptor("tau_3");
    CHECK(breve(4, g) == doctest::Approx(2.0));
    CHECK(breve(9, g) == doctest::Approx(3.0));
    CHECK(breve(4, t2) == doctest::Approx(4.0));
    CHECK(breve(8, t3) == doctest::Approx(6.0));
    CHECK_THROWS_AS(breve(0, g), std::invalid_argument);
    CHECK(below_validity_floor(g, 1.2));
    CHECK_FALSE(below_validity_floor(g, 1.5));
}

TEST_CASE("direct remainder") {
    auto g = builtin_descriptor("gaussian_ideals");
    SummatoryOracle og(g);
    CHECK(delta_direct(g, og, 1.0) == doctest::Approx(1.0 - std::numbers::pi / 4).epsilon(1e-12));

    auto t2 = builtin_descriptor("tau_2");
    SummatoryOracle o2(t2);
    double x = std::sqrt(10.0);
    double T = x * x;
    double expect = static_cast<double>(summatory_tau2_hyperbola(floor_power(x, 2))) -
                    T * (std::log(T) + 2 * std::numbers::egamma - 1.0);
    CHECK(delta_direct(t2, o2, x) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(delta_direct(t2, o2, 10.0000001 / x) == doctest::Approx(27.0 - 10.0 * (std::log(10.0) + 2 * std::numbers::egamma - 1.0)).epsilon(1e-4));
    CHECK(delta_direct(t2, o2, 10.0000001 / x) == doctest::Approx(2.4298).epsilon(1e-4));

    auto r = builtin_descriptor("ramanujan");
    auto table = std::make_shared<const CoefficientTable>(eta24_coefficients(10000));
    SummatoryOracle orr(r, table);
    CHECK(delta_direct(r, orr, 50.0) == table->prefix_lambda(2500));

    CHECK(floor_power(3.0, 3) == 27);
    CHECK(floor_power(std::nextafter(3.0, 0.0), 3) == 26);
}

TEST_CASE("normalized short-interval statistic") {
    auto g = builtin_descriptor("gaussian_ideals");
    SummatoryOracle og(g);
    CHECK(delta_pair_normalized(g, og, 100.0, 0.0, 0.3) == 0.0);
    double a = delta_pair_normalized(g, og, 100.0, 0.5, 0.3);
    double b = delta_pair_normalized(g, og, 100.0, 0.5, 0.6);
    CHECK(b == doctest::Approx(a / 2).epsilon(1e-15));
    double expect = (summatory_gaussian_exact(10100) - summatory_gaussian_exact(10000) -
                     std::numbers::pi / 4 * 100.25) / (10.0 * 0.3);
    CHECK(a == doctest::Approx(expect).epsilon(1e-9));
    CHECK_THROWS_AS(delta_pair_normalized(g, og, 100.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("dual sums") {
    auto t2 = builtin_descriptor("tau_2");
    auto table = sieve_tau_k(2, 1000);
    auto empty = make_dual_spectrum(t2, table, 0);
    CHECK(dual_sum_truncated(empty, 12.3) == 0.0);
    auto one = make_dual_spectrum(t2, table, 1);
    for (double x : {2.0, 7.3, 123.456}) {
        double expect = std::sqrt(x) / std::numbers::pi * std::sin(4 * std::numbers::pi * x + std::numbers::pi / 4) /
                        std::sqrt(2.0);
        CHECK(dual_sum_truncated(one, x) == doctest::Approx(expect).epsilon(1e-9));
    }
    auto full = make_dual_spectrum(t2, table, 1000);
    auto flipped = flip_root_number(full);
    for (double x : {3.0, 50.5, 999.9}) CHECK(dual_sum_truncated(flipped, x) == -dual_sum_truncated(full, x));
    CHECK_THROWS_AS(make_dual_spectrum(t2, table, 1001), std::out_of_range);
}

TEST_CASE("delta_approx against the difference of dual sums") {
    auto g = builtin_descriptor("gaussian_ideals");
    auto table = sieve_gaussian_ideals(100);
    auto s = make_dual_spectrum(g, table, 100);
    double x = 37.25, delta = 0.03;
    CHECK(delta_approx(s, x, 0.0) == 0.0);
    for (std::size_t i = 0; i < s.n.size(); ++i) {
        auto t = single_term(s, i);
        double diff = dual_sum_truncated(t, x + delta) / std::sqrt(x + delta) - dual_sum_truncated(t, x) / std::sqrt(x);
        double term = delta_approx(t, x, delta);
        CHECK(std::fabs(term - diff) <= 1e-10);
        double bound = 2.0 * s.amplitude[i] * s.freq[i].value() * delta;
        CHECK(std::fabs(term) <= bound * (1 + 1e-12));
    }
    auto pre = delta_approx_prefixes(s, x, delta, {10, 50, 100});
    CHECK(pre.back() == doctest::Approx(delta_approx(s, x, delta)).epsilon(1e-14));
}

TEST_CASE("argument reduction matches 256-bit evaluation") {
    auto g = builtin_descriptor("gaussian_ideals");
    mpfr_t f, arg, pi;
    mpfr_inits2(256, f, arg, pi, static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(pi, MPFR_RNDN);
    const double phi = 0.3;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        auto n = static_cast<std::uint64_t>(1 + uniform_at(8, i) * 1e6);
        DoubleDouble fb = breve_dd(n, g);
        double x = 1e12 / fb.value() * uniform_at(9, i);
        // 2 (n/4)^{1/2} x = sqrt(n) x
        mpfr_set_ui(f, static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_sqrt(f, f, MPFR_RNDN);
        mpfr_mul_d(arg, f, x, MPFR_RNDN);
        mpfr_frac(arg, arg, MPFR_RNDN);
        mpfr_mul(arg, arg, pi, MPFR_RNDN);
        mpfr_mul_ui(arg, arg, 2, MPFR_RNDN);
        mpfr_add_d(arg, arg, phi, MPFR_RNDN);
        mpfr_sin(arg, arg, MPFR_RNDN);
        REQUIRE(std::fabs(reduced_sin(fb, x, phi) - mpfr_get_d(arg, MPFR_RNDN)) <= 1e-9);
    }
    mpfr_clears(f, arg, pi, static_cast<mpfr_ptr>(nullptr));
}

TEST_CASE("phase diagnostics recover the stated phases") {
    for (const char* name : {"gaussian_ideals", "tau_2"}) {
        auto d = builtin_descriptor(name);
        auto table = build_table(name, 1000);
        SummatoryOracle oracle(d);
        auto s = make_dual_spectrum(d, table, 1000);
        auto fit = phase_diagnostic(d, oracle, s, 1e3, 200, 1);
        CHECK_MESSAGE(fit.phase_error <= 0.05, name);
        CHECK(std::fabs(fit.amplitude - 1.0) <= 0.1);
        CHECK(fit.samples == 200);
    }
}

TEST_CASE("degenerate and empty inputs") {
    auto d = builtin_descriptor("tau_2");
    auto zeros = CoefficientTable::from_values("tau_2", std::vector<double>(101, 0.0));
    SummatoryOracle oracle(d);
    auto s = make_dual_spectrum(d, zeros, 100);
    try {
        phase_diagnostic(d, oracle, s, 1e3, 50, 1);
        FAIL("expected degenerate fit");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("degenerate fit") != std::string::npos);
    }
    auto table = sieve_tau_k(2, 100);
    auto real = make_dual_spectrum(d, table, 100);
    try {
        l2_deviation(d, oracle, real, 1e3, 0.05, 1.0, {100}, 0, 1);
        FAIL("expected empty sample");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()) == "empty sample");
    }
}

TEST_CASE("truncated dual sum tracks the lattice remainder") {
    // Relative RMS error over x in [50, 100]; it decays roughly like N^{-1/4}.
    auto g = builtin_descriptor("gaussian_ideals");
    SummatoryOracle oracle(g);
    auto table = sieve_gaussian_ideals(1'000'000);
    std::vector<double> ratios;
    for (std::int64_t N : {10'000, 1'000'000}) {
        auto s = make_dual_spectrum(g, table, N);
        double err2 = 0.0, val2 = 0.0;
        for (std::uint64_t i = 0; i < 100; ++i) {
            double x = 50.0 + 50.0 * uniform_at(21, i);
            double direct = delta_direct(g, oracle, x);
            double approx = dual_sum_truncated(s, x);
            err2 += (direct - approx) * (direct - approx);
            val2 += direct * direct;
        }
        ratios.push_back(std::sqrt(err2 / val2));
    }
    CHECK(ratios[0] <= 0.2);
    CHECK(ratios[1] <= 0.1);
    CHECK(ratios[1] < ratios[0]);
}

}
