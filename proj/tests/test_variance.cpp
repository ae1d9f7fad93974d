#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shortwave/variance.hpp"

using namespace shortwave;

namespace {

constexpr double kPi = std::numbers::pi;

LFunctionDescriptor constant_control() {
    DescriptorFields f;
    f.id = "ones";
    f.m = 2;
    f.conductor = 1.0;
    f.kappa_re = {0.0, 0.0};
    f.pole_order = 1;
    f.rs_c = 1.0;
    f.rs_r = 1;
    f.main_term_poly = {1.0};
    return LFunctionDescriptor(f);
}

}  // namespace

TEST_SUITE("variance") {

TEST_CASE("single-term series") {
    auto g = builtin_descriptor("gaussian_ideals");
    auto t2 = builtin_descriptor("tau_2");
    auto gt = sieve_gaussian_ideals(100);
    auto tt = sieve_tau_k(2, 100);
    for (double delta : {0.01, 0.1, 0.37}) {
        double sg = std::sin(kPi * delta);
        double st = std::sin(2 * kPi * delta);
        CHECK(sigma_sq_truncated(g, gt, delta, 1) == doctest::Approx(2 / (kPi * kPi) * sg * sg).epsilon(1e-14));
        CHECK(sigma_sq_truncated(t2, tt, delta, 1) == doctest::Approx(st * st / (kPi * kPi)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(sigma_sq_truncated(g, gt, 0.1, 101), std::out_of_range);
}

TEST_CASE("asymptotic form") {
    auto r = builtin_descriptor("ramanujan");
    auto table = eta24_coefficients(20000);
    auto cal = calibrate(r, table);
    CHECK(sigma_sq_asymptotic(r, 0.02, cal) == doctest::Approx(2 * sigma_sq_asymptotic(r, 0.01, cal)).epsilon(1e-15));
    CHECK_THROWS_AS(sigma_sq_asymptotic(r, 0.01), std::invalid_argument);
    CHECK(cal.n_max == 20000);
    CHECK_THROWS_AS(calibrate(builtin_descriptor("tau_2"), table), std::invalid_argument);
    CHECK_THROWS_AS(sigma_sq_asymptotic(builtin_descriptor("tau_2"), 1.0), std::invalid_argument);
}

TEST_CASE("truncated series is monotone, nonnegative and bounded term-wise") {
    auto g = builtin_descriptor("gaussian_ideals");
    auto table = sieve_gaussian_ideals(20000);
    std::vector<std::int64_t> cuts{1, 10, 100, 1000, 10000, 20000};
    for (double delta : {0.0, 1e-3, 0.05, 0.3}) {
        auto pre = sigma_sq_truncated_prefixes(g, table, delta, cuts);
        double prev = 0.0;
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            CHECK(pre[i] == doctest::Approx(sigma_sq_truncated(g, table, delta, cuts[i])).epsilon(1e-12));
            CHECK(pre[i] >= prev);
            prev = pre[i];
        }
        if (delta == 0.0) {
            CHECK(pre.back() == 0.0);
        } else {
            CHECK(pre.back() > 0.0);
        }
        double bound = 0.0;
        for (std::int64_t n = 1; n <= 20000; ++n) {
            double lam = table.lambda(n);
            double b = std::sqrt(static_cast<double>(n));  // n_breve for D = 4
            double arg = kPi * b * delta;
            bound += 2 / (kPi * kPi) * lam * lam / n * std::min(1.0, arg * arg) / b;
        }
        CHECK(pre.back() <= bound * (1 + 1e-12));
    }
}

TEST_CASE("streamed series equals the stored sum when fully exact") {
    auto g = builtin_descriptor("gaussian_ideals");
    auto table = sieve_gaussian_ideals(200000);
    auto run = sigma_sq_series(g, {0.01, 0.003}, {200000, 150000}, 1'000'000);
    REQUIRE(run.terms.size() == 2);
    CHECK(run.terms[0].value == doctest::Approx(sigma_sq_truncated(g, table, 0.01, 200000)).epsilon(1e-12));
    CHECK(run.terms[1].value == doctest::Approx(sigma_sq_truncated(g, table, 0.003, 150000)).epsilon(1e-12));
    CHECK(run.terms[0].model_part == 0.0);

    auto t2 = builtin_descriptor("tau_2");
    auto tt = sieve_tau_k(2, 100000);
    auto r2 = sigma_sq_series(t2, {0.05}, {100000}, 100000);
    CHECK(r2.terms[0].value == doctest::Approx(sigma_sq_truncated(t2, tt, 0.05, 100000)).epsilon(1e-12));

    auto modeled = sigma_sq_series(g, {0.01}, {10'000'000}, 1'000'000);
    CHECK(modeled.terms[0].model_part > 0.0);
    CHECK(modeled.terms[0].value == doctest::Approx(modeled.terms[0].exact_part + modeled.terms[0].model_part));

    CHECK_THROWS_AS(sigma_sq_series(g, {0.01, 0.02}, {1000}, 1000), std::invalid_argument);
    CHECK_THROWS_AS(sigma_sq_series(builtin_descriptor("ramanujan"), {0.01}, {1000}, 1000), std::invalid_argument);
}

TEST_CASE("tail check") {
    auto g = builtin_descriptor("gaussian_ideals");
    auto table = sieve_gaussian_ideals(1'000'000);
    auto one = tail_bound_check(g, table, 1e-3, {10000});
    CHECK(one.pass);
    CHECK(one.increments.empty());
    auto three = tail_bound_check(g, table, 1e-3, {10000, 100000, 1000000});
    CHECK(three.pass);
    CHECK(three.normalized[1] <= 3.0);

    auto c = constant_control();
    auto ones = CoefficientTable::from_values("ones", std::vector<double>(1'000'001, 1.0));
    auto tc = tail_bound_check(c, ones, 0.1, {10000, 100000, 1000000});
    REQUIRE(tc.increments.size() == 2);
    // The tail sum_{n > N} n^{-3/2} sin^2(2 pi sqrt(n) delta) / (pi^2) ~ N^{-1/2} / pi^2.
    double ratio = tc.increments[0] / tc.increments[1];
    CHECK(ratio == doctest::Approx(std::sqrt(10.0)).epsilon(0.1));
    CHECK(tc.pass);
    CHECK(tc.normalized[0] == doctest::Approx(1.0));
}

TEST_CASE("Rankin-Selberg estimator") {
    auto ones = CoefficientTable::from_values("ones", std::vector<double>(100'001, 1.0));
    auto fit = rankin_selberg_fit(ones, 1);
    CHECK(fit.c_hat == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.converged);
    CHECK(fit.y == std::vector<std::int64_t>{12500, 25000, 50000, 100000});

    auto g = sieve_gaussian_ideals(10'000'000);
    auto gf = rankin_selberg_fit(g, 2);
    CHECK(gf.c_hat >= 0.2);
    CHECK(gf.c_hat <= 0.3);

    auto small = CoefficientTable::from_values("ones", std::vector<double>(1000, 1.0));
    CHECK_THROWS_AS(rankin_selberg_fit(small, 1), std::invalid_argument);
    CHECK_THROWS_AS(rankin_selberg_fit(ones, 0), std::invalid_argument);
}

TEST_CASE("default truncation and reports") {
    auto g = builtin_descriptor("gaussian_ideals");
    CHECK(default_truncation(g, 0.1) == 100000);
    CHECK(default_truncation(builtin_descriptor("tau_3"), 0.1) == 1000000);
    auto table = sieve_gaussian_ideals(100000);
    auto rep = variance_report(g, table, 0.1, 100000);
    CHECK(rep.ratio == doctest::Approx(rep.sigma_sq_truncated / rep.sigma_sq_asymptotic));
    CHECK(rep.tail_bound > 0.0);
    auto j = to_json(rep);
    CHECK(j["N_used"] == 100000);
    CHECK(format_variance_table({rep}).find("1.0000e-01") != std::string::npos);
}

}
