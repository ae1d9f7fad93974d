#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shortwave/descriptor.hpp"
#include "shortwave/euler_product.hpp"
#include "shortwave/variance.hpp"

using namespace shortwave;

TEST_SUITE("descriptor") {

TEST_CASE("built-in instances") {
    auto t2 = builtin_descriptor("tau_2");
    CHECK(t2.m() == 2);
    CHECK(t2.rs_r() == 4);
    CHECK(*t2.rs_c() * 16.0 == doctest::Approx(16.0 / (std::numbers::pi * std::numbers::pi)));
    CHECK(t2.phase() == doctest::Approx(std::numbers::pi / 4));

    auto g = builtin_descriptor("gaussian_ideals");
    CHECK(*g.rs_c() == 0.25);
    CHECK(g.conductor() == 4.0);
    CHECK(g.phase() == doctest::Approx(-std::numbers::pi / 4));
    CHECK(g.main_term(1.0) == doctest::Approx(std::numbers::pi / 4));

    auto r = builtin_descriptor("ramanujan");
    CHECK(r.pole_order() == 0);
    CHECK(r.main_term_poly().empty());
    CHECK(r.main_term(1e6) == 0.0);
    CHECK(r.phase() == doctest::Approx(std::numbers::pi / 4));
    CHECK_FALSE(r.rs_c().has_value());
    CHECK_THROWS_AS(resolve_rs_c(r), std::invalid_argument);

    CHECK_THROWS_AS(builtin_descriptor("tau_x"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_descriptor("nope"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_descriptor("tau_1"), std::invalid_argument);
}

TEST_CASE("L(1, chi_-4) by accelerated alternating series") {
    // Averaging consecutive partial sums repeatedly (Euler transform).
    std::vector<double> partial;
    double s = 0.0;
    for (int k = 0; k < 30; ++k) {
        s += (k % 2 == 0 ? 1.0 : -1.0) / (2 * k + 1);
        partial.push_back(s);
    }
    while (partial.size() > 1) {
        for (std::size_t i = 0; i + 1 < partial.size(); ++i) partial[i] = 0.5 * (partial[i] + partial[i + 1]);
        partial.pop_back();
    }
    auto g = builtin_descriptor("gaussian_ideals");
    REQUIRE(g.main_term_poly().size() == 1);
    CHECK(g.main_term_poly()[0] == doctest::Approx(partial[0]).epsilon(1e-10));
}

TEST_CASE("phase reduction") {
    CHECK(reduce_phase(std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(reduce_phase(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(reduce_phase(5 * std::numbers::pi / 2) == doctest::Approx(std::numbers::pi / 2));
    auto t3 = builtin_descriptor("tau_3");
    CHECK(t3.phase() == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("JSON round trip and validation") {
    for (const char* name : {"tau_2", "tau_3", "gaussian_ideals", "ramanujan"}) {
        auto d = builtin_descriptor(name);
        auto back = LFunctionDescriptor::from_json(d.to_json());
        CHECK(back.id() == d.id());
        CHECK(back.phase() == d.phase());
        CHECK(back.main_term_poly() == d.main_term_poly());
        CHECK(back.rs_c() == d.rs_c());
    }
    auto j = builtin_descriptor("tau_2").to_json();
    j["phi"] = 0.3;
    CHECK_THROWS_AS(LFunctionDescriptor::from_json(j), std::invalid_argument);

    DescriptorFields f;
    f.id = "bad";
    f.m = 1;
    f.root_number = 2;
    f.conductor = -1;
    try {
        LFunctionDescriptor d(f);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("m must be") != std::string::npos);
        CHECK(msg.find("root number") != std::string::npos);
        CHECK(msg.find("conductor") != std::string::npos);
    }
}

TEST_CASE("main term of tau_2 stays within the divisor-problem error") {
    auto d = builtin_descriptor("tau_2");
    // sum_{n<=10} tau(n) = 27.
    double delta10 = 27.0 - d.main_term(10.0);
    CHECK(delta10 == doctest::Approx(27.0 - 10.0 * (std::log(10.0) + 2 * std::numbers::egamma - 1.0)));
    CHECK(delta10 == doctest::Approx(2.4298).epsilon(1e-4));
    CHECK(d.main_term_difference(1e12, 1e12 + 10.0) ==
          doctest::Approx(d.main_term(1e12 + 10.0) - d.main_term(1e12)).epsilon(1e-4));
}

TEST_CASE("Euler product for tau_k") {
    auto e2 = euler_product_c_tau_k(2, 1'000'000);
    CHECK(std::fabs(e2.value - 1.0 / (std::numbers::pi * std::numbers::pi)) <= 1e-6);
    CHECK(e2.half_width < 1e-5);
    // (1 - x)^4 sum (j+1)^2 x^j = (1 - x)(1 + x) at x = 1/2.
    CHECK(tau_k_local_factor(2, 2) == doctest::Approx(0.75).epsilon(1e-14));
    auto primes = primes_up_to(30);
    CHECK(primes == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}

TEST_CASE("asymptotic variance constants") {
    CHECK(sigma_sq_asymptotic(builtin_descriptor("gaussian_ideals"), 0.01) ==
          doctest::Approx(0.01 * std::log(100.0)));
    CHECK(sigma_sq_asymptotic(builtin_descriptor("tau_2"), 0.01) ==
          doctest::Approx(16.0 / (std::numbers::pi * std::numbers::pi) * 0.01 * std::pow(std::log(100.0), 3)));
    CHECK(sigma_sq_asymptotic(builtin_descriptor("tau_2"), 0.01) == doctest::Approx(1.584).epsilon(1e-3));
}

}
