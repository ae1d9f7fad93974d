#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numeric>

#include "shortwave/coefficients.hpp"

using namespace shortwave;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / ("shortwave_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

std::string load_error(const std::string& content) {
    try {
        load_coefficients(temp_file("bad.csv", content), "tau_2");
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

// tau(n) for n <= N by expanding q prod (1 - q^n)^24 one factor at a time.
std::vector<long long> naive_tau(int N) {
    std::vector<long long> c(static_cast<std::size_t>(N), 0);
    c[0] = 1;
    for (int n = 1; n < N; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (int i = N - 1; i >= n; --i) c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - n)];
        }
    }
    return c;  // c[i] = tau(i + 1)
}

}  // namespace

TEST_SUITE("coefficients") {

TEST_CASE("divisor functions") {
    auto t2 = sieve_tau_k(2, 100);
    CHECK(t2.lambda(6) == 4);
    CHECK(t2.lambda(1) == 1);
    for (int n = 1; n <= 100; ++n) {
        int count = 0;
        for (int d = 1; d <= n; ++d) count += n % d == 0;
        CHECK(t2.lambda(n) == count);
    }
    auto t3 = sieve_tau_k(3, 100);
    CHECK(t3.lambda(1) == 1);
    CHECK(t3.lambda(8) == 10);
    CHECK(tau_k_local(3, 3) == 10);
}

TEST_CASE("Gaussian ideal counts") {
    auto g = sieve_gaussian_ideals(1000);
    CHECK(g.lambda(1) == 1);
    CHECK(g.lambda(3) == 0);
    CHECK(g.lambda(5) == 2);
    CHECK(*g.exact_value(5) == 8);  // r_2(5)
    for (int n = 1; n <= 1000; ++n) {
        int r2 = 0;
        for (int a = -32; a <= 32; ++a) {
            for (int b = -32; b <= 32; ++b) r2 += a * a + b * b == n;
        }
        REQUIRE(*g.exact_value(n) == r2);
    }
    auto lattice = sieve_gaussian_ideals(10, true);
    CHECK(lattice.lambda(5) == 8);
}

TEST_CASE("Ramanujan tau against the naive product") {
    auto t = eta24_coefficients(300);
    auto ref = naive_tau(300);
    CHECK(*t.exact_value(1) == 1);
    CHECK(*t.exact_value(2) == -24);
    CHECK(*t.exact_value(3) == 252);
    CHECK(*t.exact_value(12) == -370944);
    for (int n = 1; n <= 300; ++n) REQUIRE(*t.exact_value(n) == ref[static_cast<std::size_t>(n - 1)]);
    CHECK(t.lambda(2) == doctest::Approx(-24.0 / std::pow(2.0, 5.5)));
}

TEST_CASE("multiplicativity on random coprime pairs") {
    const std::int64_t N = 1 << 16;
    auto t2 = sieve_tau_k(2, N);
    auto t4 = sieve_tau_k(4, N);
    auto g = sieve_gaussian_ideals(N);
    auto r = eta24_coefficients(N);
    int tested = 0;
    for (std::uint64_t i = 0; tested < 1000; ++i) {
        auto a = static_cast<std::int64_t>(2 + uniform_at(5, 2 * i) * 256);
        auto b = static_cast<std::int64_t>(2 + uniform_at(5, 2 * i + 1) * 256);
        if (std::gcd(a, b) != 1 || a * b > N) continue;
        ++tested;
        CHECK(*t2.exact_value(a * b) == *t2.exact_value(a) * *t2.exact_value(b));
        CHECK(*t4.exact_value(a * b) == *t4.exact_value(a) * *t4.exact_value(b));
        CHECK(g.lambda(a * b) == g.lambda(a) * g.lambda(b));
        double lhs = r.lambda(a * b);
        double rhs = r.lambda(a) * r.lambda(b);
        CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("Hecke relation for normalized tau") {
    auto r = eta24_coefficients(1 << 16);
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        std::int64_t pn = 1;
        for (int n = 1; n <= 5; ++n) {
            std::int64_t prev = pn;
            pn *= p;
            if (pn * p > r.n_max()) break;
            double lhs = r.lambda(p) * r.lambda(pn);
            double rhs = r.lambda(pn * p) + r.lambda(prev);
            CHECK(std::fabs(lhs - rhs) <= 1e-9);
        }
    }
}

TEST_CASE("Rankin-Selberg sanity for tables with analytic constants") {
    auto t2 = sieve_tau_k(2, 1'000'000);
    double y = 1e6;
    double v = t2.prefix_lambda_sq(1'000'000) / (y * std::pow(std::log(2 * y), 3));
    double c = 1.0 / (M_PI * M_PI);
    CHECK(v >= c / 2);
    CHECK(v <= 2 * c);
    auto g = sieve_gaussian_ideals(1'000'000);
    double vg = g.prefix_lambda_sq(1'000'000) / (y * std::log(2 * y));
    CHECK(vg >= 0.125);
    CHECK(vg <= 0.5);
}

TEST_CASE("segmented generator matches the stored sieve") {
    const std::uint64_t N = 300000;
    auto table = sieve_multiplicative(static_cast<std::int64_t>(N), [](std::uint64_t p, int a) { return gaussian_local(p, a); });
    std::vector<std::int64_t> streamed{0};
    for_each_multiplicative_segment(
        N, [](std::uint64_t p, int a) { return gaussian_local(p, a); },
        [&](std::uint64_t first, std::span<const std::int64_t> vals) {
            REQUIRE(first == streamed.size());
            streamed.insert(streamed.end(), vals.begin(), vals.end());
        },
        4096);
    streamed[0] = table[0];
    CHECK(streamed == table);
    CHECK(inverse_mod_2_64(3) * 3 == 1);
}

TEST_CASE("overflow is reported with its location") {
    try {
        sieve_multiplicative(100, [](std::uint64_t, int) { return std::int64_t(1) << 40; });
        FAIL("expected overflow");
    } catch (const std::overflow_error& e) {
        CHECK(std::string(e.what()).find("n = ") != std::string::npos);
    }
}

TEST_CASE("CSV ingestion") {
    auto ok = load_coefficients(temp_file("ok.csv", "n,lambda\n1,1.0\n2,-0.5\n"), "custom");
    CHECK(ok.n_max() == 2);
    CHECK(ok.prefix_lambda(1) == 1.0);
    CHECK(ok.prefix_lambda(2) == 0.5);
    CHECK(load_error("").find("no rows") != std::string::npos);
    CHECK(load_error("n,lambda\n").find("no rows") != std::string::npos);
    CHECK(load_error("n,lambda\n1,1\n3,2\n").find("gap at n=2") != std::string::npos);
    CHECK(load_error("n,lambda\n1,abc\n").find("non-numeric") != std::string::npos);
    CHECK(load_error("n,lambda\n2,1\n").find("start at 1") != std::string::npos);
    CHECK_THROWS_AS(ok.prefix_lambda(3), std::out_of_range);
    try {
        ok.prefix_lambda(5);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("exceeds n_max") != std::string::npos);
    }
}

TEST_CASE("export and reload preserve values and checksum") {
    auto t = build_table("ramanujan", 500);
    auto dir = std::filesystem::temp_directory_path();
    std::string csv = (dir / "shortwave_test_export.csv").string();
    std::string json = (dir / "shortwave_test_export.json").string();
    export_coefficients(t, csv, json);
    auto back = load_coefficients(csv, "ramanujan");
    CHECK(back.checksum() == t.checksum());
    for (int n = 1; n <= 500; ++n) REQUIRE(back.lambda(n) == t.lambda(n));
    std::ifstream in(json);
    auto meta = nlohmann::json::parse(in);
    CHECK(meta["descriptor_id"] == "ramanujan");
    CHECK(meta["n_max"] == 500);
}

}
