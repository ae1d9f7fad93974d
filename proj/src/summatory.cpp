#include "shortwave/summatory.hpp"

#include <algorithm>
#include <stdexcept>

namespace shortwave {

namespace {

constexpr std::uint64_t kWalkLimit = 1ULL << 62;

void check_range(std::uint64_t T, std::uint64_t limit, const char* who) {
    if (T > limit) {
        throw std::out_of_range(std::string(who) + ": T = " + std::to_string(T) + " exceeds oracle range " +
                                std::to_string(limit));
    }
}

// sum_{a=1}^{A} floor(sqrt(T - a^2)) = 2 sum_{a=1}^{K} floor(sqrt(T - a^2)) - K^2
// with K = floor(sqrt(T/2)); b descends monotonically as a grows.
struct OctantWalk {
    std::uint64_t T;
    std::uint64_t K;
    std::uint64_t b;
    explicit OctantWalk(std::uint64_t t) : T(t), K(isqrt(t / 2)), b(isqrt(t)) {}
    std::uint64_t step(std::uint64_t a) {
        std::uint64_t r = T - a * a;
        while (b * b > r) --b;
        return b;
    }
};

}  // namespace

Int128 summatory_tau2_hyperbola(std::uint64_t T) {
    if (T == 0) return 0;
    std::uint64_t u = isqrt(T);
    Int128 s = 0;
    for (std::uint64_t d = 1; d <= u; ++d) s += T / d;
    return 2 * s - static_cast<Int128>(u) * u;
}

Int128 summatory_tau3_hyperbola(std::uint64_t T) {
    if (T == 0) return 0;
    std::uint64_t u = icbrt(T);
    Int128 single = 0;
    for (std::uint64_t a = 1; a <= u; ++a) single += summatory_tau2_hyperbola(T / a);
    Int128 pair = 0;
    for (std::uint64_t a = 1; a <= u; ++a) {
        std::uint64_t Ta = T / a;
        for (std::uint64_t b = 1; b <= u; ++b) pair += Ta / b;
    }
    Int128 u3 = static_cast<Int128>(u) * u * u;
    return 3 * single - 3 * pair + u3;
}

std::uint64_t gaussian_quarter_count(std::uint64_t T) {
    check_range(T, kWalkLimit, "gaussian_quarter_count");
    if (T == 0) return 0;
    OctantWalk w(T);
    std::uint64_t s = 0;
    for (std::uint64_t a = 1; a <= w.K; ++a) s += w.step(a);
    return isqrt(T) + 2 * s - w.K * w.K;
}

std::int64_t gaussian_quarter_count_difference(std::uint64_t T0, std::uint64_t T1) {
    check_range(std::max(T0, T1), kWalkLimit, "gaussian_quarter_count_difference");
    if (T0 > T1) return -gaussian_quarter_count_difference(T1, T0);
    if (T0 == 0) return static_cast<std::int64_t>(gaussian_quarter_count(T1));
    OctantWalk w0(T0);
    OctantWalk w1(T1);
    std::int64_t s = 0;
    for (std::uint64_t a = 1; a <= w0.K; ++a) {
        s += static_cast<std::int64_t>(w1.step(a)) - static_cast<std::int64_t>(w0.step(a));
    }
    for (std::uint64_t a = w0.K + 1; a <= w1.K; ++a) s += static_cast<std::int64_t>(w1.step(a));
    auto k0 = static_cast<std::int64_t>(w0.K);
    auto k1 = static_cast<std::int64_t>(w1.K);
    return static_cast<std::int64_t>(isqrt(T1)) - static_cast<std::int64_t>(isqrt(T0)) + 2 * s -
           (k1 * k1 - k0 * k0);
}

double summatory_gaussian_exact(std::uint64_t T) { return static_cast<double>(gaussian_quarter_count(T)); }

double summatory_direct(const CoefficientTable& table, std::int64_t T) { return table.prefix_lambda(T); }

SummatoryOracle::SummatoryOracle(const LFunctionDescriptor& d, std::shared_ptr<const CoefficientTable> table)
    : table_(std::move(table)) {
    const std::string& id = d.id();
    if (id == "tau_2") {
        kind_ = Kind::Tau2;
        method_ = "tau2-hyperbola";
        max_T_ = kWalkLimit;
    } else if (id == "tau_3") {
        kind_ = Kind::Tau3;
        method_ = "tau3-hyperbola";
        max_T_ = 1'000'000'000'000'000ULL;
    } else if (id == "gaussian_ideals" || id == "gaussian_lattice") {
        kind_ = Kind::Gaussian;
        gaussian_scale_ = id == "gaussian_ideals" ? 0.25 : 1.0;
        method_ = "gaussian-lattice-walk";
        max_T_ = kWalkLimit;
    } else {
        if (!table_) throw std::invalid_argument("no summatory oracle or coefficient table for '" + id + "'");
        kind_ = Kind::Table;
        method_ = "prefix-table";
        max_T_ = static_cast<std::uint64_t>(table_->n_max());
    }
}

double SummatoryOracle::sum(std::uint64_t T) const {
    check_range(T, max_T_, "summatory oracle");
    switch (kind_) {
        case Kind::Tau2: return to_double(summatory_tau2_hyperbola(T));
        case Kind::Tau3: return to_double(summatory_tau3_hyperbola(T));
        case Kind::Gaussian: return static_cast<double>(4 * gaussian_quarter_count(T)) * gaussian_scale_;
        case Kind::Table: return table_->prefix_lambda(static_cast<std::int64_t>(T));
    }
    return 0.0;
}

double SummatoryOracle::sum_difference(std::uint64_t T0, std::uint64_t T1) const {
    check_range(std::max(T0, T1), max_T_, "summatory oracle");
    switch (kind_) {
        case Kind::Tau2: return to_double(summatory_tau2_hyperbola(T1) - summatory_tau2_hyperbola(T0));
        case Kind::Tau3: return to_double(summatory_tau3_hyperbola(T1) - summatory_tau3_hyperbola(T0));
        case Kind::Gaussian:
            return static_cast<double>(4 * gaussian_quarter_count_difference(T0, T1)) * gaussian_scale_;
        case Kind::Table: {
            auto e1 = table_->prefix_exact(static_cast<std::int64_t>(T1));
            if (e1) {
                Int128 diff = *e1 - *table_->prefix_exact(static_cast<std::int64_t>(T0));
                return to_double(diff) / table_->exact_scale();
            }
            return table_->prefix_lambda(static_cast<std::int64_t>(T1)) -
                   table_->prefix_lambda(static_cast<std::int64_t>(T0));
        }
    }
    return 0.0;
}

}  // namespace shortwave
