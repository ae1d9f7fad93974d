// summatory.hpp
//
// Exact summatory oracles S(T) = sum_{n<=T} lambda(n) that bypass stored
// tables, and a dispatcher that picks the fastest one for a descriptor.

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "shortwave/coefficients.hpp"
#include "shortwave/descriptor.hpp"
#include "shortwave/numeric.hpp"

namespace shortwave {

// 2 sum_{d <= sqrt T} floor(T/d) - floor(sqrt T)^2.
Int128 summatory_tau2_hyperbola(std::uint64_t T);

// Three-dimensional hyperbola method, O(T^{2/3}).
Int128 summatory_tau3_hyperbola(std::uint64_t T);

// #{(a,b) != (0,0) : a^2 + b^2 <= T} / 4, which is always an integer.
std::uint64_t gaussian_quarter_count(std::uint64_t T);
// gaussian_quarter_count(T1) - gaussian_quarter_count(T0) by one joint walk.
std::int64_t gaussian_quarter_count_difference(std::uint64_t T0, std::uint64_t T1);

// sum_{n<=T} lambda(n) for the Gaussian-ideal normalization (r_2/4).
double summatory_gaussian_exact(std::uint64_t T);

double summatory_direct(const CoefficientTable& table, std::int64_t T);

class SummatoryOracle {
public:
    // Uses a closed-form oracle for tau_2, tau_3 and the Gaussian field;
    // otherwise falls back to `table`, which must outlive the oracle.
    SummatoryOracle(const LFunctionDescriptor& d, std::shared_ptr<const CoefficientTable> table = nullptr);

    const std::string& method() const { return method_; }
    std::uint64_t max_T() const { return max_T_; }

    double sum(std::uint64_t T) const;
    // S(T1) - S(T0), exact in integer arithmetic whenever possible.
    double sum_difference(std::uint64_t T0, std::uint64_t T1) const;

private:
    enum class Kind { Tau2, Tau3, Gaussian, Table };
    Kind kind_ = Kind::Table;
    double gaussian_scale_ = 0.25;
    std::string method_;
    std::uint64_t max_T_ = 0;
    std::shared_ptr<const CoefficientTable> table_;
};

}  // namespace shortwave
