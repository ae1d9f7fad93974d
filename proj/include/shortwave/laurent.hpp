// laurent.hpp
//
// Truncated Laurent series about s = 1 and the residue main term
// Res_{s=1} L(s) y^s / s = y * P(ln y).

#pragma once

#include <vector>

namespace shortwave {

// sum_{j} coeffs[j] (s-1)^(min_order + j), valid through
// (s-1)^(min_order + coeffs.size() - 1).  Nonzero series are stored with a
// nonzero leading coefficient.
class LaurentSeries {
public:
    LaurentSeries() = default;
    LaurentSeries(int min_order, std::vector<double> coeffs);

    int min_order() const { return min_order_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    // Highest power of (s-1) whose coefficient is known.
    int valid_through() const { return min_order_ + static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const;
    // Coefficient of (s-1)^power; 0 below min_order, throws above valid_through.
    double coefficient(int power) const;

private:
    int min_order_ = 0;
    std::vector<double> coeffs_;
};

LaurentSeries laurent_mul(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries laurent_pow(const LaurentSeries& a, int k);

// 1/(s-1) + sum_{n<=q} (-1)^n gamma_n (s-1)^n / n!.
LaurentSeries zeta_laurent(int q);

// Polynomial in u = ln y, lowest degree first.
using Polynomial = std::vector<double>;

// P with MainTerm(y) = y * P(ln y); empty when the series has no pole.
Polynomial main_term_polynomial(const LaurentSeries& series);

double evaluate_polynomial(const Polynomial& p, double u);

}  // namespace shortwave
