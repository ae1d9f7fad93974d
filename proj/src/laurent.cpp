#include "shortwave/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "shortwave/stieltjes.hpp"

namespace shortwave {

LaurentSeries::LaurentSeries(int min_order, std::vector<double> coeffs)
    : min_order_(min_order), coeffs_(std::move(coeffs)) {
    // Normalize: drop leading zeros, keeping valid_through fixed.
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0.0) ++lead;
    if (lead == coeffs_.size()) {
        if (!coeffs_.empty()) {
            int top = valid_through();
            coeffs_.assign(1, 0.0);
            min_order_ = top;
        }
        return;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
        min_order_ += static_cast<int>(lead);
    }
}

bool LaurentSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double LaurentSeries::coefficient(int power) const {
    if (power < min_order_) return 0.0;
    if (power > valid_through()) {
        throw std::out_of_range("Laurent coefficient of order " + std::to_string(power) +
                                " beyond truncation " + std::to_string(valid_through()));
    }
    return coeffs_[static_cast<std::size_t>(power - min_order_)];
}

LaurentSeries laurent_mul(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.coeffs().empty() || b.coeffs().empty()) return {};
    std::size_t len = std::min(a.coeffs().size(), b.coeffs().size());
    std::vector<double> c(len, 0.0);
    for (std::size_t k = 0; k < len; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i <= k; ++i) s += a.coeffs()[i] * b.coeffs()[k - i];
        c[k] = s;
    }
    return LaurentSeries(a.min_order() + b.min_order(), std::move(c));
}

LaurentSeries laurent_pow(const LaurentSeries& a, int k) {
    if (k < 1) throw std::invalid_argument("laurent_pow: exponent must be positive");
    LaurentSeries r = a;
    for (int i = 1; i < k; ++i) r = laurent_mul(r, a);
    return r;
}

LaurentSeries zeta_laurent(int q) {
    if (q < 0) throw std::invalid_argument("zeta_laurent: negative truncation order");
    const auto& gamma = stieltjes_constants();
    if (static_cast<std::size_t>(q) >= gamma.size()) {
        throw std::out_of_range("zeta_laurent: order " + std::to_string(q) +
                                " exceeds the Stieltjes table (max " +
                                std::to_string(gamma.size() - 1) + ")");
    }
    std::vector<double> c;
    c.push_back(1.0);
    double factorial = 1.0;
    for (int n = 0; n <= q; ++n) {
        if (n > 0) factorial *= n;
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        c.push_back(sign * gamma[static_cast<std::size_t>(n)] / factorial);
    }
    return LaurentSeries(-1, std::move(c));
}

Polynomial main_term_polynomial(const LaurentSeries& series) {
    if (series.is_zero() || series.min_order() >= 0) return {};
    int pole = -series.min_order();
    if (series.valid_through() < -1) {
        throw std::invalid_argument("main_term_polynomial: series truncated at order " +
                                    std::to_string(series.valid_through()) +
                                    ", need coefficients through (s-1)^-1");
    }
    // y^s/s = y * sum_t (s-1)^t * sum_{j<=t} u^j/j! (-1)^(t-j).
    Polynomial p(static_cast<std::size_t>(pole), 0.0);
    for (int t = 0; t < pole; ++t) {
        double lt = series.coefficient(-1 - t);
        double inv_fact = 1.0;
        for (int j = 0; j <= t; ++j) {
            if (j > 0) inv_fact /= j;
            double sign = ((t - j) % 2 == 0) ? 1.0 : -1.0;
            p[static_cast<std::size_t>(j)] += lt * sign * inv_fact;
        }
    }
    return p;
}

double evaluate_polynomial(const Polynomial& p, double u) {
    double r = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * u + *it;
    return r;
}

}  // namespace shortwave
