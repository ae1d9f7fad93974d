#include "shortwave/stieltjes.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace shortwave {

const std::array<double, kStieltjesCount> kStieltjesReference = {
    0.57721566490153286061,    -0.072815845483676724861, -0.0096903631928723184845,
    0.0020538344203033458662,  0.0023253700654673000575, 0.00079332381730106270175,
    -0.00023876934543019960987, -0.00052728956705775104607, -0.00035212335380303950960,
    -0.000034394774418088048178,
};

namespace {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<80>>;

// f(x) = (ln x)^n / x.  Its r-th derivative is x^{-1-r} Q_r(ln x) with
// Q_{r+1}(L) = -(1+r) Q_r(L) + Q_r'(L).
std::vector<Real> next_derivative(const std::vector<Real>& q, int r) {
    std::vector<Real> out(q.size(), Real(0));
    for (std::size_t i = 0; i < q.size(); ++i) out[i] = -Real(1 + r) * q[i];
    for (std::size_t i = 1; i < q.size(); ++i) out[i - 1] += Real(static_cast<long>(i)) * q[i];
    return out;
}

Real eval_poly(const std::vector<Real>& q, const Real& x) {
    Real r = 0;
    for (auto it = q.rbegin(); it != q.rend(); ++it) r = r * x + *it;
    return r;
}

Real stieltjes_mp(int n, int cutoff, int terms) {
    Real sum = 0;
    for (int k = 2; k <= cutoff; ++k) {
        Real lk = log(Real(k));
        sum += pow(lk, n) / k;
    }
    if (n == 0) sum += 1;  // k = 1 term: (ln 1)^0 / 1
    Real M = cutoff;
    Real L = log(M);
    sum -= pow(L, n + 1) / (n + 1);
    sum -= pow(L, n) / (2 * M);

    std::vector<Real> q(static_cast<std::size_t>(n) + 1, Real(0));
    q[static_cast<std::size_t>(n)] = 1;
    Real fact = 1;  // (2j)!
    int order = 0;
    for (int j = 1; j <= terms; ++j) {
        // Advance to derivative of order 2j-1.
        while (order < 2 * j - 1) {
            q = next_derivative(q, order);
            ++order;
        }
        fact *= Real(2 * j - 1) * Real(2 * j);
        Real b2j = boost::math::bernoulli_b2n<Real>(j);
        Real deriv = eval_poly(q, L) / pow(M, 2 * j);  // x^{-1-(2j-1)}
        sum -= b2j / fact * deriv;
    }
    return sum;
}

}  // namespace

double compute_stieltjes(int n, int cutoff, int bernoulli_terms) {
    if (n < 0 || cutoff < 2 || bernoulli_terms < 0) {
        throw std::invalid_argument("compute_stieltjes: bad arguments");
    }
    return static_cast<double>(stieltjes_mp(n, cutoff, bernoulli_terms));
}

const std::array<double, kStieltjesCount>& stieltjes_constants() {
    static const std::array<double, kStieltjesCount> table = [] {
        std::array<double, kStieltjesCount> t{};
        for (int n = 0; n < kStieltjesCount; ++n) {
            t[static_cast<std::size_t>(n)] = compute_stieltjes(n, 200, 30);
            double ref = kStieltjesReference[static_cast<std::size_t>(n)];
            if (std::fabs(t[static_cast<std::size_t>(n)] - ref) > 1e-10) {
                std::ostringstream os;
                os.precision(17);
                os << "Stieltjes constant gamma_" << n << " computed as "
                   << t[static_cast<std::size_t>(n)] << " but reference is " << ref;
                throw std::runtime_error(os.str());
            }
        }
        return t;
    }();
    return table;
}

}  // namespace shortwave
