#include "shortwave/window.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace shortwave {

namespace {

double bump(double t) {
    if (t <= WindowW::kLower || t >= WindowW::kUpper) return 0.0;
    return std::exp(-1.0 / ((t - WindowW::kLower) * (WindowW::kUpper - t)));
}

double integrate_bump(double scale) {
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [scale](double t) { return scale * bump(t); }, WindowW::kLower, WindowW::kUpper, 15, 1e-15, &err);
}

constexpr std::size_t kBlock = 256;

}  // namespace

WindowW::WindowW() : C_(1.0 / integrate_bump(1.0)) {}

double WindowW::operator()(double t) const { return C_ * bump(t); }

double WindowW::mass() const { return integrate_bump(C_); }

const WindowW& window_w() {
    static const WindowW w;
    return w;
}

WindowResult window_expectation(const DualSpectrum& s, double X, double delta, int k, double rel_tol,
                                double nodes_per_oscillation, int max_refinements) {
    if (k < 1 || k > 6) throw std::invalid_argument("window_expectation: k must be in [1, 6]");
    if (!(X > 0.0)) throw std::invalid_argument("window_expectation: X must be > 0");
    if (!(nodes_per_oscillation >= 10.0)) {
        throw std::invalid_argument("window_expectation: need at least 10 nodes per oscillation");
    }
    WindowResult res;
    if (s.n.empty()) return res;

    const WindowW& W = window_w();
    const double pref = 2.0 * s.root_number / std::numbers::pi;
    const double two_pi = 2.0 * std::numbers::pi;
    std::size_t J = s.n.size();
    std::vector<double> amp(J);
    for (std::size_t j = 0; j < J; ++j) {
        amp[j] = s.amplitude[j] * std::sin(std::numbers::pi * s.freq[j].value() * delta);
    }

    double top = s.freq.back().value();
    double oscillations = (WindowW::kUpper - WindowW::kLower) * X * k * top;
    auto n0 = static_cast<std::uint64_t>(std::ceil(std::max(64.0, nodes_per_oscillation * oscillations)));
    if (n0 > (1ULL << 36)) throw std::runtime_error("window_expectation: grid too large for the top frequency");

    // Sums f(t) over t = t0 + i dt for i < count; returns {sum f, sum |f|}.
    auto sweep = [&](double t0, double dt, std::uint64_t count) {
        CompensatedSum sum;
        CompensatedSum abs_sum;
        std::vector<double> vals(kBlock);
        DoubleDouble half_delta(0.5 * delta);
        for (std::uint64_t start = 0; start < count; start += kBlock) {
            std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, count - start));
            std::fill(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(len), 0.0);
            // x = X (t0 + i dt) in double-double; phase of term j is 2 pi n_breve (x + delta/2) + phi.
            DoubleDouble t_start = DoubleDouble(t0) + DoubleDouble(dt) * DoubleDouble(static_cast<double>(start));
            DoubleDouble x0 = DoubleDouble(X) * t_start + half_delta;
            DoubleDouble dx = DoubleDouble(X) * DoubleDouble(dt);
            for (std::size_t j = 0; j < J; ++j) {
                double a = amp[j];
                double th = two_pi * dd_frac(s.freq[j] * x0) + s.phase;
                double step = two_pi * dd_frac(s.freq[j] * dx);
                std::complex<double> z = std::polar(1.0, th);
                std::complex<double> r = std::polar(1.0, step);
                for (std::size_t i = 0; i < len; ++i) {
                    vals[i] += a * z.real();
                    z *= r;
                }
            }
            for (std::size_t i = 0; i < len; ++i) {
                double t = (t_start + DoubleDouble(dt) * DoubleDouble(static_cast<double>(i))).value();
                double w = W(t);
                if (w == 0.0) continue;
                double f = w * std::pow(pref * vals[i], k);
                sum.add(f);
                abs_sum.add(std::fabs(f));
            }
        }
        return std::pair{sum.value(), abs_sum.value()};
    };

    double span = WindowW::kUpper - WindowW::kLower;
    std::uint64_t n = n0;
    double h = span / static_cast<double>(n);
    auto [s0, a0] = sweep(WindowW::kLower + h, h, n - 1);
    double sum = s0;
    double abs_sum = a0;
    double estimate = h * sum;
    res.nodes = n - 1;
    for (int level = 1; level <= max_refinements; ++level) {
        n *= 2;
        h = span / static_cast<double>(n);
        auto [s1, a1] = sweep(WindowW::kLower + h, 2.0 * h, n / 2);
        sum += s1;
        abs_sum += a1;
        double next = h * sum;
        res.nodes = n - 1;
        res.refinements = level;
        res.achieved_error = std::fabs(next - estimate);
        estimate = next;
        if (res.achieved_error <= rel_tol * h * abs_sum) {
            res.value = estimate;
            return res;
        }
    }
    throw std::runtime_error("window_expectation: quadrature did not converge (achieved error " +
                             std::to_string(res.achieved_error) + ")");
}

}  // namespace shortwave
