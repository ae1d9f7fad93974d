// window.hpp
//
// The bump window W on (1/2, 5/2) and windowed expectations
// E^W[Delta_f(x, delta; N)^k] by quadrature.

#pragma once

#include <cstdint>

#include "shortwave/voronoi.hpp"

namespace shortwave {

class WindowW {
public:
    WindowW();
    double C() const { return C_; }
    double operator()(double t) const;
    // Quadrature estimate of the integral of W over its support.
    double mass() const;

    static constexpr double kLower = 0.5;
    static constexpr double kUpper = 2.5;

private:
    double C_ = 0.0;
};

const WindowW& window_w();

struct WindowResult {
    double value = 0.0;
    double achieved_error = 0.0;  // |last - previous| between refinements
    std::uint64_t nodes = 0;
    int refinements = 0;
};

// (1/X) integral of Delta_f(x, delta; N)^k W(x/X) dx by the trapezoid rule
// on a uniform grid, starting at `nodes_per_oscillation` points per period of
// the top frequency k n_breve_N and doubling until successive estimates agree
// to `rel_tol` of the integral of |integrand|.  Throws std::runtime_error
// carrying the achieved error otherwise.
WindowResult window_expectation(const DualSpectrum& s, double X, double delta, int k, double rel_tol = 1e-9,
                                double nodes_per_oscillation = 10.0, int max_refinements = 6);

}  // namespace shortwave
