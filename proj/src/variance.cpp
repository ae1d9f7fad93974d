#include "shortwave/variance.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "shortwave/numeric.hpp"
#include "shortwave/voronoi.hpp"

namespace shortwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoOverPiSq = 2.0 / (kPi * kPi);

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

// Frequency n_breve for plain double evaluation in hot loops.
struct Breve {
    int m;
    double scale;  // m D^{-1/m}
    explicit Breve(const LFunctionDescriptor& d)
        : m(d.m()), scale(d.m() * std::pow(d.conductor(), -1.0 / d.m())) {}
    double operator()(double n) const {
        if (m == 2) return scale * std::sqrt(n);
        if (m == 3) return scale * std::cbrt(n);
        return scale * std::pow(n, 1.0 / m);
    }
};

// Least-squares polynomial in the scaled variable t = (u - center) / half_width.
struct ScaledFit {
    double center = 0.0;
    double half_width = 1.0;
    std::vector<double> c;

    double value(double u) const {
        double t = (u - center) / half_width;
        double s = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) s = s * t + c[j];
        return s;
    }
    double derivative(double u) const {
        double t = (u - center) / half_width;
        double s = 0.0;
        for (std::size_t j = c.size(); j-- > 1;) s = s * t + static_cast<double>(j) * c[j];
        return s / half_width;
    }
    Polynomial in_u() const {
        // Expand sum c_j ((u - center)/h)^j.
        Polynomial p(c.size(), 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            double coef = c[j] / std::pow(half_width, static_cast<double>(j));
            double binom = 1.0;
            for (std::size_t i = 0; i <= j; ++i) {
                p[i] += coef * binom * std::pow(-center, static_cast<double>(j - i));
                binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
            }
        }
        return p;
    }
};

ScaledFit fit_polynomial(const std::vector<double>& u, const std::vector<double>& v, int degree) {
    if (static_cast<int>(u.size()) < degree + 1) {
        throw std::runtime_error("mean-square fit: too few checkpoints for degree " + std::to_string(degree));
    }
    ScaledFit f;
    auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    f.center = 0.5 * (*lo + *hi);
    f.half_width = std::max(0.5 * (*hi - *lo), 1e-12);
    int k = degree + 1;
    std::vector<double> A(static_cast<std::size_t>(k * k), 0.0);
    std::vector<double> b(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double t = (u[i] - f.center) / f.half_width;
        std::vector<double> pw(static_cast<std::size_t>(k), 1.0);
        for (int j = 1; j < k; ++j) pw[j] = pw[j - 1] * t;
        for (int r = 0; r < k; ++r) {
            b[r] += pw[r] * v[i];
            for (int c = 0; c < k; ++c) A[r * k + c] += pw[r] * pw[c];
        }
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r) {
            if (std::fabs(A[r * k + col]) > std::fabs(A[piv * k + col])) piv = r;
        }
        if (A[piv * k + col] == 0.0) throw std::runtime_error("mean-square fit: singular normal equations");
        if (piv != col) {
            for (int c = 0; c < k; ++c) std::swap(A[col * k + c], A[piv * k + c]);
            std::swap(b[col], b[piv]);
        }
        for (int r = col + 1; r < k; ++r) {
            double factor = A[r * k + col] / A[col * k + col];
            for (int c = col; c < k; ++c) A[r * k + c] -= factor * A[col * k + c];
            b[r] -= factor * b[col];
        }
    }
    f.c.assign(static_cast<std::size_t>(k), 0.0);
    for (int r = k - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < k; ++c) s -= A[r * k + c] * f.c[c];
        f.c[r] = s / A[r * k + r];
    }
    return f;
}

// (2/pi^2) integral over y in (a, b] of sin^2(pi n_breve delta)/(y n_breve) d(y Q(ln y)),
// taken in v = n_breve with Gauss-Legendre panels of half a period.
double model_tail(const LFunctionDescriptor& d, const ScaledFit& q, double delta, double a, double b) {
    if (b <= a) return 0.0;
    int m = d.m();
    double D = d.conductor();
    auto y_of_v = [&](double v) { return D * std::pow(v / m, m); };
    auto v_of_y = [&](double y) { return m * std::pow(y / D, 1.0 / m); };
    auto integrand = [&](double v) {
        double y = y_of_v(v);
        double u = std::log(y);
        double density = q.value(u) + q.derivative(u);
        double dy_dv = D * std::pow(v / m, m - 1);
        double s = std::sin(kPi * v * delta);
        return s * s / (y * v) * density * dy_dv;
    };
    double va = v_of_y(a);
    double vb = v_of_y(b);
    double panel = 0.5 / delta;
    double panels = (vb - va) / panel;
    if (panels > 1e7) throw std::runtime_error("model tail: too many oscillations to integrate");
    CompensatedSum acc;
    double start = va;
    while (start < vb) {
        double end = std::min(vb, std::floor(start / panel + 1.0) * panel);
        if (end <= start) end = std::min(vb, start + panel);
        acc.add(boost::math::quadrature::gauss<double, 20>::integrate(integrand, start, end));
        start = end;
    }
    return kTwoOverPiSq * acc.value();
}

struct LocalFamily {
    enum Kind { TauK, Gaussian } kind;
    int k = 2;
    double lambda_scale = 1.0;
};

LocalFamily local_family(const LFunctionDescriptor& d) {
    const std::string& id = d.id();
    if (id.rfind("tau_", 0) == 0) return {LocalFamily::TauK, std::stoi(id.substr(4)), 1.0};
    if (id == "gaussian_ideals") return {LocalFamily::Gaussian, 0, 1.0};
    if (id == "gaussian_lattice") return {LocalFamily::Gaussian, 0, 4.0};
    throw std::invalid_argument("sigma_sq_series: no integer coefficient stream for '" + id + "'");
}

}  // namespace

double sigma_sq_asymptotic(const LFunctionDescriptor& d, double delta, const std::optional<Calibration>& cal) {
    check_delta(delta);
    double c = resolve_rs_c(d, cal);
    int r = d.rs_r();
    return c * std::pow(static_cast<double>(d.m()), r) * delta * std::pow(std::log(1.0 / delta), r - 1);
}

std::vector<double> sigma_sq_truncated_prefixes(const LFunctionDescriptor& d, const CoefficientTable& table,
                                                double delta, const std::vector<std::int64_t>& cutoffs) {
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
    Breve breve_of(d);
    std::vector<double> out;
    CompensatedSum acc;
    std::int64_t n = 1;
    for (std::int64_t cut : cutoffs) {
        if (cut > table.n_max()) {
            throw std::out_of_range("sigma_sq_truncated: N = " + std::to_string(cut) + " exceeds n_max = " +
                                    std::to_string(table.n_max()));
        }
        for (; n <= cut; ++n) {
            double lam = table.lambda(n);
            if (lam == 0.0) continue;
            double f = breve_of(static_cast<double>(n));
            double s = std::sin(kPi * f * delta);
            acc.add(lam * lam / static_cast<double>(n) * s * s / f);
        }
        out.push_back(kTwoOverPiSq * acc.value());
    }
    return out;
}

double sigma_sq_truncated(const LFunctionDescriptor& d, const CoefficientTable& table, double delta, std::int64_t N) {
    if (N < 0) throw std::invalid_argument("N must be >= 0");
    return sigma_sq_truncated_prefixes(d, table, delta, {N}).front();
}

SeriesRun sigma_sq_series(const LFunctionDescriptor& d, const std::vector<double>& deltas,
                          const std::vector<std::uint64_t>& N, std::uint64_t exact_limit) {
    if (deltas.size() != N.size() || deltas.empty()) {
        throw std::invalid_argument("sigma_sq_series: need one N per delta");
    }
    for (double delta : deltas) check_delta(delta);
    LocalFamily fam = local_family(d);
    std::uint64_t n_top = *std::max_element(N.begin(), N.end());
    std::uint64_t L = std::min(n_top, exact_limit);
    if (L < 1) throw std::invalid_argument("sigma_sq_series: exact limit must be >= 1");

    Breve breve_of(d);
    std::size_t K = deltas.size();
    std::vector<std::uint64_t> stop(K);
    for (std::size_t j = 0; j < K; ++j) stop[j] = std::min(N[j], L);
    std::vector<CompensatedSum> acc(K);
    Int128 s2 = 0;
    std::vector<double> fit_u;
    std::vector<double> fit_v;
    double lscale2 = fam.lambda_scale * fam.lambda_scale;
    std::uint64_t segment = std::clamp<std::uint64_t>(L / 256, 1024, 1u << 20);

    auto sink = [&](std::uint64_t lo, std::span<const std::int64_t> vals) {
        std::vector<double> part(K, 0.0);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            std::int64_t v = vals[i];
            if (v == 0) continue;
            std::uint64_t n = lo + i;
            s2 += static_cast<Int128>(v) * v;
            double nd = static_cast<double>(n);
            double f = breve_of(nd);
            double w = static_cast<double>(v) * static_cast<double>(v) * lscale2 / (nd * f);
            for (std::size_t j = 0; j < K; ++j) {
                if (n > stop[j]) continue;
                double s = std::sin(kPi * f * deltas[j]);
                part[j] += w * s * s;
            }
        }
        for (std::size_t j = 0; j < K; ++j) acc[j].add(part[j]);
        std::uint64_t hi = lo + vals.size() - 1;
        if (hi * 64 >= L && hi >= 16) {
            double y = static_cast<double>(hi);
            fit_u.push_back(std::log(y));
            fit_v.push_back(to_double(s2) * lscale2 / y);
        }
    };
    if (fam.kind == LocalFamily::TauK) {
        int k = fam.k;
        std::vector<std::int64_t> cache;
        for (int a = 0; a < 64; ++a) cache.push_back(a == 0 ? 1 : tau_k_local(k, a));
        segmented_multiplicative(L, [&](std::uint64_t, int a) { return cache[static_cast<std::size_t>(a)]; }, sink,
                                 segment);
    } else {
        segmented_multiplicative(L, gaussian_local, sink, segment);
    }

    SeriesRun run;
    run.streamed_to = L;
    bool need_model = n_top > L;
    ScaledFit q;
    if (need_model) {
        q = fit_polynomial(fit_u, fit_v, d.rs_r() - 1);
        run.mean_square_fit = q.in_u();
    }
    for (std::size_t j = 0; j < K; ++j) {
        SeriesTerm t;
        t.delta = deltas[j];
        t.N = N[j];
        t.exact_limit = stop[j];
        t.exact_part = kTwoOverPiSq * acc[j].value();
        if (N[j] > L) {
            t.model_part = model_tail(d, q, deltas[j], static_cast<double>(L) + 0.5, static_cast<double>(N[j]) + 0.5);
        }
        t.value = t.exact_part + t.model_part;
        run.terms.push_back(t);
    }
    return run;
}

TailCheck tail_bound_check(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                           std::vector<std::int64_t> N_list, double slack) {
    std::sort(N_list.begin(), N_list.end());
    N_list.erase(std::unique(N_list.begin(), N_list.end()), N_list.end());
    TailCheck tc;
    tc.slack = slack;
    tc.N = N_list;
    if (N_list.empty()) return tc;
    if (N_list.front() < 2) throw std::invalid_argument("tail_bound_check: every N must be >= 2");
    tc.sigma_sq = sigma_sq_truncated_prefixes(d, table, delta, N_list);
    int r = d.rs_r();
    for (std::size_t j = 0; j + 1 < N_list.size(); ++j) {
        double n = static_cast<double>(N_list[j]);
        tc.increments.push_back(tc.sigma_sq[j + 1] - tc.sigma_sq[j]);
        tc.bounds.push_back(std::pow(n, -1.0 / d.m()) * std::pow(std::log(n), r - 1));
    }
    if (tc.increments.empty()) return tc;
    tc.C = tc.increments[0] / tc.bounds[0];
    for (std::size_t j = 0; j < tc.increments.size(); ++j) {
        double norm = tc.C > 0.0 ? tc.increments[j] / (tc.C * tc.bounds[j]) : 0.0;
        tc.normalized.push_back(norm);
        if (norm > slack) tc.pass = false;
    }
    return tc;
}

RankinSelbergFit rankin_selberg_fit(const CoefficientTable& table, int r) {
    if (table.n_max() < 10'000) throw std::invalid_argument("rankin_selberg_fit: n_max must be >= 10^4");
    if (r < 1) throw std::invalid_argument("rankin_selberg_fit: r must be >= 1");
    RankinSelbergFit fit;
    std::int64_t n = table.n_max();
    for (std::int64_t div : {8, 4, 2, 1}) {
        std::int64_t y = n / div;
        double yd = static_cast<double>(y);
        fit.y.push_back(y);
        fit.values.push_back(table.prefix_lambda_sq(y) / (yd * std::pow(std::log(2.0 * yd), r - 1)));
    }
    double sum = 0.0;
    for (double v : fit.values) sum += v;
    fit.c_hat = sum / static_cast<double>(fit.values.size());
    auto [lo, hi] = std::minmax_element(fit.values.begin(), fit.values.end());
    fit.spread = fit.c_hat != 0.0 ? (*hi - *lo) / std::fabs(fit.c_hat) : 0.0;
    fit.converged = fit.spread <= 0.5;
    return fit;
}

Calibration calibrate(const LFunctionDescriptor& d, const CoefficientTable& table) {
    if (table.descriptor_id() != d.id()) {
        throw std::invalid_argument("calibrate: table '" + table.descriptor_id() + "' does not match descriptor '" +
                                    d.id() + "'");
    }
    auto fit = rankin_selberg_fit(table, d.rs_r());
    return {d.id(), table.n_max(), fit.c_hat, fit.spread};
}

std::int64_t default_truncation(const LFunctionDescriptor& d, double delta) {
    check_delta(delta);
    return static_cast<std::int64_t>(std::ceil(1e3 * std::pow(delta, -d.m())));
}

VarianceReport variance_report(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                               std::int64_t N, const std::optional<Calibration>& cal) {
    VarianceReport r;
    r.delta = delta;
    r.N_used = N;
    r.sigma_sq_asymptotic = sigma_sq_asymptotic(d, delta, cal);
    r.sigma_sq_truncated = sigma_sq_truncated(d, table, delta, N);
    double c = resolve_rs_c(d, cal);
    double n = static_cast<double>(std::max<std::int64_t>(N, 2));
    r.tail_bound = kTwoOverPiSq * c * std::pow(d.conductor(), 1.0 / d.m()) * std::pow(n, -1.0 / d.m()) *
                   std::pow(std::log(n), d.rs_r() - 1);
    r.ratio = r.sigma_sq_truncated / r.sigma_sq_asymptotic;
    return r;
}

nlohmann::json to_json(const VarianceReport& r) {
    return {{"delta", r.delta},
            {"sigma_sq_asymptotic", r.sigma_sq_asymptotic},
            {"sigma_sq_truncated", r.sigma_sq_truncated},
            {"N_used", r.N_used},
            {"tail_bound", r.tail_bound},
            {"ratio", r.ratio}};
}

std::string format_variance_table(const std::vector<VarianceReport>& rows) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%12s %16s %16s %10s\n", "delta", "sigma2_asym", "sigma2_trunc", "ratio");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%12.4e %16.8e %16.8e %10.6f\n", r.delta, r.sigma_sq_asymptotic,
                      r.sigma_sq_truncated, r.ratio);
        out << line;
    }
    return out.str();
}

}  // namespace shortwave
