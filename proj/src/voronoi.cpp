#include "shortwave/voronoi.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace shortwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double turns(DoubleDouble f, DoubleDouble x) { return dd_frac(f * x); }

double half_power(double x, int m) { return std::pow(x, 0.5 * (m - 1)); }

}  // namespace

DoubleDouble breve_dd(std::uint64_t n, const LFunctionDescriptor& d) {
    if (n == 0) throw std::invalid_argument("breve: n must be >= 1");
    DoubleDouble ratio = DoubleDouble(static_cast<double>(n)) / DoubleDouble(d.conductor());
    return dd_root(ratio, d.m()) * DoubleDouble(static_cast<double>(d.m()));
}

double breve(std::uint64_t n, const LFunctionDescriptor& d) { return breve_dd(n, d).value(); }

bool below_validity_floor(const LFunctionDescriptor& d, double x) {
    return x < std::pow(d.conductor(), 1.0 / (2.0 * d.m()));
}

DualSpectrum make_dual_spectrum(const LFunctionDescriptor& d, const CoefficientTable& table, std::int64_t N) {
    if (N < 0) throw std::invalid_argument("dual sum: N must be >= 0");
    if (N > table.n_max()) {
        throw std::out_of_range("dual sum: N = " + std::to_string(N) + " exceeds table n_max = " +
                                std::to_string(table.n_max()));
    }
    DualSpectrum s;
    s.m = d.m();
    s.root_number = d.root_number();
    s.phase = d.phase();
    s.N = N;
    for (std::int64_t n = 1; n <= N; ++n) {
        double lam = table.lambda(n);
        if (lam == 0.0) continue;
        auto un = static_cast<std::uint64_t>(n);
        DoubleDouble f = breve_dd(un, d);
        s.n.push_back(un);
        s.freq.push_back(f);
        s.amplitude.push_back(lam / std::sqrt(static_cast<double>(n)) / std::sqrt(f.value()));
    }
    return s;
}

DualSpectrum flip_root_number(DualSpectrum s) {
    s.root_number = -s.root_number;
    return s;
}

double reduced_sin(DoubleDouble f, double x, double phi) {
    return std::sin(kTwoPi * turns(f, DoubleDouble(x)) + phi);
}

double dual_sum_truncated(const DualSpectrum& s, double x) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < s.n.size(); ++i) acc.add(s.amplitude[i] * reduced_sin(s.freq[i], x, s.phase));
    return s.root_number / kPi * half_power(x, s.m) * acc.value();
}

std::vector<double> delta_approx_prefixes(const DualSpectrum& s, double x, double delta,
                                          const std::vector<std::int64_t>& cutoffs) {
    std::vector<double> out;
    out.reserve(cutoffs.size());
    DoubleDouble mid = two_sum(x, 0.5 * delta);
    CompensatedSum acc;
    std::size_t i = 0;
    for (std::int64_t cut : cutoffs) {
        if (cut > s.N) throw std::out_of_range("delta_approx: cutoff exceeds spectrum N");
        for (; i < s.n.size() && static_cast<std::int64_t>(s.n[i]) <= cut; ++i) {
            double f = s.freq[i].value();
            double c = std::cos(kTwoPi * turns(s.freq[i], mid) + s.phase);
            acc.add(s.amplitude[i] * std::sin(kPi * f * delta) * c);
        }
        out.push_back(2.0 * s.root_number / kPi * acc.value());
    }
    return out;
}

double delta_approx(const DualSpectrum& s, double x, double delta) {
    return delta_approx_prefixes(s, x, delta, {s.N}).front();
}

std::uint64_t floor_power(double x, int m) {
    if (!(x >= 0.0)) throw std::invalid_argument("floor_power: x must be >= 0");
    DoubleDouble p = dd_pow(DoubleDouble(x), m);
    if (p.hi >= 1.8e19) throw std::out_of_range("floor_power: x^m exceeds 64-bit range");
    DoubleDouble f = dd_floor(p);
    return static_cast<std::uint64_t>(f.hi) + static_cast<std::uint64_t>(static_cast<std::int64_t>(f.lo));
}

double delta_direct(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double x) {
    std::uint64_t T = floor_power(x, d.m());
    double y = dd_pow(DoubleDouble(x), d.m()).value();
    return oracle.sum(T) - d.main_term(y);
}

namespace {

// Delta(y1) - Delta(y0) with y = x^m and y1 = (x + delta)^m.
double delta_increment(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double x, double delta) {
    double x1 = x + delta;
    std::uint64_t T0 = floor_power(x, d.m());
    std::uint64_t T1 = floor_power(x1, d.m());
    double y0 = dd_pow(DoubleDouble(x), d.m()).value();
    double y1 = dd_pow(DoubleDouble(x1), d.m()).value();
    double mt = y1 > y0 ? d.main_term_difference(y0, y1) : 0.0;
    return oracle.sum_difference(T0, T1) - mt;
}

}  // namespace

double delta_pair_normalized(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double x, double delta,
                             double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("delta_pair_normalized: sigma must be > 0");
    if (delta == 0.0) return 0.0;
    return delta_increment(d, oracle, x, delta) / (half_power(x, d.m()) * sigma);
}

double delta_short_interval(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double x, double delta) {
    double h0 = half_power(x, d.m());
    double h1 = half_power(x + delta, d.m());
    double inc = delta_increment(d, oracle, x, delta);
    double base = delta_direct(d, oracle, x);
    return inc / h1 + base * (1.0 / h1 - 1.0 / h0);
}

PhaseFit phase_diagnostic(const LFunctionDescriptor& d, const SummatoryOracle& oracle, const DualSpectrum& s,
                          double X, std::size_t M, std::uint64_t seed, int workers,
                          std::vector<SampleRecord>* records) {
    if (M == 0) throw std::invalid_argument("empty sample");
    std::vector<double> xs(M), direct(M), A(M), B(M);
    parallel_for(M, resolve_workers(workers), [&](std::size_t i) {
        double x = X * (1.0 + uniform_at(seed, i));
        xs[i] = x;
        direct[i] = delta_direct(d, oracle, x);
        CompensatedSum sa;
        CompensatedSum sb;
        for (std::size_t j = 0; j < s.n.size(); ++j) {
            double t = kTwoPi * turns(s.freq[j], DoubleDouble(x));
            sa.add(s.amplitude[j] * std::sin(t));
            sb.add(s.amplitude[j] * std::cos(t));
        }
        double scale = s.root_number / kPi * half_power(x, s.m);
        A[i] = scale * sa.value();
        B[i] = scale * sb.value();
    });
    auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
        std::vector<double> w(M);
        for (std::size_t i = 0; i < M; ++i) w[i] = u[i] * v[i];
        return pairwise_sum(w);
    };
    double saa = dot(A, A);
    double sab = dot(A, B);
    double sbb = dot(B, B);
    double sya = dot(direct, A);
    double syb = dot(direct, B);
    double syy = dot(direct, direct);
    double det = saa * sbb - sab * sab;
    double scale = saa + sbb;
    if (!(scale > 0.0) || !(std::fabs(det) > 1e-12 * scale * scale)) {
        throw std::runtime_error("degenerate fit: the dual-sum design matrix is singular");
    }
    double alpha = (sya * sbb - syb * sab) / det;
    double beta = (syb * saa - sya * sab) / det;
    PhaseFit fit;
    fit.samples = M;
    fit.phi_hat = std::atan2(beta, alpha);
    fit.phi_expected = d.phase();
    fit.phase_error = std::fabs(reduce_phase(fit.phi_hat - fit.phi_expected));
    fit.amplitude = std::hypot(alpha, beta);
    double rss = syy - alpha * sya - beta * syb;
    fit.residual_ratio = syy > 0.0 ? std::sqrt(std::max(rss, 0.0) / syy) : 0.0;
    if (records) {
        records->resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            double approx = std::cos(d.phase()) * A[i] + std::sin(d.phase()) * B[i];
            (*records)[i] = {xs[i], direct[i], approx};
        }
    }
    return fit;
}

std::vector<L2Result> l2_deviation(const LFunctionDescriptor& d, const SummatoryOracle& oracle,
                                   const DualSpectrum& s, double X, double delta, double sigma_sq,
                                   const std::vector<std::int64_t>& cutoffs, std::size_t M, std::uint64_t seed,
                                   int workers, std::vector<SampleRecord>* records) {
    if (M == 0) throw std::invalid_argument("empty sample");
    if (cutoffs.empty()) throw std::invalid_argument("l2_deviation: no truncation given");
    if (!(sigma_sq > 0.0)) throw std::invalid_argument("l2_deviation: sigma^2 must be > 0");
    std::size_t K = cutoffs.size();
    std::vector<double> xs(M), direct(M), approx_last(M);
    std::vector<std::vector<double>> sq(K, std::vector<double>(M));
    parallel_for(M, resolve_workers(workers), [&](std::size_t i) {
        double x = X * (1.0 + uniform_at(seed, i));
        double exact = delta_short_interval(d, oracle, x, delta);
        auto approx = delta_approx_prefixes(s, x, delta, cutoffs);
        xs[i] = x;
        direct[i] = exact;
        approx_last[i] = approx.back();
        for (std::size_t k = 0; k < K; ++k) {
            double e = exact - approx[k];
            sq[k][i] = e * e;
        }
    });
    std::vector<L2Result> out;
    for (std::size_t k = 0; k < K; ++k) {
        double mean = pairwise_sum(sq[k]) / static_cast<double>(M);
        std::vector<double> dev(M);
        for (std::size_t i = 0; i < M; ++i) dev[i] = (sq[k][i] - mean) * (sq[k][i] - mean);
        double var = M > 1 ? pairwise_sum(dev) / static_cast<double>(M - 1) : 0.0;
        L2Result r;
        r.N = cutoffs[k];
        r.mean_sq = mean;
        r.ratio = mean / sigma_sq;
        r.ratio_se = std::sqrt(var / static_cast<double>(M)) / sigma_sq;
        out.push_back(r);
    }
    if (records) {
        records->resize(M);
        for (std::size_t i = 0; i < M; ++i) (*records)[i] = {xs[i], direct[i], approx_last[i]};
    }
    return out;
}

void write_records_csv(const std::string& path, const std::vector<SampleRecord>& records) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fputs("x,direct,approx,diff\n", f);
    for (const auto& r : records) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", r.x, r.direct, r.approx, r.direct - r.approx);
    }
    std::fclose(f);
}

}  // namespace shortwave
