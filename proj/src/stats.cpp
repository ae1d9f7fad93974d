#include "shortwave/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace shortwave {

namespace {

double mean_of(std::vector<double> v) { return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size()); }

}  // namespace

double cdf_normal(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

double gaussian_moment(int k) {
    if (k < 0) throw std::invalid_argument("gaussian_moment: k must be >= 0");
    if (k % 2 == 1) return 0.0;
    // (k-1)!! = k! / (2^{k/2} (k/2)!)
    double r = 1.0;
    for (int j = k - 1; j > 1; j -= 2) r *= j;
    return r;
}

double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Dual series converges quickly for small lambda.
        double s = 0.0;
        double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        for (int j = 1; j < 100; ++j) {
            double term = std::exp(-(2.0 * j - 1) * (2.0 * j - 1) * c);
            s += term;
            if (term < 1e-17 * s) break;
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int j = 1; j < 100; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        s += (j % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_statistic(std::span<const double> z) {
    if (z.size() < 30) throw std::invalid_argument("ks_statistic: need M >= 30");
    std::vector<double> s(z.begin(), z.end());
    std::sort(s.begin(), s.end());
    auto M = static_cast<double>(s.size());
    double D = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double F = cdf_normal(s[i]);
        D = std::max(D, std::max(static_cast<double>(i + 1) / M - F, F - static_cast<double>(i) / M));
    }
    return {D, kolmogorov_tail(std::sqrt(M) * D)};
}

Summary summarize(std::span<const double> z) {
    if (z.empty()) throw std::invalid_argument("empty sample");
    std::size_t M = z.size();
    Summary s;
    s.mean = mean_of(std::vector<double>(z.begin(), z.end()));
    std::vector<double> p2(M), p3(M), p4(M);
    for (std::size_t i = 0; i < M; ++i) {
        double c = z[i] - s.mean;
        p2[i] = c * c;
        p3[i] = p2[i] * c;
        p4[i] = p2[i] * p2[i];
    }
    double m2 = mean_of(p2);
    double m3 = mean_of(p3);
    double m4 = mean_of(p4);
    s.variance = m2;
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    if (M >= 30) {
        auto ks = ks_statistic(z);
        s.ks_D = ks.D;
        s.ks_p = ks.p_value;
    }
    return s;
}

SampleRun sample_uniform(const LFunctionDescriptor& d, const SummatoryOracle& oracle, double X, double delta,
                         std::size_t M, std::uint64_t seed, double sigma, int workers, const DualSpectrum* dual) {
    if (M == 0) throw std::invalid_argument("empty sample");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(X > 1.0)) throw std::invalid_argument("X must be > 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    if (!dual) {
        std::uint64_t top = floor_power(2.0 * X + delta, d.m());
        if (top > oracle.max_T()) {
            throw std::out_of_range("sample_uniform: (2X + delta)^m = " + std::to_string(top) +
                                    " exceeds oracle range " + std::to_string(oracle.max_T()));
        }
    }
    SampleRun run;
    run.seed = seed;
    run.descriptor_id = d.id();
    run.X = X;
    run.delta = delta;
    run.M = M;
    run.method = dual ? "dual" : "direct";
    run.N = dual ? dual->N : 0;
    run.sigma = sigma;
    run.validity_ratio = std::log(1.0 / delta) / std::log(X);
    run.validity_advisory = run.validity_ratio > kValidityThreshold;
    run.x.resize(M);
    run.z.resize(M);
    parallel_for(M, resolve_workers(workers), [&](std::size_t i) {
        double x = X * (1.0 + uniform_at(seed, i));
        run.x[i] = x;
        run.z[i] = dual ? delta_approx(*dual, x, delta) / sigma : delta_pair_normalized(d, oracle, x, delta, sigma);
    });
    run.summary = summarize(run.z);
    return run;
}

std::vector<MomentEstimate> empirical_moments(std::span<const double> z, int k_max) {
    if (z.size() < 30) throw std::invalid_argument("empirical_moments: need M >= 30");
    if (k_max < 1) throw std::invalid_argument("empirical_moments: k_max must be >= 1");
    std::size_t M = z.size();
    double center = mean_of(std::vector<double>(z.begin(), z.end()));
    std::vector<double> y(M);
    for (std::size_t i = 0; i < M; ++i) y[i] = z[i] - center;

    // Power sums S_p = sum y^p for p <= k_max.
    std::vector<double> S(static_cast<std::size_t>(k_max) + 1, 0.0);
    {
        std::vector<double> col(M);
        for (int p = 0; p <= k_max; ++p) {
            for (std::size_t i = 0; i < M; ++i) col[i] = std::pow(y[i], p);
            S[p] = pairwise_sum(col);
        }
    }
    std::vector<MomentEstimate> out;
    double var_all = S[2] / static_cast<double>(M);
    if (!(var_all > 0.0)) {
        for (int k = 1; k <= k_max; ++k) out.push_back({k, 0.0, 0.0});
        return out;
    }

    // Studentized moment of a sample described by power sums about 0,
    // count n and mean mu: (1/n) sum ((y - mu)/s)^k.
    std::vector<std::vector<double>> binom(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        binom[k].assign(static_cast<std::size_t>(k) + 1, 1.0);
        for (int p = 1; p < k; ++p) binom[k][p] = binom[k - 1][p - 1] + binom[k - 1][p];
    }
    auto moment_from = [&](const std::vector<double>& sums, double n, int k) {
        double mu = sums[1] / n;
        double m2 = sums[2] / n - mu * mu;
        if (!(m2 > 0.0)) return 0.0;
        double c = 0.0;
        for (int p = 0; p <= k; ++p) c += binom[k][p] * sums[p] * std::pow(-mu, k - p);
        return c / n / std::pow(m2, 0.5 * k);
    };

    auto n = static_cast<double>(M);
    std::vector<double> loo(S.size());
    std::vector<double> theta(M);
    for (int k = 1; k <= k_max; ++k) {
        double full = moment_from(S, n, k);
        for (std::size_t i = 0; i < M; ++i) {
            double yp = 1.0;
            for (int p = 0; p <= k_max; ++p) {
                loo[p] = S[p] - yp;
                yp *= y[i];
            }
            theta[i] = moment_from(loo, n - 1.0, k);
        }
        double tbar = mean_of(theta);
        std::vector<double> dev(M);
        for (std::size_t i = 0; i < M; ++i) dev[i] = (theta[i] - tbar) * (theta[i] - tbar);
        double se = std::sqrt((n - 1.0) / n * pairwise_sum(dev));
        out.push_back({k, full, se});
    }
    return out;
}

nlohmann::json summary_json(const SampleRun& run) {
    return {{"seed", run.seed},
            {"descriptor_id", run.descriptor_id},
            {"X", run.X},
            {"delta", run.delta},
            {"M", run.M},
            {"method", run.method},
            {"N", run.N},
            {"sigma", run.sigma},
            {"validity_ratio", run.validity_ratio},
            {"validity_advisory", run.validity_advisory},
            {"mean", run.summary.mean},
            {"variance", run.summary.variance},
            {"skewness", run.summary.skewness},
            {"kurtosis", run.summary.kurtosis},
            {"ks_D", run.summary.ks_D},
            {"ks_p", run.summary.ks_p}};
}

void write_samples_csv(const std::string& path, const SampleRun& run) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fputs("i,x,z\n", f);
    for (std::size_t i = 0; i < run.z.size(); ++i) std::fprintf(f, "%zu,%.17g,%.17g\n", i, run.x[i], run.z[i]);
    std::fclose(f);
}

void write_histogram_csv(const std::string& path, std::span<const double> z, int bins, double lo, double hi) {
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");
    std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
    double width = (hi - lo) / bins;
    for (double v : z) {
        if (v < lo || v >= hi) continue;
        auto b = static_cast<std::size_t>((v - lo) / width);
        count[std::min(b, count.size() - 1)]++;
    }
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fputs("lo,hi,count,density,normal_density\n", f);
    for (int b = 0; b < bins; ++b) {
        double a = lo + b * width;
        double density = z.empty() ? 0.0 : static_cast<double>(count[b]) / (static_cast<double>(z.size()) * width);
        double expected = (cdf_normal(a + width) - cdf_normal(a)) / width;
        std::fprintf(f, "%.10g,%.10g,%zu,%.10g,%.10g\n", a, a + width, count[b], density, expected);
    }
    std::fclose(f);
}

void write_plot_script(const std::string& path, const std::string& histogram_csv) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "set datafile separator ','\n"
        << "set key top left\n"
        << "set xlabel 'z'\n"
        << "set ylabel 'density'\n"
        << "plot '" << histogram_csv << "' every ::1 using (($1+$2)/2):4 with boxes title 'sample', \\\n"
        << "     '' every ::1 using (($1+$2)/2):5 with lines lw 2 title 'N(0,1)'\n";
}

}  // namespace shortwave
