#include "shortwave/algebra.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <json.hpp>
#include <numbers>
#include <stdexcept>

#include "shortwave/voronoi.hpp"

namespace shortwave {

namespace {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    Mpfr(Mpfr&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

std::string mpfr_to_string(mpfr_srcptr x) {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.30Re", x);
    return buf;
}

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > UINT64_MAX / b) throw std::overflow_error("integer power overflow");
        r *= b;
    }
    return r;
}

void check_limits(std::uint64_t N, int k, const EnumerationLimits& limits) {
    if (k < 1 || k > 16) throw std::invalid_argument("enumeration: k must be in [1, 16]");
    if (N < 1) throw std::invalid_argument("enumeration: N must be >= 1");
    if (!limits.override_defaults && (N > limits.max_N || k > limits.max_k)) {
        throw std::invalid_argument("enumeration budget exceeded: N <= " + std::to_string(limits.max_N) +
                                    " and k <= " + std::to_string(limits.max_k) + " unless overridden");
    }
    double tuples = std::pow(2.0 * static_cast<double>(N), k);
    if (tuples > limits.max_tuples) {
        throw std::invalid_argument("enumeration budget exceeded: " + std::to_string(tuples) + " tuples");
    }
}

// Exact zero test given precomputed kernels (index by n).
bool zero_by_kernels(const std::vector<KernelDecomposition>& ker, const std::uint64_t* ns, const int* eps, int k) {
    // k is small: accumulate signed r per distinct q with a linear scan.
    std::uint64_t qs[16];
    std::int64_t sums[16];
    int groups = 0;
    for (int j = 0; j < k; ++j) {
        const auto& kd = ker[ns[j]];
        int g = 0;
        while (g < groups && qs[g] != kd.q) ++g;
        if (g == groups) {
            qs[groups] = kd.q;
            sums[groups] = 0;
            ++groups;
        }
        sums[g] += eps[j] * static_cast<std::int64_t>(kd.r);
    }
    for (int g = 0; g < groups; ++g) {
        if (sums[g] != 0) return false;
    }
    return true;
}

// Odometer over {+-1}^k x [N]^k: eps pattern outermost with the first position
// most significant, then n descending.
template <class Body>
void for_each_tuple(std::uint64_t N, int k, Body&& body) {
    std::vector<std::uint64_t> ns(static_cast<std::size_t>(k));
    std::vector<int> eps(static_cast<std::size_t>(k));
    for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
        for (int j = 0; j < k; ++j) eps[j] = (pattern >> (k - 1 - j)) & 1u ? -1 : 1;
        std::fill(ns.begin(), ns.end(), N);
        while (true) {
            body(ns.data(), eps.data());
            int j = k - 1;
            while (j >= 0 && ns[j] == 1) {
                ns[j] = N;
                --j;
            }
            if (j < 0) break;
            --ns[j];
        }
    }
}

DiagonalTuple group_tuple(const std::vector<KernelDecomposition>& ker, const std::uint64_t* ns, const int* eps,
                          int k) {
    DiagonalTuple t;
    t.n.assign(ns, ns + k);
    t.eps.assign(eps, eps + k);
    for (int j = 0; j < k; ++j) {
        const auto& kd = ker[ns[j]];
        auto it = std::find_if(t.groups.begin(), t.groups.end(), [&](const DiagonalGroup& g) { return g.q == kd.q; });
        if (it == t.groups.end()) {
            t.groups.push_back({kd.q, {}, {}, {}});
            it = t.groups.end() - 1;
        }
        it->S.push_back(j);
        it->eps.push_back(eps[j]);
        it->r.push_back(kd.r);
    }
    return t;
}

}  // namespace

KernelDecomposition powerfree_kernel(std::uint64_t n, int m) {
    if (n < 1) throw std::invalid_argument("powerfree_kernel: n must be >= 1");
    if (m < 2) throw std::invalid_argument("powerfree_kernel: m must be >= 2");
    if (n > kFactorizationBudget) {
        throw std::invalid_argument("powerfree_kernel: n = " + std::to_string(n) + " exceeds factorization budget");
    }
    KernelDecomposition kd{n, m, 1, 1};
    std::uint64_t rest = n;
    auto take = [&](std::uint64_t p) {
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        kd.q *= ipow(p, e % m);
        kd.r *= ipow(p, e / m);
    };
    take(2);
    for (std::uint64_t p = 3; p * p <= rest; p += 2) {
        if (rest % p == 0) take(p);
    }
    if (rest > 1) kd.q *= rest;
    return kd;
}

std::vector<KernelDecomposition> powerfree_kernels_upto(std::uint64_t N, int m) {
    if (m < 2) throw std::invalid_argument("powerfree_kernels_upto: m must be >= 2");
    std::vector<std::uint32_t> spf(N + 1, 0);
    for (std::uint64_t i = 2; i <= N; ++i) {
        if (spf[i] != 0) continue;
        for (std::uint64_t j = i; j <= N; j += i) {
            if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        }
    }
    std::vector<KernelDecomposition> out(N + 1);
    for (std::uint64_t n = 1; n <= N; ++n) {
        KernelDecomposition kd{n, m, 1, 1};
        std::uint64_t rest = n;
        while (rest > 1) {
            std::uint64_t p = spf[rest];
            int e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            kd.q *= ipow(p, e % m);
            kd.r *= ipow(p, e / m);
        }
        out[n] = kd;
    }
    return out;
}

bool is_zero_alternating(int m, const std::vector<std::uint64_t>& ns, const std::vector<int>& eps) {
    if (ns.size() != eps.size() || ns.empty()) {
        throw std::invalid_argument("is_zero_alternating: need equal, nonempty lists");
    }
    std::map<std::uint64_t, std::int64_t> sums;
    for (std::size_t j = 0; j < ns.size(); ++j) {
        if (eps[j] != 1 && eps[j] != -1) throw std::invalid_argument("is_zero_alternating: signs must be +-1");
        auto kd = powerfree_kernel(ns[j], m);
        sums[kd.q] += eps[j] * static_cast<std::int64_t>(kd.r);
    }
    return std::all_of(sums.begin(), sums.end(), [](const auto& kv) { return kv.second == 0; });
}

MinAlternatingSum min_alternating_sum(int m, std::uint64_t N, int k, const EnumerationLimits& limits) {
    check_limits(N, k, limits);
    if (m < 2) throw std::invalid_argument("min_alternating_sum: m must be >= 2");
    auto ker = powerfree_kernels_upto(N, m);

    MinAlternatingSum res;
    res.m = m;
    res.N = N;
    res.k = k;

    const std::vector<mpfr_prec_t> precisions{128, 256, 512, 1024};
    // Root enclosures per precision, built lazily.
    std::vector<std::vector<Mpfr>> lo_root(precisions.size());
    std::vector<std::vector<Mpfr>> hi_root(precisions.size());
    auto ensure_roots = [&](std::size_t level) {
        if (!lo_root[level].empty()) return;
        mpfr_prec_t prec = precisions[level];
        Mpfr base(prec);
        for (std::uint64_t n = 0; n <= N; ++n) {
            lo_root[level].emplace_back(prec);
            hi_root[level].emplace_back(prec);
            mpfr_set_ui(base.get(), static_cast<unsigned long>(n), MPFR_RNDN);
            mpfr_rootn_ui(lo_root[level].back().get(), base.get(), static_cast<unsigned long>(m), MPFR_RNDD);
            mpfr_rootn_ui(hi_root[level].back().get(), base.get(), static_cast<unsigned long>(m), MPFR_RNDU);
        }
    };
    ensure_roots(0);

    Mpfr best(precisions.back());
    bool have_best = false;
    Mpfr lo(precisions.back());
    Mpfr hi(precisions.back());
    Mpfr mag(precisions.back());
    res.max_precision_used = static_cast<int>(precisions.front());

    for_each_tuple(N, k, [&](const std::uint64_t* ns, const int* eps) {
        ++res.tuples;
        if (zero_by_kernels(ker, ns, eps, k)) {
            ++res.exact_zeros;
            return;
        }
        for (std::size_t level = 0;; ++level) {
            if (level == precisions.size()) {
                std::string tuple;
                for (int j = 0; j < k; ++j) tuple += (eps[j] > 0 ? " +" : " -") + std::to_string(ns[j]);
                throw std::runtime_error("interval failed to separate a nonzero sum from 0 at 1024 bits:" + tuple);
            }
            ensure_roots(level);
            mpfr_prec_t prec = precisions[level];
            mpfr_set_prec(lo.get(), prec);
            mpfr_set_prec(hi.get(), prec);
            mpfr_set_zero(lo.get(), 1);
            mpfr_set_zero(hi.get(), 1);
            for (int j = 0; j < k; ++j) {
                if (eps[j] > 0) {
                    mpfr_add(lo.get(), lo.get(), lo_root[level][ns[j]].get(), MPFR_RNDD);
                    mpfr_add(hi.get(), hi.get(), hi_root[level][ns[j]].get(), MPFR_RNDU);
                } else {
                    mpfr_sub(lo.get(), lo.get(), hi_root[level][ns[j]].get(), MPFR_RNDD);
                    mpfr_sub(hi.get(), hi.get(), lo_root[level][ns[j]].get(), MPFR_RNDU);
                }
            }
            mpfr_set_prec(mag.get(), prec);
            if (mpfr_sgn(lo.get()) > 0) {
                mpfr_set(mag.get(), lo.get(), MPFR_RNDD);
            } else if (mpfr_sgn(hi.get()) < 0) {
                mpfr_neg(mag.get(), hi.get(), MPFR_RNDD);
            } else {
                continue;
            }
            res.max_precision_used = std::max(res.max_precision_used, static_cast<int>(prec));
            if (!have_best || mpfr_less_p(mag.get(), best.get())) {
                mpfr_set(best.get(), mag.get(), MPFR_RNDD);
                have_best = true;
                res.witness_n.assign(ns, ns + k);
                res.witness_eps.assign(eps, eps + k);
            }
            break;
        }
    });

    // Upper enclosure of (k N^{1/m})^{-(m^k-1)} = exp(-(m^k-1) ln(k N^{1/m})).
    Mpfr t(256);
    Mpfr bound(256);
    mpfr_set_ui(t.get(), static_cast<unsigned long>(N), MPFR_RNDD);
    mpfr_rootn_ui(t.get(), t.get(), static_cast<unsigned long>(m), MPFR_RNDD);
    mpfr_mul_ui(t.get(), t.get(), static_cast<unsigned long>(k), MPFR_RNDD);
    mpfr_log(t.get(), t.get(), MPFR_RNDD);
    double exponent = std::pow(static_cast<double>(m), k) - 1.0;
    mpfr_mul_d(t.get(), t.get(), -exponent, MPFR_RNDU);
    mpfr_exp(bound.get(), t.get(), MPFR_RNDU);
    res.bound = mpfr_to_string(bound.get());
    res.log10_bound = -exponent * std::log10(k * std::pow(static_cast<double>(N), 1.0 / m));

    res.found_nonzero = have_best;
    if (have_best) {
        res.min_abs = mpfr_to_string(best.get());
        res.min_abs_value = mpfr_get_d(best.get(), MPFR_RNDN);
        res.above_bound = mpfr_greaterequal_p(best.get(), bound.get()) != 0;
    } else {
        res.above_bound = true;
    }
    return res;
}

void enumerate_diagonal(int m, std::uint64_t N, int k, const std::function<void(const DiagonalTuple&)>& emit,
                        const EnumerationLimits& limits) {
    check_limits(N, k, limits);
    auto ker = powerfree_kernels_upto(N, m);
    for_each_tuple(N, k, [&](const std::uint64_t* ns, const int* eps) {
        if (zero_by_kernels(ker, ns, eps, k)) emit(group_tuple(ker, ns, eps, k));
    });
}

std::uint64_t count_diagonal(int m, std::uint64_t N, int k, const EnumerationLimits& limits) {
    check_limits(N, k, limits);
    auto ker = powerfree_kernels_upto(N, m);
    std::uint64_t count = 0;
    for_each_tuple(N, k, [&](const std::uint64_t* ns, const int* eps) {
        if (zero_by_kernels(ker, ns, eps, k)) ++count;
    });
    return count;
}

void write_diagonal_jsonl(std::ostream& out, int m, std::uint64_t N, int k, const EnumerationLimits& limits) {
    enumerate_diagonal(
        m, N, k,
        [&](const DiagonalTuple& t) {
            nlohmann::json j;
            j["n"] = t.n;
            j["eps"] = t.eps;
            nlohmann::json groups = nlohmann::json::array();
            for (const auto& g : t.groups) groups.push_back({{"q", g.q}, {"S", g.S}, {"eps", g.eps}, {"r", g.r}});
            j["groups"] = groups;
            out << j.dump() << "\n";
        },
        limits);
}

std::uint64_t count_diagonal_numeric(int m, std::uint64_t N, int k) {
    check_limits(N, k, {});
    constexpr mpfr_prec_t prec = 256;
    std::vector<Mpfr> roots;
    for (std::uint64_t n = 0; n <= N; ++n) {
        roots.emplace_back(prec);
        mpfr_set_ui(roots.back().get(), static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_rootn_ui(roots.back().get(), roots.back().get(), static_cast<unsigned long>(m), MPFR_RNDN);
    }
    Mpfr sum(prec);
    Mpfr threshold(prec);
    mpfr_set_str(threshold.get(), "1e-50", 10, MPFR_RNDN);
    std::uint64_t count = 0;
    for_each_tuple(N, k, [&](const std::uint64_t* ns, const int* eps) {
        mpfr_set_zero(sum.get(), 1);
        for (int j = 0; j < k; ++j) {
            if (eps[j] > 0) {
                mpfr_add(sum.get(), sum.get(), roots[ns[j]].get(), MPFR_RNDN);
            } else {
                mpfr_sub(sum.get(), sum.get(), roots[ns[j]].get(), MPFR_RNDN);
            }
        }
        mpfr_abs(sum.get(), sum.get(), MPFR_RNDN);
        if (mpfr_less_p(sum.get(), threshold.get())) ++count;
    });
    return count;
}

namespace {

using Complex = std::complex<double>;

std::vector<double> moment_weights(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                                   std::int64_t N) {
    if (N < 1) throw std::invalid_argument("moment_oracle: N must be >= 1");
    if (N > table.n_max()) throw std::out_of_range("moment_oracle: N exceeds table n_max");
    std::vector<double> b(static_cast<std::size_t>(N) + 1, 0.0);
    for (std::int64_t n = 1; n <= N; ++n) {
        double lam = table.lambda(n);
        if (lam == 0.0) continue;
        double f = breve(static_cast<std::uint64_t>(n), d);
        b[n] = lam / std::sqrt(static_cast<double>(n)) * std::sin(std::numbers::pi * f * delta) / std::sqrt(f);
    }
    return b;
}

std::vector<Complex> convolve(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> c(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == Complex(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

// sum_t P(t) Q(-t) for sequences centred at their midpoints.
Complex pair_at_zero(const std::vector<Complex>& P, const std::vector<Complex>& Q) {
    auto cp = static_cast<std::int64_t>(P.size() / 2);
    auto cq = static_cast<std::int64_t>(Q.size() / 2);
    Complex s(0.0, 0.0);
    for (std::int64_t t = -cp; t <= cp; ++t) {
        if (-t < -cq || -t > cq) continue;
        s += P[static_cast<std::size_t>(t + cp)] * Q[static_cast<std::size_t>(-t + cq)];
    }
    return s;
}

MomentResult finish(const LFunctionDescriptor& d, Complex total, int k, double sum_b2, std::size_t kernels) {
    double pref = std::pow(d.root_number() / std::numbers::pi, k);
    Complex v = pref * total;
    double sigma_sq = 2.0 / (std::numbers::pi * std::numbers::pi) * sum_b2;
    double scale = std::max(std::fabs(v.real()), std::pow(sigma_sq, 0.5 * k));
    if (std::fabs(v.imag()) > 1e-12 * scale) {
        throw std::runtime_error("moment_oracle: imaginary part " + std::to_string(v.imag()) +
                                 " does not vanish (conjugation symmetry broken)");
    }
    return {v.real(), v.imag(), kernels};
}

}  // namespace

MomentResult moment_oracle(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                           std::int64_t N, int k) {
    if (k < 1 || k > 8) throw std::invalid_argument("moment_oracle: k must be in [1, 8]");
    auto b = moment_weights(d, table, delta, N);
    int m = d.m();
    auto ker = powerfree_kernels_upto(static_cast<std::uint64_t>(N), m);
    double phi = d.phase();
    Complex up = std::polar(1.0, phi);
    Complex down = std::polar(1.0, -phi);

    // Group n by kernel q: members[q] lists (r, b).
    std::vector<std::vector<std::pair<std::uint64_t, double>>> members(static_cast<std::size_t>(N) + 1);
    double sum_b2 = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        if (b[n] == 0.0) continue;
        sum_b2 += b[n] * b[n];
        members[ker[n].q].push_back({ker[n].r, b[n]});
    }

    std::vector<double> fact(static_cast<std::size_t>(k) + 1, 1.0);
    for (int j = 1; j <= k; ++j) fact[j] = fact[j - 1] * j;
    std::vector<Complex> G(static_cast<std::size_t>(k) + 1, Complex(0.0, 0.0));
    G[0] = 1.0;
    int half = (k + 1) / 2;
    std::size_t kernels = 0;
    for (std::size_t q = 1; q < members.size(); ++q) {
        const auto& mem = members[q];
        if (mem.empty()) continue;
        ++kernels;
        std::uint64_t R = 0;
        for (const auto& [r, w] : mem) R = std::max(R, r);
        std::vector<Complex> A(2 * R + 1, Complex(0.0, 0.0));
        for (const auto& [r, w] : mem) {
            A[R + r] = w * up;
            A[R - r] = w * down;
        }
        std::vector<std::vector<Complex>> P{{}, A};
        for (int j = 2; j <= half; ++j) P.push_back(convolve(P.back(), A));
        std::vector<Complex> H(static_cast<std::size_t>(k) + 1, Complex(0.0, 0.0));
        H[0] = 1.0;
        for (int j = 2; j <= k; ++j) {
            int a = (j + 1) / 2;
            H[j] = pair_at_zero(P[a], P[j - a]) / fact[j];
        }
        std::vector<Complex> next(G.size(), Complex(0.0, 0.0));
        for (int i = 0; i <= k; ++i) {
            if (G[i] == Complex(0.0, 0.0)) continue;
            for (int j = 0; i + j <= k; ++j) next[i + j] += G[i] * H[j];
        }
        G.swap(next);
    }
    return finish(d, G[k] * fact[k], k, sum_b2, kernels);
}

MomentResult moment_oracle_enumerated(const LFunctionDescriptor& d, const CoefficientTable& table, double delta,
                                      std::int64_t N, int k, const std::vector<int>& relabel) {
    if (k < 1 || k > 6) throw std::invalid_argument("moment_oracle_enumerated: k must be in [1, 6]");
    std::vector<int> perm = relabel;
    if (perm.empty()) {
        for (int j = 0; j < k; ++j) perm.push_back(j);
    }
    {
        std::vector<int> sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        for (int j = 0; j < static_cast<int>(sorted.size()); ++j) {
            if (sorted[static_cast<std::size_t>(j)] != j) sorted.clear();
        }
        if (static_cast<int>(sorted.size()) != k) throw std::invalid_argument("relabel must be a permutation of [k]");
    }
    auto b = moment_weights(d, table, delta, N);
    auto ker = powerfree_kernels_upto(static_cast<std::uint64_t>(N), d.m());
    double phi = d.phase();
    std::vector<std::uint64_t> support;
    double sum_b2 = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        if (b[n] != 0.0) {
            support.push_back(static_cast<std::uint64_t>(n));
            sum_b2 += b[n] * b[n];
        }
    }
    Complex total(0.0, 0.0);
    if (!support.empty()) {
        std::vector<std::uint64_t> ns(static_cast<std::size_t>(k));
        std::vector<int> eps(static_cast<std::size_t>(k));
        std::uint64_t S = support.size();
        for_each_tuple(S, k, [&](const std::uint64_t* idx, const int* e) {
            for (int j = 0; j < k; ++j) {
                ns[perm[j]] = support[idx[j] - 1];
                eps[perm[j]] = e[j];
            }
            if (!zero_by_kernels(ker, ns.data(), eps.data(), k)) return;
            Complex term(1.0, 0.0);
            for (int j = 0; j < k; ++j) term *= b[ns[j]] * std::polar(1.0, eps[j] * phi);
            total += term;
        });
    }
    return finish(d, total, k, sum_b2, 0);
}

}  // namespace shortwave
