#include "shortwave/coefficients.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace shortwave {

// ---------------------------------------------------------------------------
// CoefficientTable
// ---------------------------------------------------------------------------

CoefficientTable CoefficientTable::from_exact(std::string descriptor_id, std::vector<std::int64_t> exact,
                                              double scale) {
    if (exact.empty()) throw std::invalid_argument("coefficient table needs index 0");
    CoefficientTable t;
    t.descriptor_id_ = std::move(descriptor_id);
    t.scale_ = scale;
    t.exact_ = std::move(exact);
    t.exact_[0] = 0;
    std::size_t n = t.exact_.size();
    t.values_.resize(n);
    t.prefix_exact_.resize(n);
    t.prefix_sq_exact_.resize(n);
    Int128 s = 0;
    Int128 s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Int128 v = t.exact_[i];
        s += v;
        s2 += v * v;
        t.values_[i] = static_cast<double>(t.exact_[i]) / scale;
        t.prefix_exact_[i] = s;
        t.prefix_sq_exact_[i] = s2;
    }
    return t;
}

CoefficientTable CoefficientTable::from_wide_exact(std::string descriptor_id, std::vector<Int128> exact,
                                                   std::vector<double> normalized) {
    if (exact.size() != normalized.size() || exact.empty()) {
        throw std::invalid_argument("wide coefficient table: size mismatch");
    }
    CoefficientTable t;
    t.descriptor_id_ = std::move(descriptor_id);
    t.wide_exact_ = std::move(exact);
    t.wide_exact_[0] = 0;
    t.values_ = std::move(normalized);
    t.values_[0] = 0.0;
    t.build_float_prefixes();
    return t;
}

CoefficientTable CoefficientTable::from_values(std::string descriptor_id, std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("coefficient table needs index 0");
    CoefficientTable t;
    t.descriptor_id_ = std::move(descriptor_id);
    t.values_ = std::move(values);
    t.values_[0] = 0.0;
    t.build_float_prefixes();
    return t;
}

void CoefficientTable::build_float_prefixes() {
    prefix_.resize(values_.size());
    prefix_sq_.resize(values_.size());
    CompensatedSum s;
    CompensatedSum s2;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        s.add(values_[i]);
        s2.add(values_[i] * values_[i]);
        prefix_[i] = s.value();
        prefix_sq_[i] = s2.value();
    }
}

std::optional<Int128> CoefficientTable::exact_value(std::int64_t n) const {
    if (n < 1 || n > n_max()) throw std::out_of_range("coefficient index out of range");
    if (!exact_.empty()) return exact_[static_cast<std::size_t>(n)];
    if (!wide_exact_.empty()) return wide_exact_[static_cast<std::size_t>(n)];
    return std::nullopt;
}

double CoefficientTable::prefix_lambda(std::int64_t T) const {
    if (T < 0) return 0.0;
    if (T > n_max()) {
        throw std::out_of_range("summatory_direct: T = " + std::to_string(T) + " exceeds n_max = " +
                                std::to_string(n_max()));
    }
    auto i = static_cast<std::size_t>(T);
    if (!prefix_exact_.empty()) return to_double(prefix_exact_[i]) / scale_;
    return prefix_[i];
}

double CoefficientTable::prefix_lambda_sq(std::int64_t T) const {
    if (T < 0) return 0.0;
    if (T > n_max()) throw std::out_of_range("prefix_lambda_sq: T exceeds n_max");
    auto i = static_cast<std::size_t>(T);
    if (!prefix_sq_exact_.empty()) return to_double(prefix_sq_exact_[i]) / (scale_ * scale_);
    return prefix_sq_[i];
}

std::optional<Int128> CoefficientTable::prefix_exact(std::int64_t T) const {
    if (prefix_exact_.empty()) return std::nullopt;
    if (T < 0) return Int128(0);
    if (T > n_max()) throw std::out_of_range("prefix_exact: T exceeds n_max");
    return prefix_exact_[static_cast<std::size_t>(T)];
}

std::uint64_t CoefficientTable::checksum() const {
    std::uint64_t h = 1469598103934665603ULL;
    char buf[40];
    for (std::size_t i = 1; i < values_.size(); ++i) {
        int len = std::snprintf(buf, sizeof buf, "%.17g", values_[i]);
        for (int c = 0; c < len; ++c) {
            h ^= static_cast<unsigned char>(buf[c]);
            h *= 1099511628211ULL;
        }
        h ^= static_cast<unsigned char>('\n');
        h *= 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Sieves
// ---------------------------------------------------------------------------

std::vector<std::int64_t> sieve_multiplicative(std::int64_t N, const LocalFactor& local) {
    if (N < 1) throw std::invalid_argument("sieve: N must be >= 1");
    if (N > 4'000'000'000LL) throw std::invalid_argument("sieve: N too large for a stored table");
    auto n_max = static_cast<std::size_t>(N);
    std::vector<std::uint32_t> spf(n_max + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::size_t i = 2; i <= n_max; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            if (p > spf[i] || static_cast<std::uint64_t>(p) * i > n_max) break;
            spf[static_cast<std::size_t>(p) * i] = p;
        }
    }
    // rest[n] = n / p^a and expo[n] = a for the smallest prime p | n.
    std::vector<std::uint32_t> rest(n_max + 1, 1);
    std::vector<std::uint8_t> expo(n_max + 1, 0);
    std::vector<std::int64_t> f(n_max + 1, 0);
    if (n_max >= 1) f[1] = 1;
    for (std::size_t n = 2; n <= n_max; ++n) {
        std::uint32_t p = spf[n];
        std::size_t m = n / p;
        if (m > 1 && spf[m] == p) {
            expo[n] = static_cast<std::uint8_t>(expo[m] + 1);
            rest[n] = rest[m];
        } else {
            expo[n] = 1;
            rest[n] = static_cast<std::uint32_t>(m);
        }
        std::int64_t g = local(p, expo[n]);
        std::int64_t v = 0;
        if (__builtin_mul_overflow(f[rest[n]], g, &v)) {
            std::uint64_t pa = n / rest[n];
            throw std::overflow_error("multiplicative sieve overflow at n = " + std::to_string(n) +
                                      " (p^a = " + std::to_string(pa) + ")");
        }
        f[n] = v;
    }
    return f;
}

std::int64_t tau_k_local(int k, int a) {
    // C(a + k - 1, a)
    Int128 c = 1;
    for (int i = 1; i <= a; ++i) {
        c = c * (k - 1 + i) / i;
        if (c > INT64_MAX) throw std::overflow_error("tau_k local factor overflow");
    }
    return static_cast<std::int64_t>(c);
}

std::int64_t gaussian_local(std::uint64_t p, int a) {
    if (p == 2) return 1;
    if (p % 4 == 1) return a + 1;
    return (a % 2 == 0) ? 1 : 0;
}

CoefficientTable sieve_tau_k(int k, std::int64_t N) {
    if (k < 2) throw std::invalid_argument("sieve_tau_k: k must be >= 2");
    auto f = sieve_multiplicative(N, [k](std::uint64_t, int a) { return tau_k_local(k, a); });
    return CoefficientTable::from_exact("tau_" + std::to_string(k), std::move(f), 1.0);
}

CoefficientTable sieve_gaussian_ideals(std::int64_t N, bool lattice_normalization) {
    auto f = sieve_multiplicative(N, gaussian_local);
    for (auto& v : f) v *= 4;
    return CoefficientTable::from_exact(lattice_normalization ? "gaussian_lattice" : "gaussian_ideals",
                                        std::move(f), lattice_normalization ? 1.0 : 4.0);
}

CoefficientTable eta24_coefficients(std::int64_t N) {
    if (N < 1) throw std::invalid_argument("eta24_coefficients: N must be >= 1");
    if (N > 10'000'000) throw std::invalid_argument("eta24_coefficients: N above 1e7 exceeds the time budget");
    auto len = static_cast<std::size_t>(N);  // coefficients of q^0 .. q^{N-1}
    std::vector<std::int64_t> exps;
    std::vector<std::int64_t> signs;
    for (std::int64_t j = 0;; ++j) {
        std::int64_t e = j * (j + 1) / 2;
        if (e >= N) break;
        exps.push_back(e);
        signs.push_back((j % 2 == 0 ? 1 : -1) * (2 * j + 1));
    }
    std::vector<Int128> c(len, 0);
    c[0] = 1;
    for (int pass = 0; pass < 8; ++pass) {
        for (std::size_t i = len; i-- > 0;) {
            Int128 acc = c[i];
            for (std::size_t j = 1; j < exps.size() && static_cast<std::size_t>(exps[j]) <= i; ++j) {
                Int128 term = 0;
                if (__builtin_mul_overflow(c[i - static_cast<std::size_t>(exps[j])], static_cast<Int128>(signs[j]),
                                           &term) ||
                    __builtin_add_overflow(acc, term, &acc)) {
                    throw std::overflow_error("eta24 overflow of 128-bit accumulator at n = " +
                                              std::to_string(i + 1));
                }
            }
            c[i] = acc;
        }
    }
    std::vector<Int128> tau(len + 1, 0);
    std::vector<double> lambda(len + 1, 0.0);
    for (std::size_t n = 1; n <= len; ++n) {
        tau[n] = c[n - 1];
        long double t = static_cast<long double>(tau[n]);
        lambda[n] = static_cast<double>(t / std::pow(static_cast<long double>(n), 5.5L));
    }
    return CoefficientTable::from_wide_exact("ramanujan", std::move(tau), std::move(lambda));
}

CoefficientTable build_table(const std::string& descriptor_id, std::int64_t N) {
    if (descriptor_id.rfind("tau_", 0) == 0) return sieve_tau_k(std::stoi(descriptor_id.substr(4)), N);
    if (descriptor_id == "gaussian_ideals") return sieve_gaussian_ideals(N, false);
    if (descriptor_id == "gaussian_lattice") return sieve_gaussian_ideals(N, true);
    if (descriptor_id == "ramanujan") return eta24_coefficients(N);
    throw std::invalid_argument("no coefficient generator for descriptor '" + descriptor_id + "'");
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

CoefficientTable load_coefficients(const std::string& path, const std::string& descriptor_id) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open coefficient file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": no rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "n,lambda") throw std::runtime_error(path + ": header must be \"n,lambda\"");
    std::vector<double> values{0.0};
    std::int64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected two columns");
        }
        std::int64_t n = 0;
        double v = 0.0;
        const char* b = line.data();
        auto r1 = std::from_chars(b, b + comma, n);
        if (r1.ec != std::errc() || r1.ptr != b + comma) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": non-numeric n");
        }
        std::size_t start = comma + 1;
        if (start < line.size() && line[start] == '+') ++start;
        auto r2 = std::from_chars(b + start, b + line.size(), v);
        if (r2.ec != std::errc() || r2.ptr != b + line.size() || !std::isfinite(v)) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": non-numeric lambda");
        }
        auto expected = static_cast<std::int64_t>(values.size());
        if (expected == 1 && n != 1) {
            throw std::runtime_error(path + ": n must start at 1 (got " + std::to_string(n) + ")");
        }
        if (n > expected) throw std::runtime_error(path + ": gap at n=" + std::to_string(expected));
        if (n < expected) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": n not ascending");
        }
        values.push_back(v);
    }
    if (values.size() == 1) throw std::runtime_error(path + ": no rows");
    return CoefficientTable::from_values(descriptor_id, std::move(values));
}

void export_coefficients(const CoefficientTable& table, const std::string& csv_path,
                         const std::string& json_path) {
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + csv_path);
    std::fputs("n,lambda\n", f);
    for (std::int64_t n = 1; n <= table.n_max(); ++n) {
        std::fprintf(f, "%lld,%.17g\n", static_cast<long long>(n), table.lambda(n));
    }
    std::fclose(f);
    nlohmann::json meta;
    meta["descriptor_id"] = table.descriptor_id();
    meta["n_max"] = table.n_max();
    std::ostringstream hex;
    hex << std::hex << table.checksum();
    meta["checksum"] = "fnv1a64:" + hex.str();
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("cannot write " + json_path);
    out << meta.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Segmented generator
// ---------------------------------------------------------------------------

std::uint64_t inverse_mod_2_64(std::uint64_t odd) {
    if (odd % 2 == 0) throw std::invalid_argument("inverse_mod_2_64: argument must be odd");
    std::uint64_t inv = odd;
    for (int i = 0; i < 5; ++i) inv *= 2 - odd * inv;
    return inv;
}

void for_each_multiplicative_segment(
    std::uint64_t N, const LocalFactor& local,
    const std::function<void(std::uint64_t, std::span<const std::int64_t>)>& sink,
    std::uint64_t segment_length) {
    segmented_multiplicative(N, local, sink, segment_length);
}

}  // namespace shortwave
