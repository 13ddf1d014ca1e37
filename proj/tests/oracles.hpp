#pragma once
// Reference computations written independently of the library, used to
// check its outputs. Nothing here calls into ssradio.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

inline const std::vector<int> kBarker13{1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1};

inline long aperiodic(const std::vector<int>& a, long k) {
    long s = 0;
    const long n = static_cast<long>(a.size());
    for (long i = 0; i < n; ++i)
        if (i + k >= 0 && i + k < n) s += a[i] * a[i + k];
    return s;
}

inline long circular(const std::vector<int>& a, long k) {
    long s = 0;
    const long n = static_cast<long>(a.size());
    for (long i = 0; i < n; ++i) s += a[i] * a[((i + k) % n + n) % n];
    return s;
}

/// Multiplicative order of x modulo x^degree + sum_i c_i x^i over GF(2),
/// with bit i of `taps` equal to c_i. Equals 2^degree - 1 exactly when the
/// polynomial is primitive. Returns 0 when x never returns to 1.
inline std::uint64_t poly_order_of_x(int degree, std::uint32_t taps) {
    const std::uint32_t top = 1u << degree;
    std::uint32_t r = 1;
    for (std::uint64_t n = 1; n <= top; ++n) {
        r <<= 1;
        if (r & top) r = (r ^ top) ^ taps;
        if (r == 1) return n;
    }
    return 0;
}

/// Brute-force matched filter with a chip held for spc samples.
inline std::vector<double> naive_correlation(const std::vector<std::complex<double>>& x, const std::vector<int>& code,
                                             int spc) {
    const std::size_t len = code.size() * static_cast<std::size_t>(spc);
    std::vector<double> out;
    for (std::size_t k = 0; k + len <= x.size(); ++k) {
        std::complex<double> acc{};
        for (std::size_t i = 0; i < len; ++i) acc += static_cast<double>(code[i / spc]) * x[k + i];
        out.push_back(std::abs(acc));
    }
    return out;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Coherent BPSK bit error probability.
inline double bpsk_ber(double ebn0_db) { return q_function(std::sqrt(2.0 * std::pow(10.0, ebn0_db / 10.0))); }

inline double rayleigh_cdf_unit_power(double r) { return 1.0 - std::exp(-r * r); }

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> x, Cdf cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

/// Asymptotic KS critical value at the 1% level.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

inline long binomial(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Number of 13-chip codes other than `ref` whose zero-lag correlation with
/// `ref` exceeds `fraction` * 13. Correlation is 13 - 2 * (Hamming distance).
inline long codes_passing_threshold(double fraction) {
    long count = 0;
    for (int d = 1; d <= 13; ++d)
        if (13 - 2 * d > fraction * 13.0) count += binomial(13, d);
    return count;
}

inline double range_from_delay(double delay_s) { return 299792458.0 * delay_s / 2.0; }

}  // namespace oracle
