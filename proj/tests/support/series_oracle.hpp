#pragma once

// Brute-force oracle for the weight series, independent of the library:
// std::lgamma instead of the in-tree Lanczos, long double accumulation, plain
// term-by-term sums with explicit cutoffs. Everything is parameterized by
// (xa, xb, m) where m is the overlap plus the scenario shift.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

inline long double lw_shifted(long long xa, long long xb, long long m, long long x) {
    const auto lg = [](long double v) { return std::lgammal(v); };
    return lg(static_cast<long double>(x + xa + 1)) + lg(static_cast<long double>(x + xb + 1))
           - lg(static_cast<long double>(x + 1))
           - lg(static_cast<long double>(x + xa + xb + m + 1));
}

inline long double lw_flat(long long xa, long long xb, long long nab, long long x) {
    const long long nf = xa + xb + nab;
    const auto lg = [](long double v) { return std::lgammal(v); };
    return lg(static_cast<long double>(x + xa + 1)) + lg(static_cast<long double>(x + xb + 1))
           - lg(static_cast<long double>(x + 1)) - lg(static_cast<long double>(x + nf + 2))
           - std::log(static_cast<long double>(x + nf + 1));
}

// sum_{x=0}^{cut} x^p w(x) scaled by exp(-lw(0)). The guard rejects cutoffs
// that stop while terms still matter; callers pick cases that decay fast.
inline long double raw_sum_shifted(long long xa, long long xb, long long m, int p,
                                   long long cut) {
    const long double scale = lw_shifted(xa, xb, m, 0);
    long double acc = 0.0L;
    long double last = 0.0L;
    for (long long x = 0; x <= cut; ++x) {
        long double t = std::exp(lw_shifted(xa, xb, m, x) - scale);
        for (int i = 0; i < p; ++i) t *= static_cast<long double>(x);
        acc += t;
        last = t;
    }
    if (!(last < 1e-18L * acc))
        throw std::runtime_error("oracle cutoff too small for this case");
    return acc;
}

inline long double raw_sum_flat(long long xa, long long xb, long long nab, int p, long long cut) {
    const long double scale = lw_flat(xa, xb, nab, 0);
    long double acc = 0.0L;
    long double last = 0.0L;
    for (long long x = 0; x <= cut; ++x) {
        long double t = std::exp(lw_flat(xa, xb, nab, x) - scale);
        for (int i = 0; i < p; ++i) t *= static_cast<long double>(x);
        acc += t;
        last = t;
    }
    if (!(last < 1e-18L * acc))
        throw std::runtime_error("oracle cutoff too small for this case");
    return acc;
}

// <X^p> by brute force.
inline double moment_shifted(long long xa, long long xb, long long m, int p, long long cut) {
    return static_cast<double>(raw_sum_shifted(xa, xb, m, p, cut)
                               / raw_sum_shifted(xa, xb, m, 0, cut));
}

inline double moment_flat(long long xa, long long xb, long long nab, int p, long long cut) {
    return static_cast<double>(raw_sum_flat(xa, xb, nab, p, cut)
                               / raw_sum_flat(xa, xb, nab, 0, cut));
}

// log sum w(x), for checking the closed-form normalization.
inline double log_norm_shifted(long long xa, long long xb, long long m, long long cut) {
    const long double scale = lw_shifted(xa, xb, m, 0);
    return static_cast<double>(std::log(raw_sum_shifted(xa, xb, m, 0, cut)) + scale);
}

// Normalized pmf table for brute-force interval checks.
inline std::vector<double> pmf_shifted(long long xa, long long xb, long long m, long long cut) {
    const long double z = raw_sum_shifted(xa, xb, m, 0, cut);
    const long double scale = lw_shifted(xa, xb, m, 0);
    std::vector<double> out(static_cast<std::size_t>(cut + 1));
    for (long long x = 0; x <= cut; ++x)
        out[static_cast<std::size_t>(x)] =
            static_cast<double>(std::exp(lw_shifted(xa, xb, m, x) - scale) / z);
    return out;
}

// Shortest window with mass >= target; ties by mass, then lower endpoint.
// Quadratic scan, deliberately unrelated to the library implementation.
struct Window {
    long long lo = 0, hi = 0;
    double mass = 0.0;
};

inline Window shortest_window(const std::vector<double>& pmf, double target) {
    const long long n = static_cast<long long>(pmf.size());
    Window best;
    long long best_width = n + 1;
    for (long long lo = 0; lo < n; ++lo) {
        double mass = 0.0;
        for (long long hi = lo; hi < n; ++hi) {
            mass += pmf[static_cast<std::size_t>(hi)];
            if (mass >= target) {
                const long long width = hi - lo + 1;
                const bool better =
                    width < best_width
                    || (width == best_width && mass > best.mass + 1e-12 * target);
                if (better) {
                    best_width = width;
                    best = {lo, hi, mass};
                }
                break;
            }
        }
    }
    return best;
}

}  // namespace oracle
