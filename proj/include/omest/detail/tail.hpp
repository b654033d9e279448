#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "omest/gammafn.hpp"

namespace omest::detail {

// The posterior weight factors as w(X) = R(X) * P(X):
//
//   P(X) = prod_{j=1..q} (X + d + j)^-1     (q consecutive poles)
//   R(X) = prod_{i=1..x_lo} (X+i)/(X+x_hi+i)
//
// with x_lo = min(x_a,x_b), x_hi = max(x_a,x_b), d = x_a + x_b, and q the
// pole count of the scenario family. R lies in (0,1] and increases toward 1,
// so for any cut x1 the true tail of sum X^p w(X) is bracketed by
// [R(x1+1) * T_p, T_p] where T_p = sum_{X>x1} X^p P(X). T_p itself has an
// exact closed form: expanding X^p over the Newton basis
// e_k(X) = prod_{j=1..k}(X+d+j) makes every term a consecutive-pole product,
// and those telescope:
//   sum_{X>=a} prod_{j=0..L-1}(X+e+j)^-1 = 1/((L-1) prod_{j=0..L-2}(a+e+j)).

// log of sum_{X>x1} prod over the poles k+1..q of the family (d, q).
// Finite iff q - k >= 2.
inline double log_consecutive_tail(double x1, double d, long long q, int k) {
    return -std::log(static_cast<double>(q - k - 1))
           + log_gamma(x1 + d + k + 2.0) - log_gamma(x1 + d + q + 1.0);
}

inline double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

// Coefficients of X^p over the Newton basis with nodes -(d+1),...,-(d+p+1):
// divided differences of t^p. beta[k] multiplies e_k.
inline void newton_coefficients(int p, double d, double beta[5]) {
    double node[5], col[5];
    for (int j = 0; j <= p; ++j) {
        node[j] = -(d + 1.0 + j);
        col[j] = ipow(node[j], p);
    }
    beta[0] = col[0];
    for (int level = 1; level <= p; ++level) {
        for (int j = 0; j + level <= p; ++j)
            col[j] = (col[j + 1] - col[j]) / (node[j + level] - node[j]);
        beta[level] = col[0];
    }
}

// T_p for the pole family (d, q), scaled by exp(-log_scale).
// Returns +inf when the series for X^p diverges (q <= p+1).
inline double scaled_poly_tail(int p, double x1, double d, long long q, double log_scale) {
    if (q <= p + 1) return std::numeric_limits<double>::infinity();
    double beta[5];
    newton_coefficients(p, d, beta);
    double sum = 0.0;
    for (int k = 0; k <= p; ++k)
        sum += beta[k] * std::exp(log_consecutive_tail(x1, d, q, k) - log_scale);
    // The signed Newton terms can cancel at the last few ulps; never let the
    // upper bound dip below zero because of that.
    return std::max(sum, 0.0);
}

// log R(y) with R(y) = prod_{i=1..x_lo} (y+i)/(y+x_hi+i); R in (0,1], increasing.
inline double log_R(double y, long long x_lo, long long x_hi) {
    if (x_lo == 0) return 0.0;
    return log_gamma(y + x_lo + 1.0) - log_gamma(y + 1.0)
           - log_gamma(y + x_hi + x_lo + 1.0) + log_gamma(y + x_hi + 1.0);
}

struct TailBracket {
    double lo = 0.0;
    double hi = 0.0;
};

// Pole-family parameters for one weight family.
struct TailFamily {
    long long x_lo = 0, x_hi = 0;  // R parameters
    double d_lo = 0.0;             // pole offset whose T underestimates P
    double d_hi = 0.0;             // pole offset whose T overestimates P
    long long q = 0;               // poles per product
};

// Scaled bracket on sum_{X>x1} X^p w(X). Floating-point slack is folded in so
// the bracket stays valid despite the ~1e-12 relative error of the pieces.
inline TailBracket tail_bracket(const TailFamily& f, int p, double x1, double log_scale) {
    TailBracket b;
    const double t_hi = scaled_poly_tail(p, x1, f.d_hi, f.q, log_scale);
    if (!std::isfinite(t_hi)) {
        b.lo = 0.0;
        b.hi = std::numeric_limits<double>::infinity();
        return b;
    }
    const double t_lo = (f.d_lo == f.d_hi)
                            ? t_hi
                            : scaled_poly_tail(p, x1, f.d_lo, f.q, log_scale);
    const double r = std::exp(log_R(x1 + 1.0, f.x_lo, f.x_hi));
    b.lo = r * t_lo * (1.0 - 1e-11);
    b.hi = t_hi * (1.0 + 1e-11) + 1e-300;
    return b;
}

}  // namespace omest::detail
