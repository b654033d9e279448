#pragma once

#include <algorithm>
#include <cmath>

#include "omest/moment.hpp"
#include "omest/scenario.hpp"
#include "omest/search_counts.hpp"

namespace omest {

namespace detail {

// Everything below depends on the counts only through x_a, x_b and
// m = n_ab + s, which is what makes the scenario shift exact: evaluating at
// (counts, s) and at (counts with n_ab + s overlap, 0) runs the identical
// arithmetic and returns bit-identical doubles.
inline double shifted_m(const SearchCounts& c, const Scenario& sc) {
    return static_cast<double>(c.nab() + sc.shift());
}

// T_k = prod_{i=1..k} (x_a+i)(x_b+i) / (m-1-i). Finite iff m > k+1.
// Numerator and denominator factors are interleaved so intermediate values
// stay near the result's scale even for counts ~1e5.
inline double falling_term(double xa, double xb, double m, int k) {
    double t = 1.0;
    for (int i = 1; i <= k; ++i) t *= (xa + i) * (xb + i) / (m - 1 - i);
    return t;
}

inline long long min_nab_for(int p, long long shift) {
    return std::max(0LL, static_cast<long long>(p) + 2 - shift);
}

}  // namespace detail

// <X^p> for p = 1..4. Defined iff n_ab + s > p + 1.
inline Moment raw_moment(const SearchCounts& c, const Scenario& sc, int p) {
    if (p < 1 || p > 4)
        throw ValidationError("raw moment order must be 1..4, got " + std::to_string(p));
    if (c.nab() + sc.shift() <= p + 1)
        return Moment::undefined(detail::min_nab_for(p, sc.shift()));

    const double xa = static_cast<double>(c.xa());
    const double xb = static_cast<double>(c.xb());
    const double m = detail::shifted_m(c, sc);

    // X^p = sum_k S(p,k) X^(k) with Stirling numbers of the second kind,
    // and each falling-factorial moment collapses to a single product T_k.
    static const double stirling[5][5] = {
        {0, 0, 0, 0, 0},
        {0, 1, 0, 0, 0},
        {0, 1, 1, 0, 0},
        {0, 1, 3, 1, 0},
        {0, 1, 7, 6, 1},
    };
    double out = 0.0;
    for (int k = 1; k <= p; ++k)
        out += stirling[p][k] * detail::falling_term(xa, xb, m, k);
    return Moment::of(out);
}

// <X> = (x_a+1)(x_b+1)/(m-2), m = n_ab + s. Defined iff m > 2.
inline Moment mean_exact(const SearchCounts& c, const Scenario& sc) {
    if (c.nab() + sc.shift() <= 2) return Moment::undefined(detail::min_nab_for(1, sc.shift()));
    const double m = detail::shifted_m(c, sc);
    return Moment::of((c.xa() + 1.0) * (c.xb() + 1.0) / (m - 2.0));
}

// Simplified central form; avoids the cancellation of <X^2> - <X>^2.
inline Moment variance_exact(const SearchCounts& c, const Scenario& sc) {
    if (c.nab() + sc.shift() <= 3) return Moment::undefined(detail::min_nab_for(2, sc.shift()));
    const double xa = static_cast<double>(c.xa());
    const double xb = static_cast<double>(c.xb());
    const double m = detail::shifted_m(c, sc);
    const double d = m - 2.0;
    return Moment::of((xa + 1.0) * (xb + 1.0) * (m + xa - 1.0) * (m + xb - 1.0)
                      / (d * d * (m - 3.0)));
}

inline Moment sd_exact(const SearchCounts& c, const Scenario& sc) {
    Moment v = variance_exact(c, sc);
    return v.defined() ? Moment::of(std::sqrt(v.value())) : v;
}

// Normalized by the raw second moment (not the central one).
inline Moment skewness_exact(const SearchCounts& c, const Scenario& sc) {
    if (c.nab() + sc.shift() <= 4) return Moment::undefined(detail::min_nab_for(3, sc.shift()));
    const double m1 = raw_moment(c, sc, 1).value();
    const double m2 = raw_moment(c, sc, 2).value();
    const double m3 = raw_moment(c, sc, 3).value();
    return Moment::of((m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1) / std::pow(m2, 1.5));
}

inline Moment kurtosis_exact(const SearchCounts& c, const Scenario& sc) {
    if (c.nab() + sc.shift() <= 5) return Moment::undefined(detail::min_nab_for(4, sc.shift()));
    const double m1 = raw_moment(c, sc, 1).value();
    const double m2 = raw_moment(c, sc, 2).value();
    const double m3 = raw_moment(c, sc, 3).value();
    const double m4 = raw_moment(c, sc, 4).value();
    return Moment::of((m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1 * m1 * m1 * m1)
                      / (m2 * m2));
}

// Bracket for the truly-flat-prior full-search moment: the s=2 value is off by
// at most a factor 1 +- 1/(n_f+1). Undefined propagates from the center.
inline MomentBracket flat_prior_error_bounds(const SearchCounts& c, int p) {
    Moment center = raw_moment(c, Scenario::full_search(), p);
    if (!center.defined()) return {center, center};
    const double delta = 1.0 / (c.nf() + 1.0);
    return {Moment::of(center.value() * (1.0 - delta)),
            Moment::of(center.value() * (1.0 + delta))};
}

inline MomentReport moment_report(const SearchCounts& c, const Scenario& sc) {
    MomentReport r;
    r.mean = mean_exact(c, sc);
    r.variance = variance_exact(c, sc);
    r.sd = sd_exact(c, sc);
    r.skewness = skewness_exact(c, sc);
    r.kurtosis = kurtosis_exact(c, sc);

    if (sc.kind() == ScenarioKind::full_search_almost_constant_prior) {
        const double delta = 1.0 / (c.nf() + 1.0);
        if (r.mean.defined()) {
            r.has_error_bounds = true;
            r.mean_error_bound = r.mean.value() * delta;
        }
        if (r.variance.defined()) {
            // Interval arithmetic on <X^2> and <X> each off by a factor 1+-delta.
            const double m1 = mean_exact(c, sc).value();
            const double m2 = raw_moment(c, sc, 2).value();
            r.variance_error_bound = delta * (m2 + 2.0 * m1 * m1);
        }
    }
    return r;
}

}  // namespace omest
