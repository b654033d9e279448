#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "omest/detail/tail.hpp"
#include "omest/errors.hpp"
#include "omest/gammafn.hpp"
#include "omest/moment.hpp"
#include "omest/scenario.hpp"
#include "omest/search_counts.hpp"

namespace omest {

enum class WeightFamily {
    shifted,           // scenario shift folded into the overlap
    flat_full_search,  // full search under the truly flat prior (no shift form)
};

// log of the unnormalized posterior weight of "X items missed".
inline double log_weight(const SearchCounts& c, const Scenario& sc, long long x) {
    if (x < 0) throw ValidationError("posterior support starts at x = 0");
    const double nfs = static_cast<double>(c.nf() + sc.shift());
    return log_gamma(x + c.xa() + 1.0) + log_gamma(x + c.xb() + 1.0)
           - log_gamma(x + 1.0) - log_gamma(x + nfs + 1.0);
}

inline double log_weight_flat(const SearchCounts& c, long long x) {
    if (x < 0) throw ValidationError("posterior support starts at x = 0");
    const double nf = static_cast<double>(c.nf());
    return log_gamma(x + c.xa() + 1.0) + log_gamma(x + c.xb() + 1.0)
           - log_gamma(x + 1.0) - log_gamma(x + nf + 2.0) - std::log(x + nf + 1.0);
}

// Closed form for log sum_x w(x) (shifted family only).
// Undefined iff n_ab + s <= 1, where the sum diverges.
inline Moment normalization_exact(const SearchCounts& c, const Scenario& sc) {
    const long long q = c.nab() + sc.shift();
    if (q <= 1) return Moment::undefined(std::max(0LL, 2 - sc.shift()));
    return Moment::of(log_gamma(c.xa() + 1.0) + log_gamma(c.xb() + 1.0)
                      + log_gamma(static_cast<double>(q) - 1.0)
                      - log_gamma(static_cast<double>(q + c.xb()))
                      - log_gamma(static_cast<double>(q + c.xa())));
}

struct TableOptions {
    double tail_tol = 1e-10;          // normalized neglected-mass target
    long long max_terms = 100000000;  // hard cap on summed terms
};

namespace detail {

// w(X+1)/w(X)
inline double weight_ratio(const SearchCounts& c, WeightFamily fam, long long shift, double X) {
    const double xa1 = c.xa() + 1.0, xb1 = c.xb() + 1.0;
    if (fam == WeightFamily::shifted) {
        const double nfs1 = c.nf() + shift + 1.0;
        return (X + xa1) * (X + xb1) / ((X + 1.0) * (X + nfs1));
    }
    const double nf1 = c.nf() + 1.0, nf2 = c.nf() + 2.0;
    return (X + xa1) * (X + xb1) * (X + nf1) / ((X + 1.0) * (X + nf2) * (X + nf2));
}

// Compensated accumulator; the sweeps add ~1e6 terms and need ~1e-12 accuracy.
struct Neumaier {
    double sum = 0.0, comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double total() const { return sum + comp; }
};

}  // namespace detail

class PosteriorTable {
public:
    PosteriorTable(SearchCounts c, Scenario sc, WeightFamily f)
        : counts(c), scenario(sc), family(f) {}

    SearchCounts counts;
    Scenario scenario;  // drives the shifted family; ignored by the flat one
    WeightFamily family;

    std::vector<double> log_weights;  // x = 0 .. x_max
    long long x_max = -1;
    double log_norm = 0.0;         // log(head sum + tail midpoint)
    double tail_mass_bound = 0.0;  // rigorous bound on the neglected mass share

    // Internals shared with the moment evaluator; sums are times exp(log_scale).
    double log_scale = 0.0;
    double z_head = 0.0;
    detail::TailBracket mass_tail{};

    double pmf(long long x) const {
        if (x < 0 || x > x_max) return 0.0;
        return std::exp(log_weights[static_cast<size_t>(x)] - log_norm);
    }

    long long series_q() const {
        return family == WeightFamily::shifted ? counts.nab() + scenario.shift()
                                               : counts.nab() + 2;
    }

    double log_weight_at(long long x) const {
        return family == WeightFamily::shifted ? omest::log_weight(counts, scenario, x)
                                               : omest::log_weight_flat(counts, x);
    }

    double ratio_at(double X) const {
        return detail::weight_ratio(counts, family, scenario.shift(), X);
    }

    detail::TailFamily tail_family() const {
        detail::TailFamily tf;
        tf.x_lo = std::min(counts.xa(), counts.xb());
        tf.x_hi = std::max(counts.xa(), counts.xb());
        const double c = static_cast<double>(counts.xa() + counts.xb());
        if (family == WeightFamily::shifted) {
            tf.d_lo = c;
            tf.d_hi = c;
        } else {
            tf.d_lo = c;        // poles c+1 .. n_f+2, underestimates the weight
            tf.d_hi = c - 1.0;  // poles c   .. n_f+1, overestimates it
        }
        tf.q = series_q();
        return tf;
    }
};

namespace detail {

// Peak position of the weight sequence; the scale anchor for all sums.
inline long long weight_mode_index(const SearchCounts& c, WeightFamily fam, long long shift) {
    if (fam == WeightFamily::shifted) {
        // ratio(X) >= 1 iff X <= xa*xb/q - 1 exactly
        const long long q = c.nab() + shift;
        return (c.xa() * c.xb()) / q;
    }
    // Flat family: the crossing is the root of a cubic; bisect on the exact
    // integer predicate. The flat ratio is below the s=1 ratio everywhere, so
    // the s=1 mode bounds it from above.
    long long lo = 0, hi = (c.xa() * c.xb()) / (c.nab() + 1) + 1;
    auto rising = [&](long long X) {
        return weight_ratio(c, fam, shift, static_cast<double>(X)) >= 1.0;
    };
    if (!rising(0)) return 0;
    while (lo + 1 < hi) {
        const long long mid = lo + (hi - lo) / 2;
        (rising(mid) ? lo : hi) = mid;
    }
    return lo + 1;  // largest rising step lands the peak one past it
}

}  // namespace detail

namespace detail {

inline PosteriorTable build_table_impl(const SearchCounts& c, const Scenario& sc,
                                       WeightFamily fam, const TableOptions& opt) {
    PosteriorTable t(c, sc, fam);
    const long long q = t.series_q();
    if (q < 2) {
        const long long need = std::max(0LL, 2 - sc.shift());
        throw DivergentSeriesError(
            "posterior mass diverges: n_ab + s = " + std::to_string(q)
                + " < 2; need n_ab >= " + std::to_string(need)
                + " or a larger scenario shift",
            need);
    }
    if (!(opt.tail_tol > 0.0 && opt.tail_tol < 1.0))
        throw ValidationError("tail_tol must be in (0, 1)");
    if (opt.max_terms < 1) throw ValidationError("max_terms must be positive");

    const long long mode = weight_mode_index(c, fam, sc.shift());
    t.log_scale = t.log_weight_at(mode);
    const TailFamily tf = t.tail_family();

    constexpr long long kResync = 4096;
    constexpr long long kProbeEvery = 64;  // resyncs between budget probes

    Neumaier z;
    double lw = t.log_weight_at(0);
    double w = std::exp(lw - t.log_scale);
    long long x = 0;
    long long resyncs = 0;

    while (true) {
        t.log_weights.push_back(lw);
        z.add(w);

        const bool boundary = ((x + 1) % kResync) == 0;
        if (boundary) {
            // Kill additive/multiplicative drift with an exact recompute.
            ++resyncs;
            lw = t.log_weight_at(x);
            w = (lw - t.log_scale > -708.0) ? std::exp(lw - t.log_scale) : 0.0;

            const TailBracket b = tail_bracket(tf, 0, static_cast<double>(x), t.log_scale);
            const double zc = z.total();
            if (b.hi <= opt.tail_tol * (zc + b.lo)) {
                t.mass_tail = b;
                break;
            }
            if (resyncs % kProbeEvery == 1) {
                // Even the cap cannot reach the tolerance -> fail fast.
                const TailBracket cap =
                    tail_bracket(tf, 0, static_cast<double>(opt.max_terms), t.log_scale);
                if (cap.lo > opt.tail_tol * (zc + b.hi) && std::isfinite(b.hi))
                    throw BudgetExceededError(
                        "posterior tail cannot reach tail_tol="
                            + std::to_string(opt.tail_tol) + " within "
                            + std::to_string(opt.max_terms)
                            + " terms (n_ab + s = " + std::to_string(q)
                            + " converges too slowly; raise the shift or the overlap)",
                        opt.max_terms);
            }
        }
        if (x + 1 >= opt.max_terms) {
            const TailBracket b = tail_bracket(tf, 0, static_cast<double>(x), t.log_scale);
            if (b.hi <= opt.tail_tol * (z.total() + b.lo)) {
                t.mass_tail = b;
                break;
            }
            throw BudgetExceededError(
                "posterior table exceeded max_terms=" + std::to_string(opt.max_terms),
                opt.max_terms);
        }

        const double r = t.ratio_at(static_cast<double>(x));
        lw += std::log(r);
        w *= r;
        // Once w underflows to exact zero the multiplicative recurrence can
        // never leave it; re-seed as soon as the true scaled weight is
        // representable again, or the head mass before the next resync is lost.
        if (w == 0.0 && lw - t.log_scale > -708.0) w = std::exp(lw - t.log_scale);
        ++x;
    }

    t.x_max = x;
    t.z_head = z.total();
    const double mid = 0.5 * (t.mass_tail.lo + t.mass_tail.hi);
    t.log_norm = t.log_scale + std::log(t.z_head + mid);
    t.tail_mass_bound = t.mass_tail.hi / (t.z_head + t.mass_tail.lo);
    return t;
}

}  // namespace detail

inline PosteriorTable build_table(const SearchCounts& c, const Scenario& sc,
                                  const TableOptions& opt = {}) {
    return detail::build_table_impl(c, sc, WeightFamily::shifted, opt);
}

inline PosteriorTable build_table_flat(const SearchCounts& c, const TableOptions& opt = {}) {
    return detail::build_table_impl(c, Scenario::full_search(), WeightFamily::flat_full_search,
                                    opt);
}

struct TableMoment {
    double value = 0.0;
    // Certified absolute half-width around value. Infinite when divergent.
    double error_bound = std::numeric_limits<double>::infinity();
    // True when sum X^p w(X) has no finite limit (the closed form is
    // undefined for the same reason); value then covers the table only.
    bool divergent = false;
    long long extension_terms = 0;
};

struct MomentOptions {
    double rel_tol = 1e-8;
    long long max_extension = 50000000;
};

// <X^p> for every p = 0..p_max in one pass. The stored table is extended by
// streaming (nothing new is stored) until the tail bracket certifies every
// requested moment to rel_tol, so accuracy does not depend on how far the
// mass-based truncation happened to go.
inline std::array<TableMoment, 5> table_moments(const PosteriorTable& t, int p_max,
                                                const MomentOptions& mo = {}) {
    if (p_max < 0 || p_max > 4)
        throw ValidationError("moment order must be 0..4, got " + std::to_string(p_max));

    const detail::TailFamily tf = t.tail_family();
    const long long q = t.series_q();

    std::array<TableMoment, 5> out;
    std::array<detail::Neumaier, 5> acc;

    for (long long x = 0; x <= t.x_max; ++x) {
        const double w = std::exp(t.log_weights[static_cast<size_t>(x)] - t.log_scale);
        double xp = 1.0;
        for (int p = 0; p <= p_max; ++p) {
            acc[p].add(w * xp);
            xp *= static_cast<double>(x);
        }
    }

    std::array<bool, 5> want{};
    bool anything = false;
    for (int p = 0; p <= p_max; ++p) {
        if (q <= p + 1) {
            out[p].divergent = true;
            out[p].value = acc[p].total() / std::exp(t.log_norm - t.log_scale);
        } else {
            want[p] = true;
            anything = true;
        }
    }
    if (!anything) return out;

    constexpr long long kResync = 4096;
    long long x1 = t.x_max;
    double lw = 0.0, w = 0.0;
    long long streamed = 0;
    bool streaming = false;

    auto converged = [&](long long cut) {
        const detail::TailBracket bz = detail::tail_bracket(tf, 0, static_cast<double>(cut),
                                                            t.log_scale);
        const double z_lo = acc[0].total() + bz.lo;
        const double z_hi = acc[0].total() + bz.hi;
        bool all = true;
        for (int p = 0; p <= p_max; ++p) {
            if (!want[p]) continue;
            const detail::TailBracket bp =
                (p == 0) ? bz
                         : detail::tail_bracket(tf, p, static_cast<double>(cut), t.log_scale);
            const double lo = (acc[p].total() + bp.lo) / z_hi;
            const double hi = (acc[p].total() + bp.hi) / z_lo;
            const double mid = 0.5 * (lo + hi);
            const double half = 0.5 * (hi - lo) + 1e-12 * std::abs(mid);
            out[p].value = mid;
            out[p].error_bound = half;
            out[p].extension_terms = streamed;
            if (!(half <= mo.rel_tol * std::max(std::abs(mid), 1e-300))) all = false;
        }
        return all;
    };

    if (converged(x1)) return out;

    lw = t.log_weight_at(x1 + 1);
    w = (lw - t.log_scale > -708.0) ? std::exp(lw - t.log_scale) : 0.0;
    streaming = true;

    while (streaming) {
        ++x1;  // now accumulating index x1
        ++streamed;
        double xp = 1.0;
        for (int p = 0; p <= p_max; ++p) {
            if (p == 0 || want[p]) acc[p].add(w * xp);
            xp *= static_cast<double>(x1);
        }

        if ((streamed % kResync) == 0) {
            lw = t.log_weight_at(x1);
            w = (lw - t.log_scale > -708.0) ? std::exp(lw - t.log_scale) : 0.0;
            if (converged(x1)) break;
            if (streamed >= mo.max_extension) break;  // honest wide bound
        }

        const double r = t.ratio_at(static_cast<double>(x1));
        lw += std::log(r);
        w *= r;
    }
    return out;
}

inline TableMoment table_moment(const PosteriorTable& t, int p, const MomentOptions& mo = {}) {
    if (p < 0 || p > 4)
        throw ValidationError("moment order must be 0..4, got " + std::to_string(p));
    return table_moments(t, p, mo)[p];
}

// Integer mode of the stored PMF; ties resolve to the smaller x.
inline long long mode(const PosteriorTable& t) {
    long long best = 0;
    double best_lw = -std::numeric_limits<double>::infinity();
    for (long long x = 0; x <= t.x_max; ++x) {
        const double lw = t.log_weights[static_cast<size_t>(x)];
        if (lw > best_lw) {
            best_lw = lw;
            best = x;
        }
    }
    return best;
}

struct CredibleInterval {
    long long lower = 0;
    long long upper = 0;
    double mass_covered = 0.0;
};

// Shortest contiguous interval holding at least `mass` posterior probability.
// Among equal widths the one with the most mass wins, then the smaller lower
// endpoint, which makes the mass->0 limit collapse onto the mode.
inline CredibleInterval credible_interval(const PosteriorTable& t, double mass) {
    if (!(mass > 0.0 && mass < 1.0 - t.tail_mass_bound))
        throw ValidationError("interval mass must lie in (0, 1 - tail_mass_bound)");

    const long long n = t.x_max + 1;
    CredibleInterval best;
    long long best_width = n + 1;
    double best_mass = 0.0;

    long long hi = -1;
    double wsum = 0.0;
    for (long long lo = 0; lo < n; ++lo) {
        while (wsum < mass && hi + 1 < n) {
            ++hi;
            wsum += t.pmf(hi);
        }
        if (wsum < mass) break;  // no window starting here can reach the mass
        const long long width = hi - lo + 1;
        if (width < best_width
            || (width == best_width && wsum > best_mass + 1e-12 * mass)) {
            best_width = width;
            best_mass = wsum;
            best = {lo, hi, wsum};
        }
        wsum -= t.pmf(lo);
    }
    return best;
}

}  // namespace omest
