#pragma once

#include <cmath>
#include <limits>

#include "omest/moment.hpp"
#include "omest/search_counts.hpp"

namespace omest {

struct LincolnPetersen {
    Moment total = Moment::undefined(1);   // n_a n_b / n_ab
    Moment missed = Moment::undefined(1);  // x_a x_b / n_ab
};

inline LincolnPetersen lincoln_petersen(const SearchCounts& c) {
    if (c.nab() == 0) return {Moment::undefined(1), Moment::undefined(1)};
    const double nab = static_cast<double>(c.nab());
    return {Moment::of(static_cast<double>(c.na()) * c.nb() / nab),
            Moment::of(static_cast<double>(c.xa()) * c.xb() / nab)};
}

struct Chapman {
    double total;   // (n_a+1)(n_b+1)/(n_ab+1) - 1
    double missed;  // x_a x_b / (n_ab+1)
};

inline Chapman chapman(const SearchCounts& c) {
    const double nab1 = c.nab() + 1.0;
    const double missed = static_cast<double>(c.xa()) * c.xb() / nab1;
    return {static_cast<double>(c.nf()) + missed, missed};
}

// Seber's variance for the Chapman estimate.
inline double seber_variance(const SearchCounts& c) {
    const double nab1 = c.nab() + 1.0;
    return (c.na() + 1.0) * (c.nb() + 1.0) * c.xa() * c.xb()
           / (nab1 * nab1 * (c.nab() + 2.0));
}

struct PoissonDiagnostics {
    double mode_x_star;       // x_a x_b / n_f, the approximating Poisson mean
    double validity_ratio_a;  // x_a / n_ab; infinity when n_ab = 0
    double validity_ratio_b;  // x_b / n_ab
    double exponent_rate;     // growth rate of the neglected exponent at X*
    bool reliable;            // false where the approximation regime is violated
};

// The Poisson reduction of the fixed-sample posterior is trustworthy only
// while both leftover counts stay well below the overlap.
inline constexpr double kPoissonValidityLimit = 0.5;

inline PoissonDiagnostics poisson_diagnostics(const SearchCounts& c) {
    if (c.nf() == 0) throw ValidationError("poisson diagnostics need n_f > 0");
    PoissonDiagnostics d;
    const double xa = static_cast<double>(c.xa());
    const double xb = static_cast<double>(c.xb());
    const double nf = static_cast<double>(c.nf());
    d.mode_x_star = xa * xb / nf;

    const double inf = std::numeric_limits<double>::infinity();
    d.validity_ratio_a = c.nab() > 0 ? xa / c.nab() : (c.xa() > 0 ? inf : 0.0);
    d.validity_ratio_b = c.nab() > 0 ? xb / c.nab() : (c.xb() > 0 ? inf : 0.0);

    // Factors with a zero count contribute 1 to the neglected product.
    double rate = 0.0;
    if (d.mode_x_star > 0.0)
        rate = std::log((1.0 + d.mode_x_star / xa) * (1.0 + d.mode_x_star / xb)
                        / (1.0 + d.mode_x_star / nf));
    d.exponent_rate = rate;

    d.reliable = c.nab() > 0
                 && d.validity_ratio_a < kPoissonValidityLimit
                 && d.validity_ratio_b < kPoissonValidityLimit;
    return d;
}

struct ClassicalReport {
    LincolnPetersen lp;
    Chapman chapman;
    double seber_variance;
    double seber_sd;
    PoissonDiagnostics poisson;
};

inline ClassicalReport classical_report(const SearchCounts& c) {
    ClassicalReport r{lincoln_petersen(c), chapman(c), seber_variance(c), 0.0,
                      poisson_diagnostics(c)};
    r.seber_sd = std::sqrt(r.seber_variance);
    return r;
}

}  // namespace omest
