#pragma once

#include <cmath>

namespace omest {

// log Gamma(z) for z > 0 via the Lanczos approximation (g = 7, 9 terms).
// Relative accuracy is better than 1e-14 on z >= 1, which is the only range
// the estimators use (arguments are counts + small shifts). Pinned here, not
// delegated to std::lgamma, so results do not drift across libm versions.
inline double log_gamma(double z) {
    static const double g = 7.0;
    static const double coeff[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };

    if (z < 0.5) {
        // Reflection; only reachable through internal shifts, never counts.
        return std::log(3.14159265358979323846 / std::sin(3.14159265358979323846 * z))
               - log_gamma(1.0 - z);
    }

    z -= 1.0;
    double x = coeff[0];
    for (int i = 1; i < 9; ++i) x += coeff[i] / (z + i);
    double t = z + g + 0.5;
    return 0.5 * std::log(2.0 * 3.14159265358979323846)
           + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace omest
