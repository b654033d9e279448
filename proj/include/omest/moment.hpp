#pragma once

#include <stdexcept>

namespace omest {

// A posterior moment. Low overlap makes the defining series diverge, so a
// moment is either a finite value or "undefined", carrying the smallest n_ab
// that would make it finite under the same scenario. Undefined is a value,
// not an error: reports print it, CSV rows carry it, callers branch on it.
class Moment {
public:
    static Moment of(double v) { return Moment(v, 0, true); }
    static Moment undefined(long long min_nab) { return Moment(0.0, min_nab, false); }

    bool defined() const { return defined_; }

    double value() const {
        if (!defined_) throw std::logic_error("undefined moment has no value");
        return value_;
    }

    // Smallest overlap that would make this moment finite.
    long long min_nab() const { return min_nab_; }

private:
    Moment(double v, long long m, bool d) : value_(v), min_nab_(m), defined_(d) {}

    double value_;
    long long min_nab_;
    bool defined_;
};

struct MomentBracket {
    Moment lower;
    Moment upper;
};

// Full set of shape statistics for the missed count X.
struct MomentReport {
    Moment mean = Moment::undefined(0);
    Moment variance = Moment::undefined(0);
    Moment sd = Moment::undefined(0);
    Moment skewness = Moment::undefined(0);
    Moment kurtosis = Moment::undefined(0);

    // Half-widths of the flat-prior bracket; set only for the full-search
    // scenario (s = 2), whose values approximate the truly flat prior.
    bool has_error_bounds = false;
    double mean_error_bound = 0.0;
    double variance_error_bound = 0.0;
};

}  // namespace omest
