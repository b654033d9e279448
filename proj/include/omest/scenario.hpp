#pragma once

#include <string>

#include "omest/errors.hpp"

namespace omest {

enum class ScenarioKind {
    fixed_sample,                        // s = 0: both searches draw fixed-size samples
    partial_plus_comprehensive,          // s = 1: one search is exhaustive in its scope
    full_search_almost_constant_prior,   // s = 2: both searches aim at everything
    full_search_normalisable_prior,      // s = 4: full search under a proper prior
    custom,                              // any other shift
};

// How the searches were conducted. All scenarios reduce to one integer shift s
// applied to the overlap: every estimate is the fixed-sample formula evaluated
// with n_ab + s in place of n_ab (x_a and x_b unchanged).
class Scenario {
public:
    static Scenario fixed_sample() { return Scenario(0); }
    static Scenario partial_plus_comprehensive() { return Scenario(1); }
    static Scenario full_search() { return Scenario(2); }
    static Scenario proper_prior() { return Scenario(4); }

    static Scenario with_shift(long long s) {
        if (s < 0) throw ValidationError("scenario shift must be >= 0, got " + std::to_string(s));
        return Scenario(s);
    }

    // Accepts the CLI selectors: fixed | partial | full | proper-prior | shift:<s>
    static Scenario parse(const std::string& token) {
        if (token == "fixed") return fixed_sample();
        if (token == "partial") return partial_plus_comprehensive();
        if (token == "full") return full_search();
        if (token == "proper-prior") return proper_prior();
        if (token.rfind("shift:", 0) == 0) {
            const std::string digits = token.substr(6);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                throw ValidationError("bad scenario shift: '" + token + "'");
            return with_shift(std::stoll(digits));
        }
        throw ValidationError("unknown scenario '" + token
                              + "' (expected fixed|partial|full|proper-prior|shift:<s>)");
    }

    long long shift() const { return shift_; }

    // Kind is derived from the shift, so the two can never disagree.
    ScenarioKind kind() const {
        switch (shift_) {
            case 0: return ScenarioKind::fixed_sample;
            case 1: return ScenarioKind::partial_plus_comprehensive;
            case 2: return ScenarioKind::full_search_almost_constant_prior;
            case 4: return ScenarioKind::full_search_normalisable_prior;
            default: return ScenarioKind::custom;
        }
    }

    std::string name() const {
        switch (kind()) {
            case ScenarioKind::fixed_sample: return "fixed-sample";
            case ScenarioKind::partial_plus_comprehensive: return "partial-plus-comprehensive";
            case ScenarioKind::full_search_almost_constant_prior: return "full-search";
            case ScenarioKind::full_search_normalisable_prior: return "proper-prior";
            default: return "shift-" + std::to_string(shift_);
        }
    }

    bool operator==(const Scenario& other) const { return shift_ == other.shift_; }

private:
    explicit Scenario(long long s) : shift_(s) {}
    long long shift_;
};

}  // namespace omest
