#pragma once

#include <stdexcept>
#include <string>

namespace omest {

// Bad inputs: counts that violate 0 <= n_ab <= min(n_a, n_b), out-of-range
// parameters, malformed requests. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what)
        : std::invalid_argument(what) {}
};

// The requested series has no finite value (n_ab + s < 2).
class DivergentSeriesError : public std::runtime_error {
public:
    DivergentSeriesError(const std::string& what, long long min_nab)
        : std::runtime_error(what), min_nab(min_nab) {}

    long long min_nab;  // smallest n_ab that would make the series summable
};

// Convergent in principle but the truncation point would exceed the term cap.
class BudgetExceededError : public std::runtime_error {
public:
    BudgetExceededError(const std::string& what, long long cap)
        : std::runtime_error(what), max_terms(cap) {}

    long long max_terms;
};

}  // namespace omest
