#pragma once

#include <string>

#include "omest/errors.hpp"

namespace omest {

// Outcome of two overlapping searches of the same finite set:
// n_a and n_b items found by each searcher, n_ab found by both.
class SearchCounts {
public:
    SearchCounts(long long na, long long nb, long long nab)
        : na_(na), nb_(nb), nab_(nab) {
        if (na < 0 || nb < 0 || nab < 0)
            throw ValidationError("counts must be non-negative: na=" + std::to_string(na)
                                  + " nb=" + std::to_string(nb) + " nab=" + std::to_string(nab));
        if (nab > na || nab > nb)
            throw ValidationError("overlap exceeds a search total: nab=" + std::to_string(nab)
                                  + " na=" + std::to_string(na) + " nb=" + std::to_string(nb));
    }

    long long na() const { return na_; }
    long long nb() const { return nb_; }
    long long nab() const { return nab_; }

    long long xa() const { return na_ - nab_; }  // found only by A
    long long xb() const { return nb_ - nab_; }  // found only by B
    long long nf() const { return na_ + nb_ - nab_; }  // distinct items found

private:
    long long na_, nb_, nab_;
};

}  // namespace omest
