#pragma once

#include <cstddef>
#include <vector>

#include "bdlab/sample.hpp"

namespace bdlab {

// delta_plus / delta_minus: maximal probability mass on a strictly
// increasing / decreasing structure. Witnesses are index lists into the
// sample whose weights sum to the reported value exactly.
struct DeltaResult {
    double delta_plus = 0.0;
    double delta_minus = 0.0;
    std::vector<std::size_t> witness_plus;
    std::vector<std::size_t> witness_minus;
};

// Mass on strictly monotone curves y = h(x). Coincident duplicated points
// count jointly (the curve passes through the point once with all its
// weight); distinct points sharing an x or y cannot share a strictly
// monotone curve. weak_monotone relaxes to nondecreasing / nonincreasing h
// (x still strict, since h is a function). O(n log n) for uniform weights
// with distinct coordinates, O(n^2) otherwise.
DeltaResult delta_chain(const Sample2D& s, bool weak_monotone = false);

// Mass on single lines a*x + b*y + c = 0; delta_plus over lines with
// ab <= 0 (nonnegative slope), delta_minus with ab >= 0. Vertical and
// horizontal lines belong to both classes. Lines through point pairs plus
// single-point degenerate lines are enumerated.
DeltaResult delta_line(const Sample2D& s);

// Exact chain-probability value (1/k!)*C(n,k) and the bound n^k/(k!)^2,
// kept in log space to avoid overflow.
struct ChainBound {
    double log_exact = 0.0;
    double log_bound = 0.0;
    double exact() const;
    double bound() const;
};

ChainBound chain_probability_bound(long n, long k);

} // namespace bdlab
