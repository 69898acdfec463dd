#pragma once

#include <cstdint>
#include <optional>

#include "bdlab/empirical.hpp"
#include "bdlab/sample.hpp"

namespace bdlab {

enum class CorrKind { pearson, spearman, kendall, subset_average };

struct CorrelationValue {
    double value = 0.0;
    CorrKind kind = CorrKind::pearson;
};

// Weighted product-moment correlation. Exactly-collinear inputs return
// exactly +1 or -1 (detected via vanishing cross products, so the
// subset-average identity "== 1 iff positively sloped collinear" is exact).
// Throws DegenerateError on zero variance in either coordinate.
CorrelationValue pearson(const Sample2D& s);

// Pearson correlation of the per-coordinate rank vectors (midrank default).
// Uniform weights required.
CorrelationValue spearman(const Sample2D& s, TiePolicy tie_policy = TiePolicy::midrank);

enum class KendallVariant { tau_a, tau_b };

// Concordant/discordant pair statistic, O(n log n) by merge counting.
// tau_a divides by n(n-1)/2; tau_b applies the tie correction.
// Throws DegenerateError when no pair is strictly ordered in both
// coordinates (all pairs tied).
CorrelationValue kendall(const Sample2D& s, KendallVariant variant = KendallVariant::tau_a);

// Average of the Pearson correlation over subsets of size >= 3 (Eq.-style
// subset functional). Subsets with degenerate variance are excluded from
// numerator and denominator. Exact mode enumerates all subsets (n <= 20);
// Monte Carlo samples `samples` subsets uniformly among those of size >= 3
// (size drawn from the truncated binomial profile, then a uniform subset of
// that size).
struct MonteCarloSpec {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
};
CorrelationValue subset_average_corr(const Sample2D& s,
                                     std::optional<MonteCarloSpec> mc = std::nullopt);

// Number of subsets of size >= 3 of an n-point set: 2^n - 1 - n - n(n-1)/2.
// (The related published count omits the empty set's -1.)
double subset_count(int n);

} // namespace bdlab
