#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "bdlab/sample.hpp"

namespace bdlab {

// Witness achieving a reported discrepancy.
struct IntervalCert {
    std::vector<std::pair<double, double>> intervals; // closed [lo, hi]
};
struct StripCert {
    double a = 0.0, b = 0.0;  // unit normal
    double lo = 0.0, hi = 0.0; // band lo <= a*x + b*y <= hi
};
struct ChainCert {
    std::vector<Point> points;
    bool increasing = true;
};
using MetricCertificate = std::variant<std::monostate, IntervalCert, StripCert, ChainCert>;

struct MetricValue {
    double value = 0.0;
    MetricCertificate certificate;
};

// Strip C = {(x, y) : -delta <= a*x + b*y + c <= delta}, (a, b) != (0, 0).
struct StripSpec {
    double a = 0.0, b = 0.0, c = 0.0;
    double delta = 0.0;
};

// Mass of s inside the strip.
double strip_mass(const Sample2D& s, const StripSpec& c);

// Kolmogorov distance: sup over half-lines (-inf, x] of |P - Q|, evaluated
// exactly at the merged support. When both samples carry uniform weights of
// equal size the value is computed as count_difference * (1/n) so that the
// rounding identity d_ko(P_n, P_n*) = 1/n holds exactly.
MetricValue d_ko(const Sample1D& p, const Sample1D& q);

// Kuiper distance of order k: max over unions A of at most k disjoint
// intervals of |P(A) - Q(A)|. Each interval contributes with one common
// optimal sign, which keeps the value in [0, 1], makes it nondecreasing in k
// and dominated by d_tv_discrete. Dynamic programming over the merged
// support (max-sum of <= k disjoint runs of the signed weights, run on the
// weights and on their negation).
MetricValue d_kuiper(const Sample1D& p, const Sample1D& q, int k);

// Dimensionless Prohorov-variant: smallest eps such that
// P(I) <= Q(I^eps) + eps for all intervals I, where I^eps has the same
// center and length |I|*exp(eps); symmetrized by max of both directions.
// The sup over all intervals is attained on intervals with endpoints in the
// merged support (shrinking I to the smallest support-endpoint interval
// keeps P(I) and can only shrink Q(I^eps)), so the candidate family is
// exact. Binary search to 1e-12.
MetricValue d_pk(const Sample1D& p, const Sample1D& q);

// Discrete total variation: (1/2) * sum over merged support of |p(x) - q(x)|.
MetricValue d_tv_discrete(const Sample1D& p, const Sample1D& q);
MetricValue d_tv_discrete(const Sample2D& p, const Sample2D& q);

// Strip distance: sup over strips of |P(C) - Q(C)|. Candidate normals are
// the directions orthogonal to every pairwise difference of the merged
// support plus the axes; the projected ordering is constant between those
// critical angles, so evaluating at each critical angle and at each sector
// midpoint covers every attainable capture set. Per direction the 1D
// problem is a max-|subarray-sum| over tie-grouped projections.
MetricValue d_strip(const Sample2D& p, const Sample2D& q);

// Thin-tube chain value of the tube distance: max over strictly monotone
// (increasing or decreasing) point chains through the merged support of
// |sum of net weights| (P-points +p, Q-points -q, coincident points merged).
// A certified lower bound on the full tube supremum: finite-width tubes can
// capture almost-monotone sets this value does not see.
MetricValue d_tube_chain(const Sample2D& p, const Sample2D& q);

} // namespace bdlab
