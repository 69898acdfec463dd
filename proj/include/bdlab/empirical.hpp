#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bdlab/sample.hpp"

namespace bdlab {

enum class TiePolicy { midrank, dense, strict_reject };

struct RankVector {
    std::vector<double> ranks; // midranks may be fractional
    TiePolicy policy = TiePolicy::midrank;
};

// Rank of the smallest value is 1. Under midrank the rank sum is n(n+1)/2
// exactly; dense gives tied values consecutive integer ranks; strict_reject
// throws TieError on any duplicate.
RankVector ranks(std::span<const double> values, TiePolicy policy = TiePolicy::midrank);

// Element of G_lc: g(x, y) = (a1*x + b1, a2*y + b2) with a1*a2 != 0.
struct CoordAffineMap {
    double a1 = 1.0, b1 = 0.0, a2 = 1.0, b2 = 0.0;

    int sign() const { return (a1 * a2 > 0) ? 1 : -1; }
    CoordAffineMap inverse() const;
    CoordAffineMap compose(const CoordAffineMap& inner) const; // this after inner
};

Sample2D apply_coord_affine(const Sample2D& s, const CoordAffineMap& g);

// Strictly monotone piecewise-linear function, linearly extended beyond its
// breakpoints. Represents any monotone rearrangement of a finite point set
// exactly and is exactly invertible.
class PiecewiseLinear {
  public:
    // Breakpoints (xs, ys); xs strictly increasing, ys strictly monotone.
    PiecewiseLinear(std::vector<double> xs, std::vector<double> ys);

    static PiecewiseLinear identity();

    double operator()(double t) const;
    bool increasing() const { return increasing_; }
    int sign() const { return increasing_ ? 1 : -1; }
    PiecewiseLinear inverse() const;

    const std::vector<double>& breakpoints_x() const { return xs_; }
    const std::vector<double>& breakpoints_y() const { return ys_; }

  private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    bool increasing_ = true;
};

// Element of G_rc: g(x, y) = (zeta(x), eta(y)), each strictly monotone.
struct MonotoneMap {
    PiecewiseLinear zeta;
    PiecewiseLinear eta;

    int sign() const { return zeta.sign() * eta.sign(); }
};

struct MonotoneImage {
    Sample2D sample;
    int sign; // sgn(zeta)*sgn(eta)
};

MonotoneImage apply_monotone(const Sample2D& s, const MonotoneMap& g);

// Replaces the entries at `indices` (distinct, in range) by `new_values`.
// The replacement fraction |indices|/n is reported alongside.
struct Replaced1D {
    Sample1D sample;
    double fraction;
};
struct Replaced2D {
    Sample2D sample;
    double fraction;
};

Replaced1D replace_points(const Sample1D& s, std::span<const std::size_t> indices,
                          std::span<const double> new_values);
Replaced2D replace_points(const Sample2D& s, std::span<const std::size_t> indices,
                          std::span<const Point> new_points);

// Maps each value to the nearest multiple of delta, ties toward the even
// multiple. Idempotent.
Sample1D round_to_grid(const Sample1D& s, double delta);

} // namespace bdlab
