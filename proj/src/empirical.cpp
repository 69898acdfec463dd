#include "bdlab/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace bdlab {

RankVector ranks(std::span<const double> values, TiePolicy policy) {
    const std::size_t n = values.size();
    if (n == 0) {
        throw ValidationError("ranks: empty input");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    RankVector out;
    out.policy = policy;
    out.ranks.assign(n, 0.0);

    std::size_t i = 0;
    double dense_rank = 0.0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const std::size_t run = j - i + 1;
        if (run > 1 && policy == TiePolicy::strict_reject) {
            throw TieError("ranks: duplicate values under strict-reject");
        }
        dense_rank += 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            switch (policy) {
                case TiePolicy::midrank:
                    // average of the occupied positions i+1 .. j+1
                    out.ranks[order[k]] = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
                    break;
                case TiePolicy::dense:
                    out.ranks[order[k]] = dense_rank;
                    break;
                case TiePolicy::strict_reject:
                    out.ranks[order[k]] = static_cast<double>(i + 1);
                    break;
            }
        }
        i = j + 1;
    }
    return out;
}

CoordAffineMap CoordAffineMap::inverse() const {
    if (a1 * a2 == 0.0) {
        throw GroupError("CoordAffineMap: a1*a2 must be nonzero");
    }
    return CoordAffineMap{1.0 / a1, -b1 / a1, 1.0 / a2, -b2 / a2};
}

CoordAffineMap CoordAffineMap::compose(const CoordAffineMap& inner) const {
    return CoordAffineMap{a1 * inner.a1, a1 * inner.b1 + b1, a2 * inner.a2, a2 * inner.b2 + b2};
}

Sample2D apply_coord_affine(const Sample2D& s, const CoordAffineMap& g) {
    if (g.a1 * g.a2 == 0.0) {
        throw GroupError("apply_coord_affine: a1*a2 must be nonzero");
    }
    std::vector<Point> pts;
    pts.reserve(s.size());
    for (const Point& p : s.points()) {
        pts.push_back(Point{g.a1 * p.x + g.b1, g.a2 * p.y + g.b2});
    }
    return Sample2D(std::move(pts), s.weights());
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2) {
        throw GroupError("PiecewiseLinear: need at least two breakpoints");
    }
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        if (!(xs_[i] < xs_[i + 1])) {
            throw GroupError("PiecewiseLinear: breakpoints must be strictly increasing in x");
        }
    }
    increasing_ = ys_[1] > ys_[0];
    for (std::size_t i = 0; i + 1 < ys_.size(); ++i) {
        const bool up = ys_[i + 1] > ys_[i];
        if (ys_[i + 1] == ys_[i] || up != increasing_) {
            throw GroupError("PiecewiseLinear: slopes must all be strictly positive or all strictly negative");
        }
    }
}

PiecewiseLinear PiecewiseLinear::identity() {
    return PiecewiseLinear({0.0, 1.0}, {0.0, 1.0});
}

double PiecewiseLinear::operator()(double t) const {
    const std::size_t m = xs_.size();
    std::size_t seg;
    if (t <= xs_.front()) {
        seg = 0;
    } else if (t >= xs_.back()) {
        seg = m - 2;
    } else {
        seg = static_cast<std::size_t>(
                  std::upper_bound(xs_.begin(), xs_.end(), t) - xs_.begin()) - 1;
    }
    const double slope = (ys_[seg + 1] - ys_[seg]) / (xs_[seg + 1] - xs_[seg]);
    return ys_[seg] + slope * (t - xs_[seg]);
}

PiecewiseLinear PiecewiseLinear::inverse() const {
    std::vector<double> xs = ys_;
    std::vector<double> ys = xs_;
    if (!increasing_) {
        std::reverse(xs.begin(), xs.end());
        std::reverse(ys.begin(), ys.end());
    }
    return PiecewiseLinear(std::move(xs), std::move(ys));
}

MonotoneImage apply_monotone(const Sample2D& s, const MonotoneMap& g) {
    std::vector<Point> pts;
    pts.reserve(s.size());
    for (const Point& p : s.points()) {
        pts.push_back(Point{g.zeta(p.x), g.eta(p.y)});
    }
    return MonotoneImage{Sample2D(std::move(pts), s.weights()), g.sign()};
}

namespace {

std::vector<std::size_t> checked_indices(std::span<const std::size_t> indices, std::size_t n) {
    std::set<std::size_t> seen;
    for (std::size_t idx : indices) {
        if (idx >= n) {
            throw IndexError("replace_points: index out of range");
        }
        if (!seen.insert(idx).second) {
            throw IndexError("replace_points: indices must be distinct");
        }
    }
    return {indices.begin(), indices.end()};
}

} // namespace

Replaced1D replace_points(const Sample1D& s, std::span<const std::size_t> indices,
                          std::span<const double> new_values) {
    if (indices.size() != new_values.size()) {
        throw ValidationError("replace_points: indices and new_values differ in length");
    }
    checked_indices(indices, s.size());
    std::vector<double> vals = s.values();
    for (std::size_t k = 0; k < indices.size(); ++k) {
        vals[indices[k]] = new_values[k];
    }
    const double frac = static_cast<double>(indices.size()) / static_cast<double>(s.size());
    return Replaced1D{Sample1D(std::move(vals), s.weights()), frac};
}

Replaced2D replace_points(const Sample2D& s, std::span<const std::size_t> indices,
                          std::span<const Point> new_points) {
    if (indices.size() != new_points.size()) {
        throw ValidationError("replace_points: indices and new_points differ in length");
    }
    checked_indices(indices, s.size());
    std::vector<Point> pts = s.points();
    for (std::size_t k = 0; k < indices.size(); ++k) {
        pts[indices[k]] = new_points[k];
    }
    const double frac = static_cast<double>(indices.size()) / static_cast<double>(s.size());
    return Replaced2D{Sample2D(std::move(pts), s.weights()), frac};
}

Sample1D round_to_grid(const Sample1D& s, double delta) {
    if (!(delta > 0.0)) {
        throw ValidationError("round_to_grid: delta must be positive");
    }
    std::vector<double> vals;
    vals.reserve(s.size());
    for (double v : s.values()) {
        // remainder() rounds the quotient to nearest, ties to even, which is
        // exactly the tie rule wanted here.
        double r = v - std::remainder(v, delta);
        if (r == 0.0) r = 0.0; // normalize -0.0
        vals.push_back(r);
    }
    return Sample1D(std::move(vals), s.weights());
}

} // namespace bdlab
