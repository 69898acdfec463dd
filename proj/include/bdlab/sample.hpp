#pragma once

#include <cstddef>
#include <vector>

#include "bdlab/errors.hpp"

namespace bdlab {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) {
        return a.x == b.x && a.y == b.y;
    }
};

// Finite weighted point sets standing for empirical measures P_n.
// Weights are nonnegative and sum to 1 within 1e-12; the default is
// uniform 1/n. Values must be finite (no infinities, no NaN).

class Sample1D {
  public:
    explicit Sample1D(std::vector<double> values);
    Sample1D(std::vector<double> values, std::vector<double> weights);

    std::size_t size() const { return values_.size(); }
    double value(std::size_t i) const { return values_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& weights() const { return weights_; }
    bool uniform_weights() const;

  private:
    std::vector<double> values_;
    std::vector<double> weights_;
};

class Sample2D {
  public:
    explicit Sample2D(std::vector<Point> points);
    Sample2D(std::vector<Point> points, std::vector<double> weights);

    std::size_t size() const { return points_.size(); }
    const Point& point(std::size_t i) const { return points_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<Point>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    bool uniform_weights() const;

  private:
    std::vector<Point> points_;
    std::vector<double> weights_;
};

// Normalizes nonnegative raw weights to sum 1 (ValidationError if the sum
// is not positive). Convenience for constructions that specify mass ratios.
Sample1D make_weighted_sample(std::vector<double> values, std::vector<double> raw_weights);
Sample2D make_weighted_sample(std::vector<Point> points, std::vector<double> raw_weights);

} // namespace bdlab
