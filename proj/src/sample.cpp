#include "bdlab/sample.hpp"

#include <cmath>
#include <numeric>

namespace bdlab {

namespace {

std::vector<double> uniform(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

void check_weights(std::size_t n, const std::vector<double>& w) {
    if (w.size() != n) {
        throw ValidationError("weights size does not match sample size");
    }
    double sum = 0.0;
    for (double wi : w) {
        if (!std::isfinite(wi) || wi < 0.0) {
            throw ValidationError("weights must be finite and nonnegative");
        }
        sum += wi;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ValidationError("weights must sum to 1 within 1e-12");
    }
}

void check_finite(double v) {
    if (!std::isfinite(v)) {
        throw ValidationError("sample values must be finite");
    }
}

} // namespace

Sample1D::Sample1D(std::vector<double> values)
    : Sample1D(std::move(values), {}) {}

Sample1D::Sample1D(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    if (values_.empty()) {
        throw ValidationError("sample must contain at least one point");
    }
    for (double v : values_) {
        check_finite(v);
    }
    if (weights_.empty()) {
        weights_ = uniform(values_.size());
    } else {
        check_weights(values_.size(), weights_);
    }
}

bool Sample1D::uniform_weights() const {
    for (double w : weights_) {
        if (w != weights_[0]) return false;
    }
    return true;
}

Sample2D::Sample2D(std::vector<Point> points)
    : Sample2D(std::move(points), {}) {}

Sample2D::Sample2D(std::vector<Point> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty()) {
        throw ValidationError("sample must contain at least one point");
    }
    for (const Point& p : points_) {
        check_finite(p.x);
        check_finite(p.y);
    }
    if (weights_.empty()) {
        weights_ = uniform(points_.size());
    } else {
        check_weights(points_.size(), weights_);
    }
}

bool Sample2D::uniform_weights() const {
    for (double w : weights_) {
        if (w != weights_[0]) return false;
    }
    return true;
}

Sample1D make_weighted_sample(std::vector<double> values, std::vector<double> raw_weights) {
    double sum = std::accumulate(raw_weights.begin(), raw_weights.end(), 0.0);
    if (!(sum > 0.0)) {
        throw ValidationError("raw weights must have positive sum");
    }
    for (double& w : raw_weights) w /= sum;
    return Sample1D(std::move(values), std::move(raw_weights));
}

Sample2D make_weighted_sample(std::vector<Point> points, std::vector<double> raw_weights) {
    double sum = std::accumulate(raw_weights.begin(), raw_weights.end(), 0.0);
    if (!(sum > 0.0)) {
        throw ValidationError("raw weights must have positive sum");
    }
    for (double& w : raw_weights) w /= sum;
    return Sample2D(std::move(points), std::move(raw_weights));
}

} // namespace bdlab
