#pragma once

#include <iosfwd>
#include <string>

#include "bdlab/sample.hpp"

namespace bdlab {

// CSV layout: header row, one row per point.
//   1D: "x" or "x,w"
//   2D: "x,y" or "x,y,w"
// Weights, if present, are nonnegative and are normalized to sum 1.

bool csv_is_2d(const std::string& path);
Sample1D read_sample1d(const std::string& path);
Sample2D read_sample2d(const std::string& path);
Sample1D read_sample1d(std::istream& in);
Sample2D read_sample2d(std::istream& in);

void write_csv(const Sample1D& s, const std::string& path);
void write_csv(const Sample2D& s, const std::string& path);

// Decimal float with 17 significant digits (round-trips a double).
std::string format_double(double v);

} // namespace bdlab
