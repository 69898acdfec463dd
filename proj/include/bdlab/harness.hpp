#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdlab/correlation.hpp"
#include "bdlab/empirical.hpp"
#include "bdlab/sample.hpp"

namespace bdlab {

// X_1 = sigma*Z(0); X_{t+1} = rho*X_t + sigma*Z(t), standard Gaussian Z
// from the seeded generator. Returned as a time series.
Sample1D generate_ar1(std::size_t n, double rho, double sigma, std::uint64_t seed);

// Eigenvector of the sample covariance for the larger eigenvalue, via the
// closed-form 2x2 eigendecomposition; sign-normalized to nonnegative first
// nonzero coordinate. Equal eigenvalues (gap within 1e-12) raise
// EqualEigenvalueError instead of returning an arbitrary direction.
Point pca_first_component(const Sample2D& s);

// Moves one point onto the target nondecreasing curve (at new_x if given,
// else at its current x) and reports the updated sample with its Spearman
// value. ValidationError if the point already conforms.
struct Fig1Step {
    Sample2D sample;
    CorrelationValue spearman_value;
};
Fig1Step fig1_path_step(const Sample2D& s, const PiecewiseLinear& target, std::size_t moved,
                        std::optional<double> new_x = std::nullopt);

// ---- experiment registry ----------------------------------------------

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentSpec {
    std::string name;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
};

struct ExperimentReport {
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::pair<std::string, CsvTable>> series;
};

const std::vector<std::string>& experiment_names();

// Deterministic per (name, params, seed); replications use independent
// substreams so aggregation order never matters.
ExperimentReport run_experiment(const ExperimentSpec& spec);

// Writes <dir>/<name>_summary.json and <dir>/<name>_<series>.csv.
void write_report(const ExperimentReport& rep, const std::string& out_dir,
                  const std::string& name);

} // namespace bdlab
