#pragma once

#include <cstdint>
#include <vector>

#include "bdlab/breakdown.hpp"
#include "bdlab/sample.hpp"

namespace bdlab {

// Fixed template to locate in a 1D sample via affine registration.
struct Template {
    std::vector<double> z;

    explicit Template(std::vector<double> entries);
    std::size_t size() const { return z.size(); }
};

Template default_template(); // (1.5, 1.8, 1.3)

struct TemplateFit {
    double mu = 0.0;
    double sigma = 1.0;
    double objective = 0.0;
    std::vector<std::size_t> assignment; // data index attaining each inner minimum
    bool exact = true;                   // false for the beam search (m > 4)
};

// Objective sum_i min_j ((x_j - mu)/sigma - z_i)^2 evaluated directly.
double template_objective(const Sample1D& s, const Template& t, double mu, double sigma);

// Global minimizer of the objective over mu and sigma > 0. For each of the
// n^m assignments of template entries to data indices the inner problem is
// ordinary least squares in (a, b) = (1/sigma, -mu/sigma); the global
// minimum of the min-over-j objective equals the minimum over assignments
// of these least-squares values. Assignments with nonpositive slope are
// rejected (sigma > 0) and degenerate zero-variance selections are skipped.
// Exact for m <= 4; m > 4 falls back to a beam search over assignments and
// flags the result non-exact. Ties break toward the lexicographically
// smallest assignment.
TemplateFit fit_template(const Sample1D& s, const Template& t, std::size_t beam_width = 128);

// Contamination class H for the modified breakdown point: `arbitrary`
// allows planting template replicas; `no_replica(gap)` forbids contaminants
// containing an affine template image with per-point standardized residual
// below gap. Contamination replaces non-signal points only (the class
// protects a present signal from being imitated, not deleted).
struct ContaminationClass {
    bool allow_replica = true;
    double gap = 1e-9;

    static ContaminationClass arbitrary() { return {true, 0.0}; }
    static ContaminationClass no_replica(double gap) { return {false, gap}; }
};

// True when some size-m subset of `values` matches an affine template image
// with every standardized residual below gap.
bool contains_template_image(const std::vector<double>& values, const Template& t, double gap);

struct PatternBreakdown {
    double fraction = 1.0; // minimal replacement fraction found, 1.0 if none broke the fit
    Certification certification = Certification::search_upper_bound;
    bool broke = false;
    double mu_shift = 0.0;    // |mu - mu0| / sigma0 of the worst accepted attack
    double sigma_ratio = 1.0; // sigma / sigma0 of the worst accepted attack
    std::vector<double> witness_values;
};

// Minimal replacement fraction (search upper bound) within the class that
// moves the fit by more than the discrepancy thresholds (relative sigma
// change > 0.05 or mu shift > 0.25*sigma0), or an exact-objective tie at
// discrepant parameters. Requires an exact embedding in s (objective of the
// global fit <= 1e-9), else ValidationError.
PatternBreakdown modified_breakdown(const Sample1D& s, const Template& t,
                                    const ContaminationClass& cls, std::uint64_t seed = 0);

} // namespace bdlab
