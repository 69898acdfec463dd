#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bdlab/chains.hpp"
#include "bdlab/correlation.hpp"
#include "bdlab/sample.hpp"

namespace bdlab {

// ---- parameter-space metrics -------------------------------------------

enum class BaseMetric {
    absolute,       // |t1 - t2|
    log_ratio,      // |log(t1/t2)|; diverges at 0 and infinity
    tan_half_angle, // |tan(t1*pi/2) - tan(t2*pi/2)|; diverges at +-1
};

// Distance on the parameter space. With an empty pole set the base distance
// is used directly. With poles and a bounded base, the derived distance
// D_pole(t1, t2) = |1/D*(t1, pole) - 1/D*(t2, pole)| is used (sup over the
// pole set); it diverges exactly when an argument approaches a pole. The
// log_ratio and tan_half_angle bases carry their poles ({0, inf} resp.
// {-1, +1}) natively and are evaluated directly.
struct ParamMetric {
    BaseMetric base = BaseMetric::absolute;
    std::vector<double> poles;
};

double derived_metric_eval(const ParamMetric& pm, double t1, double t2);

// ---- breakdown results ---------------------------------------------------

struct TargetSet {
    std::vector<double> values;
    double tolerance = 1e-9;
};

enum class Certification { closed_form_exact, search_upper_bound, exhaustive_exact };
enum class BreakdownDefinition { star, doublestar };

struct BreakdownResult {
    double epsilon = 1.0;
    Certification certification = Certification::search_upper_bound;
    BreakdownDefinition definition = BreakdownDefinition::star;
    // One witness per reached pole (target value, contaminated sample).
    std::vector<std::pair<double, Sample2D>> witnesses2d;
    std::vector<std::pair<double, Sample1D>> witnesses1d;
};

// ---- rank-correlation breakdown ------------------------------------------

enum class RankKind { spearman, kendall };

// Closed forms: doublestar = 1 - min(d+, d-), star = 1 - max(d+, d-).
// Witnesses keep a maximal chain (or a subset of one) and replace the other
// round(eps*n) points by an extension of that chain, hitting +-1 exactly.
BreakdownResult rank_breakdown_closed_form(const Sample2D& s, BreakdownDefinition definition,
                                           RankKind kind);

// Per-pole value: 1 - delta_plus for pole +1, 1 - delta_minus for pole -1.
double rank_breakdown_pole(const Sample2D& s, double pole);

// ---- exceptional sets -----------------------------------------------------

enum class ExceptionalFamily { lines_signed, chains_signed, singletons };

// Delta(P): maximal mass on a set of the family.
double exceptional_delta(const Sample2D& s, ExceptionalFamily family);
double max_atom(const Sample1D& s);

// General no-group bound 1 - Delta(P); DegenerateError if Delta is 0 or 1.
double eps_upper_bound(const Sample2D& s, ExceptionalFamily family);
double eps_upper_bound(const Sample1D& s); // singleton family

// ---- extremal zero-correlation configurations -----------------------------

// Rank configuration maximizing delta_plus subject to T = 0: an increasing
// chain (i, n-k+i) for i <= k followed by the decreasing tail (i, n-i+1),
// with k = round(n * 2^(-1/3)) for Spearman and round(n * 2^(-1/2)) for
// Kendall.
struct ExtremalConfig {
    Sample2D sample;
    long k = 0;
    double delta_plus = 0.0;
    double correlation = 0.0;
};

ExtremalConfig extremal_zero_config(long n, RankKind kind);

// Minimal replacement fraction driving |T| below tolerance. Exhaustive
// (ascending replacement count over all reachable rank patterns) for
// n <= 12; greedy morph toward the extremal pattern above that, labeled
// search_upper_bound.
BreakdownResult breakdown_to_zero_search(const Sample2D& s, RankKind kind,
                                         double tolerance = 1e-9);

// ---- counterexample functionals (Genton-Lucas critique) -------------------

enum class CounterexampleKind { clamped_mean, t_star, b1, b1_star, t_const_75 };

double counterexample_eval(CounterexampleKind kind, const Sample1D& s);

struct GridSpec {
    double lo = -1.0;
    double hi = 1.0;
    std::size_t count = 41;
    std::vector<double> values() const;
};

// Diameter (max - min) of the functional's value set as the n-1 clean
// observations range over the grid, one slot fixed at `contaminant`.
double gl_value_set_diameter(CounterexampleKind kind, long n, double contaminant,
                             const GridSpec& grid);

// ---- scale breakdown demo --------------------------------------------------

enum class ScaleFunctional { sd, mad };

struct ScaleBreakdownReport {
    BreakdownResult result;
    bool exploded = false;       // pole at infinity reached
    bool imploded = false;       // pole at zero reached
    bool pole_metric_identity = false; // pole attainment <=> log-ratio divergence
};

double scale_eval(ScaleFunctional f, const Sample1D& s);
ScaleBreakdownReport scale_breakdown_demo(const Sample1D& s, ScaleFunctional f);

// ---- eps identities ---------------------------------------------------------

// Verifies star(Theta0) = min over poles and doublestar(Theta0) = max over
// poles on computed per-pole values.
struct EpsIdentityReport {
    double expected_star = 0.0;
    double expected_doublestar = 0.0;
    bool star_ok = false;
    bool doublestar_ok = false;
};

EpsIdentityReport eps_identities_check(std::span<const std::pair<double, double>> pole_eps,
                                       double star_combined, double doublestar_combined,
                                       double tol = 1e-12);

} // namespace bdlab
