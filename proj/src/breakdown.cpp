#include "bdlab/breakdown.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "bdlab/empirical.hpp"

namespace bdlab {

// ---- parameter-space metrics ------------------------------------------

namespace {

double base_eval(BaseMetric base, double t1, double t2) {
    switch (base) {
        case BaseMetric::absolute:
            return std::abs(t1 - t2);
        case BaseMetric::log_ratio:
            if (!(t1 > 0.0) || !(t2 > 0.0) || !std::isfinite(t1) || !std::isfinite(t2)) {
                throw PoleError("log-ratio metric: arguments must be in (0, inf)");
            }
            return std::abs(std::log(t1 / t2));
        case BaseMetric::tan_half_angle:
            if (std::abs(t1) >= 1.0 || std::abs(t2) >= 1.0) {
                throw PoleError("tan metric: arguments must be in (-1, 1)");
            }
            return std::abs(std::tan(t1 * std::numbers::pi / 2.0) -
                            std::tan(t2 * std::numbers::pi / 2.0));
    }
    throw ValidationError("unknown base metric");
}

} // namespace

double derived_metric_eval(const ParamMetric& pm, double t1, double t2) {
    if (pm.base != BaseMetric::absolute || pm.poles.empty()) {
        // log_ratio and tan_half_angle carry their poles natively.
        return base_eval(pm.base, t1, t2);
    }
    double best = 0.0;
    for (double pole : pm.poles) {
        const double d1 = std::abs(t1 - pole);
        const double d2 = std::abs(t2 - pole);
        if (d1 == 0.0 || d2 == 0.0) {
            throw PoleError("derived metric: argument equals a pole");
        }
        best = std::max(best, std::abs(1.0 / d1 - 1.0 / d2));
    }
    return best;
}

// ---- shared helpers -------------------------------------------------------

namespace {

double eval_rank(const Sample2D& s, RankKind kind) {
    return kind == RankKind::spearman ? spearman(s).value
                                      : kendall(s, KendallVariant::tau_a).value;
}

// Fills the entries of slotval marked new with values strictly interleaved
// between the kept neighbors (kept entries must already be strictly
// increasing across the array).
void fill_new_slots(std::vector<double>& slotval, const std::vector<char>& is_new) {
    const std::size_t n = slotval.size();
    std::size_t a = 0;
    while (a < n) {
        if (!is_new[a]) {
            ++a;
            continue;
        }
        std::size_t b = a;
        while (b + 1 < n && is_new[b + 1]) ++b;
        const double run = static_cast<double>(b - a + 1);
        double lo, hi;
        if (a > 0 && b + 1 < n) {
            lo = slotval[a - 1];
            hi = slotval[b + 1];
        } else if (a > 0) {
            lo = slotval[a - 1];
            hi = lo + run + 1.0;
        } else if (b + 1 < n) {
            hi = slotval[b + 1];
            lo = hi - run - 1.0;
        } else {
            lo = 0.0;
            hi = run + 1.0;
        }
        for (std::size_t j = a; j <= b; ++j) {
            slotval[j] = lo + (hi - lo) * static_cast<double>(j - a + 1) / (run + 1.0);
        }
        a = b + 1;
    }
}

// Real coordinates realizing the target ordering: kept indices keep their
// original coordinate, replaced ones get strictly interleaved values.
// target_order must rank every index with distinct keys, and the kept
// indices' relative order under it must match their original coordinate
// order.
std::vector<double> realize_axis(const std::vector<double>& original,
                                 const std::vector<char>& is_replaced,
                                 const std::vector<double>& target_order) {
    const std::size_t n = original.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return target_order[a] < target_order[b];
    });
    std::vector<double> slotval(n, 0.0);
    std::vector<char> is_new(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t idx = order[pos];
        is_new[pos] = is_replaced[idx];
        if (!is_new[pos]) slotval[pos] = original[idx];
    }
    fill_new_slots(slotval, is_new);
    std::vector<double> out(n);
    for (std::size_t pos = 0; pos < n; ++pos) out[order[pos]] = slotval[pos];
    return out;
}

// Keeps `keep_count` points of the given strictly monotone chain (original
// indices, chain order) and replaces every other point by an extension of
// the chain, making the whole sample strictly monotone toward `pole`.
Sample2D chain_extension_witness(const Sample2D& s, const std::vector<std::size_t>& chain,
                                 std::size_t keep_count, double pole) {
    const std::size_t n = s.size();
    std::set<std::size_t> kept(chain.begin(),
                               chain.begin() + static_cast<std::ptrdiff_t>(keep_count));

    double xmax = -std::numeric_limits<double>::infinity();
    double ymax = xmax, ymin = -xmax, xmin = -xmax;
    for (const Point& p : s.points()) {
        xmax = std::max(xmax, p.x);
        xmin = std::min(xmin, p.x);
        ymax = std::max(ymax, p.y);
        ymin = std::min(ymin, p.y);
    }
    const double gx = (xmax - xmin) / static_cast<double>(n) + 1.0;
    const double gy = (ymax - ymin) / static_cast<double>(n) + 1.0;

    std::vector<std::size_t> replaced;
    std::vector<Point> repl;
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (kept.count(i)) continue;
        replaced.push_back(i);
        const double step = static_cast<double>(++t);
        if (pole > 0.0) {
            repl.push_back(Point{xmax + step * gx, ymax + step * gy});
        } else {
            repl.push_back(Point{xmax + step * gx, ymin - step * gy});
        }
    }
    return replace_points(s, replaced, repl).sample;
}

} // namespace

// ---- rank-correlation breakdown ----------------------------------------

double rank_breakdown_pole(const Sample2D& s, double pole) {
    if (pole != 1.0 && pole != -1.0) {
        throw ValidationError("rank_breakdown_pole: pole must be +1 or -1");
    }
    const DeltaResult d = delta_chain(s);
    return pole > 0.0 ? 1.0 - d.delta_plus : 1.0 - d.delta_minus;
}

BreakdownResult rank_breakdown_closed_form(const Sample2D& s, BreakdownDefinition definition,
                                           RankKind kind) {
    const std::size_t n = s.size();
    if (n < 2) {
        throw ValidationError("rank_breakdown_closed_form: need n >= 2");
    }
    const DeltaResult d = delta_chain(s);

    BreakdownResult r;
    r.definition = definition;
    r.certification = Certification::closed_form_exact;
    const double dmin = std::min(d.delta_plus, d.delta_minus);
    const double dmax = std::max(d.delta_plus, d.delta_minus);
    r.epsilon = (definition == BreakdownDefinition::doublestar) ? 1.0 - dmin : 1.0 - dmax;

    const auto k = static_cast<std::size_t>(std::llround(r.epsilon * static_cast<double>(n)));
    const std::size_t keep = n - k;

    auto add_witness = [&](double pole) {
        const auto& chain = (pole > 0.0) ? d.witness_plus : d.witness_minus;
        if (keep > chain.size()) return; // cannot happen for the binding pole
        r.witnesses2d.emplace_back(pole, chain_extension_witness(s, chain, keep, pole));
    };

    if (definition == BreakdownDefinition::doublestar) {
        add_witness(+1.0);
        add_witness(-1.0);
    } else {
        add_witness(d.delta_plus >= d.delta_minus ? +1.0 : -1.0);
    }
    (void)kind; // the closed form is the same for both rank statistics
    return r;
}

// ---- exceptional sets ----------------------------------------------------

namespace {

double max_atom_2d(const Sample2D& s) {
    std::map<std::pair<double, double>, double> m;
    for (std::size_t i = 0; i < s.size(); ++i) {
        m[{s.point(i).x, s.point(i).y}] += s.weight(i);
    }
    double best = 0.0;
    for (const auto& [k, w] : m) best = std::max(best, w);
    return best;
}

} // namespace

double max_atom(const Sample1D& s) {
    std::map<double, double> m;
    for (std::size_t i = 0; i < s.size(); ++i) m[s.value(i)] += s.weight(i);
    double best = 0.0;
    for (const auto& [k, w] : m) best = std::max(best, w);
    return best;
}

double exceptional_delta(const Sample2D& s, ExceptionalFamily family) {
    switch (family) {
        case ExceptionalFamily::singletons:
            return max_atom_2d(s);
        case ExceptionalFamily::lines_signed: {
            const DeltaResult d = delta_line(s);
            return std::max(d.delta_plus, d.delta_minus);
        }
        case ExceptionalFamily::chains_signed: {
            const DeltaResult d = delta_chain(s);
            return std::max(d.delta_plus, d.delta_minus);
        }
    }
    throw ValidationError("unknown exceptional family");
}

namespace {

double checked_upper_bound(double delta) {
    if (delta <= 0.0 || delta >= 1.0 - 1e-12) {
        throw DegenerateError("eps_upper_bound: Delta must lie strictly between 0 and 1");
    }
    return 1.0 - delta;
}

} // namespace

double eps_upper_bound(const Sample2D& s, ExceptionalFamily family) {
    return checked_upper_bound(exceptional_delta(s, family));
}

double eps_upper_bound(const Sample1D& s) {
    return checked_upper_bound(max_atom(s));
}

// ---- extremal zero-correlation configurations ------------------------------

ExtremalConfig extremal_zero_config(long n, RankKind kind) {
    if (n < 4) {
        throw ValidationError("extremal_zero_config: need n >= 4");
    }
    const double c = (kind == RankKind::spearman) ? std::pow(2.0, -1.0 / 3.0)
                                                  : std::pow(2.0, -0.5);
    const long k = std::lround(static_cast<double>(n) * c);

    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (long i = 1; i <= k; ++i) {
        pts.push_back(Point{static_cast<double>(i), static_cast<double>(n - k + i)});
    }
    for (long i = k + 1; i <= n; ++i) {
        pts.push_back(Point{static_cast<double>(i), static_cast<double>(n - i + 1)});
    }

    ExtremalConfig cfg{Sample2D(std::move(pts)), k, 0.0, 0.0};
    cfg.delta_plus = delta_chain(cfg.sample).delta_plus;
    cfg.correlation = eval_rank(cfg.sample, kind);
    return cfg;
}

// ---- breakdown to zero -------------------------------------------------------

namespace {

bool distinct_coordinates(const Sample2D& s) {
    std::set<double> xs, ys;
    for (const Point& p : s.points()) {
        if (!xs.insert(p.x).second || !ys.insert(p.y).second) return false;
    }
    return true;
}

// Rank statistic evaluated directly on distinct rank vectors.
double pattern_stat(const std::vector<double>& xr, const std::vector<double>& yr,
                    RankKind kind) {
    const std::size_t n = xr.size();
    if (kind == RankKind::kendall) {
        long c = 0, dd = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double pr = (xr[j] - xr[i]) * (yr[j] - yr[i]);
                if (pr > 0.0) ++c;
                else if (pr < 0.0) ++dd;
            }
        }
        return static_cast<double>(c - dd) / (0.5 * static_cast<double>(n) * (n - 1));
    }
    double sd2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = xr[i] - yr[i];
        sd2 += d * d;
    }
    const double nn = static_cast<double>(n);
    return 1.0 - 6.0 * sd2 / (nn * (nn * nn - 1.0));
}

// Advances a k-combination out of {0..n-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    std::size_t i = k;
    while (i-- > 0) {
        if (c[i] + (k - i) <= n - 1) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

Sample2D witness_from_ranks(const Sample2D& s, const std::vector<char>& is_replaced,
                            const std::vector<double>& xr, const std::vector<double>& yr) {
    const std::size_t n = s.size();
    std::vector<double> ox(n), oy(n);
    for (std::size_t i = 0; i < n; ++i) {
        ox[i] = s.point(i).x;
        oy[i] = s.point(i).y;
    }
    const std::vector<double> fx = realize_axis(ox, is_replaced, xr);
    const std::vector<double> fy = realize_axis(oy, is_replaced, yr);
    std::vector<std::size_t> idx;
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_replaced[i]) {
            idx.push_back(i);
            pts.push_back(Point{fx[i], fy[i]});
        }
    }
    return replace_points(s, idx, pts).sample;
}

} // namespace

BreakdownResult breakdown_to_zero_search(const Sample2D& s, RankKind kind, double tolerance) {
    const std::size_t n = s.size();
    BreakdownResult r;
    r.definition = BreakdownDefinition::star;

    const double t0 = eval_rank(s, kind);
    if (std::abs(t0) <= tolerance) {
        r.epsilon = 0.0;
        r.certification = Certification::exhaustive_exact;
        r.witnesses2d.emplace_back(0.0, s);
        return r;
    }
    if (!distinct_coordinates(s)) {
        throw ValidationError("breakdown_to_zero_search: needs distinct coordinates");
    }

    std::vector<std::size_t> order_x(n), order_y(n);
    std::iota(order_x.begin(), order_x.end(), 0);
    order_y = order_x;
    std::sort(order_x.begin(), order_x.end(),
              [&](std::size_t a, std::size_t b) { return s.point(a).x < s.point(b).x; });
    std::sort(order_y.begin(), order_y.end(),
              [&](std::size_t a, std::size_t b) { return s.point(a).y < s.point(b).y; });

    if (n <= 12) {
        // Exhaustive by ascending replacement count. A rank pattern is
        // reachable with k replacements iff the kept points appear in it
        // with their original relative order in both coordinates, so it is
        // enough to enumerate the kept subset, the k final x-ranks and
        // y-ranks taken by the new points, and their pairing.
        for (std::size_t k = 1; k <= n; ++k) {
            const std::size_t keep = n - k;
            std::vector<std::size_t> comb(keep);
            std::iota(comb.begin(), comb.end(), 0);
            bool more = true;
            while (more) {
                std::vector<std::size_t> kept_idx; // in x order
                kept_idx.reserve(keep);
                for (std::size_t c : comb) kept_idx.push_back(order_x[c]);
                std::vector<char> is_replaced(n, 1);
                for (std::size_t i : kept_idx) is_replaced[i] = 0;
                std::vector<std::size_t> replaced;
                for (std::size_t i = 0; i < n; ++i) {
                    if (is_replaced[i]) replaced.push_back(i);
                }
                std::vector<std::size_t> kept_by_y = kept_idx;
                std::sort(kept_by_y.begin(), kept_by_y.end(), [&](std::size_t a, std::size_t b) {
                    return s.point(a).y < s.point(b).y;
                });

                std::vector<std::size_t> xs_slots(k), ys_slots(k), perm(k);
                std::iota(xs_slots.begin(), xs_slots.end(), 0);
                bool more_x = true;
                while (more_x) {
                    std::iota(ys_slots.begin(), ys_slots.end(), 0);
                    bool more_y = true;
                    while (more_y) {
                        std::iota(perm.begin(), perm.end(), 0);
                        do {
                            std::vector<double> xr(n), yr(n);
                            std::vector<char> slot_new_x(n, 0), slot_new_y(n, 0);
                            for (std::size_t t = 0; t < k; ++t) slot_new_x[xs_slots[t]] = 1;
                            for (std::size_t t = 0; t < k; ++t) slot_new_y[ys_slots[t]] = 1;
                            std::size_t ci = 0;
                            for (std::size_t slot = 0; slot < n; ++slot) {
                                if (slot_new_x[slot]) continue;
                                xr[kept_idx[ci++]] = static_cast<double>(slot + 1);
                            }
                            ci = 0;
                            for (std::size_t slot = 0; slot < n; ++slot) {
                                if (slot_new_y[slot]) continue;
                                yr[kept_by_y[ci++]] = static_cast<double>(slot + 1);
                            }
                            for (std::size_t t = 0; t < k; ++t) {
                                xr[replaced[t]] = static_cast<double>(xs_slots[t] + 1);
                                yr[replaced[t]] = static_cast<double>(ys_slots[perm[t]] + 1);
                            }
                            if (std::abs(pattern_stat(xr, yr, kind)) <= tolerance) {
                                r.epsilon = static_cast<double>(k) / static_cast<double>(n);
                                r.certification = Certification::exhaustive_exact;
                                r.witnesses2d.emplace_back(
                                    0.0, witness_from_ranks(s, is_replaced, xr, yr));
                                return r;
                            }
                        } while (std::next_permutation(perm.begin(), perm.end()));
                        more_y = next_combination(ys_slots, n);
                    }
                    more_x = next_combination(xs_slots, n);
                }
                more = keep > 0 && next_combination(comb, n);
            }
        }
        throw ValidationError("breakdown_to_zero_search: exhaustive search failed");
    }

    // Greedy upper bound above n = 12: morph the y-rank pattern toward the
    // extremal zero configuration, then hill-climb over pairwise swaps of
    // the replaced entries.
    const ExtremalConfig target = extremal_zero_config(static_cast<long>(n), kind);

    std::vector<double> xr(n), yr(n);
    {
        std::vector<double> yrank(n);
        for (std::size_t i = 0; i < n; ++i) yrank[order_y[i]] = static_cast<double>(i + 1);
        for (std::size_t i = 0; i < n; ++i) {
            xr[order_x[i]] = static_cast<double>(i + 1);
            yr[order_x[i]] = yrank[order_x[i]];
        }
    }
    // Target y-rank per x-rank position.
    std::vector<double> ty(n);
    for (std::size_t i = 0; i < n; ++i) {
        ty[order_x[i]] = target.sample.point(i).y;
    }

    std::vector<std::size_t> by_gap(n);
    std::iota(by_gap.begin(), by_gap.end(), 0);
    std::sort(by_gap.begin(), by_gap.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(yr[a] - ty[a]) > std::abs(yr[b] - ty[b]);
    });

    std::vector<char> is_replaced(n, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        is_replaced[by_gap[k - 1]] = 1;
        std::vector<double> cur = yr;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_replaced[i]) {
                // strictly ordered stand-in between integer ranks
                cur[i] = ty[i] + 1e-6 * (static_cast<double>(i) + 1.0) / static_cast<double>(n);
            }
        }
        double best = std::abs(pattern_stat(xr, cur, kind));
        bool improved = true;
        int rounds = 0;
        while (improved && best > tolerance && rounds++ < 64) {
            improved = false;
            for (std::size_t a = 0; a < n && best > tolerance; ++a) {
                if (!is_replaced[a]) continue;
                for (std::size_t b = 0; b < n; ++b) {
                    if (!is_replaced[b] || b == a) continue;
                    std::swap(cur[a], cur[b]);
                    const double v = std::abs(pattern_stat(xr, cur, kind));
                    if (v < best - 1e-15) {
                        best = v;
                        improved = true;
                    } else {
                        std::swap(cur[a], cur[b]);
                    }
                }
            }
        }
        if (best <= tolerance) {
            r.epsilon = static_cast<double>(k) / static_cast<double>(n);
            r.certification = Certification::search_upper_bound;
            r.witnesses2d.emplace_back(0.0, witness_from_ranks(s, is_replaced, xr, cur));
            return r;
        }
    }
    r.epsilon = 1.0;
    r.certification = Certification::search_upper_bound;
    return r;
}

// ---- counterexample functionals ---------------------------------------------

double counterexample_eval(CounterexampleKind kind, const Sample1D& s) {
    const double n = static_cast<double>(s.size());
    auto wmean = [&](auto&& f) {
        double acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) acc += s.weight(i) * f(s.value(i));
        return acc;
    };
    switch (kind) {
        case CounterexampleKind::t_const_75:
            return 75.0;
        case CounterexampleKind::clamped_mean: {
            const double m = wmean([](double x) { return x; });
            return std::max(-n, std::min(n, m));
        }
        case CounterexampleKind::t_star: {
            const double m = wmean([](double x) { return x; });
            const double clamped = std::max(-n, std::min(n, m));
            return clamped + wmean([](double x) { return std::sin(x); }) / n;
        }
        case CounterexampleKind::b1:
        case CounterexampleKind::b1_star: {
            if (s.size() < 2) {
                throw ValidationError("b1: need n >= 2");
            }
            const double m = wmean([](double x) { return x; });
            double m2 = 0.0, m3 = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double d = s.value(i) - m;
                m2 += s.weight(i) * d * d;
                m3 += s.weight(i) * d * d * d;
            }
            if (m2 <= 0.0) {
                throw DegenerateError("b1: zero variance");
            }
            const double b1 = (m3 * m3) / (m2 * m2 * m2);
            if (kind == CounterexampleKind::b1) return b1;
            return b1 + std::sin(n * b1);
        }
    }
    throw ValidationError("unknown counterexample kind");
}

std::vector<double> GridSpec::values() const {
    if (count == 0 || !(hi >= lo)) {
        throw ValidationError("GridSpec: need count >= 1 and hi >= lo");
    }
    std::vector<double> v;
    v.reserve(count);
    if (count == 1) {
        v.push_back(lo);
        return v;
    }
    for (std::size_t i = 0; i < count; ++i) {
        v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return v;
}

namespace {

double eval_config(CounterexampleKind kind, double contaminant, const std::vector<double>& clean) {
    std::vector<double> vals;
    vals.reserve(clean.size() + 1);
    vals.push_back(contaminant);
    vals.insert(vals.end(), clean.begin(), clean.end());
    return counterexample_eval(kind, Sample1D(std::move(vals)));
}

} // namespace

double gl_value_set_diameter(CounterexampleKind kind, long n, double contaminant,
                             const GridSpec& grid) {
    if (n < 1) {
        throw ValidationError("gl_value_set_diameter: need n >= 1");
    }
    const std::vector<double> g = grid.values();
    const std::size_t clean_n = static_cast<std::size_t>(n - 1);
    if (clean_n == 0) return 0.0;
    if (kind == CounterexampleKind::t_const_75) return 0.0;

    const bool monotone =
        kind == CounterexampleKind::clamped_mean ||
        (kind == CounterexampleKind::t_star &&
         grid.lo >= -std::numbers::pi / 2.0 && grid.hi <= std::numbers::pi / 2.0);
    if (monotone) {
        // Componentwise nondecreasing: extremes at the constant extreme grids.
        const std::vector<double> all_lo(clean_n, g.front());
        const std::vector<double> all_hi(clean_n, g.back());
        return eval_config(kind, contaminant, all_hi) - eval_config(kind, contaminant, all_lo);
    }

    // Exhaustive multiset enumeration (the functionals are symmetric in the
    // clean slots).
    double combos = 1.0;
    for (std::size_t i = 0; i < clean_n; ++i) {
        combos *= static_cast<double>(g.size() + i) / static_cast<double>(i + 1);
    }
    if (combos > 2e6) {
        throw ValidationError("gl_value_set_diameter: grid product too large to enumerate");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<std::size_t> idx(clean_n, 0);
    std::vector<double> clean(clean_n);
    while (true) {
        for (std::size_t i = 0; i < clean_n; ++i) clean[i] = g[idx[i]];
        try {
            const double v = eval_config(kind, contaminant, clean);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        } catch (const DegenerateError&) {
            // configurations where the functional is undefined contribute nothing
        }
        std::size_t p = clean_n;
        bool advanced = false;
        while (p-- > 0) {
            if (idx[p] + 1 < g.size()) {
                const std::size_t v = idx[p] + 1;
                for (std::size_t q = p; q < clean_n; ++q) idx[q] = v;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    if (!(hi >= lo)) return 0.0;
    return hi - lo;
}

// ---- scale functionals --------------------------------------------------------

namespace {

double weighted_median(std::vector<std::pair<double, double>> vw) {
    std::sort(vw.begin(), vw.end());
    double cum = 0.0;
    for (std::size_t i = 0; i < vw.size(); ++i) {
        cum += vw[i].second;
        if (cum >= 0.5 - 1e-15) {
            if (std::abs(cum - 0.5) <= 1e-15 && i + 1 < vw.size()) {
                return 0.5 * (vw[i].first + vw[i + 1].first);
            }
            return vw[i].first;
        }
    }
    return vw.back().first;
}

} // namespace

double scale_eval(ScaleFunctional f, const Sample1D& s) {
    if (f == ScaleFunctional::sd) {
        double m = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) m += s.weight(i) * s.value(i);
        double v = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double d = s.value(i) - m;
            v += s.weight(i) * d * d;
        }
        return std::sqrt(v);
    }
    std::vector<std::pair<double, double>> vw(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) vw[i] = {s.value(i), s.weight(i)};
    const double med = weighted_median(vw);
    for (std::size_t i = 0; i < s.size(); ++i) vw[i] = {std::abs(s.value(i) - med), s.weight(i)};
    return weighted_median(std::move(vw));
}

ScaleBreakdownReport scale_breakdown_demo(const Sample1D& s, ScaleFunctional f) {
    const std::size_t n = s.size();
    if (n < 2) {
        throw ValidationError("scale_breakdown_demo: need n >= 2");
    }
    const auto [mn_it, mx_it] = std::minmax_element(s.values().begin(), s.values().end());
    const double range = *mx_it - *mn_it;
    if (range <= 0.0) {
        throw DegenerateError("scale_breakdown_demo: constant sample");
    }
    const double t0 = scale_eval(f, s);
    if (t0 <= 0.0) {
        throw DegenerateError("scale_breakdown_demo: scale of the input is already zero");
    }
    const double explode_target = 1e12 * range;

    std::set<double> uniq(s.values().begin(), s.values().end());

    auto try_explode = [&](std::size_t k) -> std::optional<Sample1D> {
        std::vector<std::size_t> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<double> vals(k);
        for (std::size_t t = 0; t < k; ++t) {
            vals[t] = explode_target * static_cast<double>(t + 1);
        }
        Sample1D q = replace_points(s, idx, vals).sample;
        if (scale_eval(f, q) >= 1e8 * t0) return q;
        return std::nullopt;
    };

    auto try_implode = [&](std::size_t k) -> std::optional<Sample1D> {
        for (double atom : uniq) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n && idx.size() < k; ++i) {
                if (s.value(i) != atom) idx.push_back(i);
            }
            if (idx.size() < k) continue;
            const std::vector<double> vals(k, atom);
            Sample1D q = replace_points(s, idx, vals).sample;
            if (scale_eval(f, q) == 0.0) return q;
        }
        return std::nullopt;
    };

    ScaleBreakdownReport rep;
    rep.result.definition = BreakdownDefinition::star;
    rep.result.certification = Certification::search_upper_bound;

    for (std::size_t k = 1; k <= n; ++k) {
        auto qe = try_explode(k);
        auto qi = try_implode(k);
        if (!qe && !qi) continue;

        rep.result.epsilon = static_cast<double>(k) / static_cast<double>(n);
        rep.exploded = qe.has_value();
        rep.imploded = qi.has_value();
        const Sample1D& witness = qe ? *qe : *qi;
        const double pole = qe ? std::numeric_limits<double>::infinity() : 0.0;
        rep.result.witnesses1d.emplace_back(pole, witness);

        // Identity of the pole formulation and the log-ratio metric
        // formulation, evaluated on the same severity ramp toward the
        // witness: the pole side uses absolute conventions (value beyond
        // the finite stand-in for infinity, exact zero for collapse), the
        // metric side log-ratio divergence. Both must flag breakdown.
        double min_tv = t0, max_tv = t0, max_logratio = 0.0;
        const int steps = 24;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (witness.value(i) != s.value(i)) idx.push_back(i);
        }
        for (int st = 1; st <= steps; ++st) {
            const double f01 = static_cast<double>(st) / steps;
            std::vector<double> vals;
            vals.reserve(idx.size());
            for (std::size_t i : idx) {
                const double a = s.value(i);
                const double b = witness.value(i);
                vals.push_back(st == steps ? b : a + (b - a) * std::pow(f01, 4.0));
            }
            Sample1D qt = replace_points(s, idx, vals).sample;
            const double tv = scale_eval(f, qt);
            min_tv = std::min(min_tv, tv);
            max_tv = std::max(max_tv, tv);
            if (tv > 0.0) {
                max_logratio = std::max(max_logratio, std::abs(std::log(tv / t0)));
            } else {
                max_logratio = std::numeric_limits<double>::infinity();
            }
        }
        const bool pole_attained =
            rep.exploded ? (max_tv >= 1e-2 * explode_target) : (min_tv == 0.0);
        const bool metric_diverged = max_logratio >= std::log(1e8);
        rep.pole_metric_identity = (pole_attained == metric_diverged) && pole_attained;
        return rep;
    }
    throw DegenerateError("scale_breakdown_demo: no breakdown found");
}

// ---- eps identities -------------------------------------------------------------

EpsIdentityReport eps_identities_check(std::span<const std::pair<double, double>> pole_eps,
                                       double star_combined, double doublestar_combined,
                                       double tol) {
    if (pole_eps.empty()) {
        throw ValidationError("eps_identities_check: no per-pole results");
    }
    EpsIdentityReport rep;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (const auto& [pole, eps] : pole_eps) {
        if (!std::isfinite(eps) || eps < 0.0 || eps > 1.0) {
            throw ValidationError("eps_identities_check: per-pole epsilon out of range");
        }
        mn = std::min(mn, eps);
        mx = std::max(mx, eps);
    }
    rep.expected_star = mn;
    rep.expected_doublestar = mx;
    rep.star_ok = std::abs(star_combined - mn) <= tol;
    rep.doublestar_ok = std::abs(doublestar_combined - mx) <= tol;
    return rep;
}

} // namespace bdlab
