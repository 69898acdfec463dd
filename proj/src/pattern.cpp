#include "bdlab/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "bdlab/rng.hpp"

namespace bdlab {

Template::Template(std::vector<double> entries) : z(std::move(entries)) {
    if (z.size() < 2) {
        throw ValidationError("Template: need at least two entries");
    }
    std::set<double> uniq(z.begin(), z.end());
    if (uniq.size() != z.size()) {
        throw ValidationError("Template: entries must be distinct");
    }
}

Template default_template() { return Template({1.5, 1.8, 1.3}); }

double template_objective(const Sample1D& s, const Template& t, double mu, double sigma) {
    if (!(sigma > 0.0)) {
        throw ValidationError("template_objective: sigma must be positive");
    }
    double total = 0.0;
    for (double zi : t.z) {
        double best = std::numeric_limits<double>::infinity();
        for (double xj : s.values()) {
            const double r = (xj - mu) / sigma - zi;
            best = std::min(best, r * r);
        }
        total += best;
    }
    return total;
}

namespace {

struct OlsFit {
    bool ok = false;
    double a = 0.0, b = 0.0; // z ~ a*x + b
    double rss = 0.0;
};

// Least squares of z on the selected x values; rss computed as an explicit
// residual sum so near-perfect fits cannot round negative.
OlsFit ols(const std::vector<double>& x, const std::vector<double>& z) {
    const std::size_t m = x.size();
    const double dm = static_cast<double>(m);
    double sx = 0.0, sz = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += x[i];
        sz += z[i];
    }
    const double mx = sx / dm;
    const double mz = sz / dm;
    double sxx = 0.0, sxz = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxz += (x[i] - mx) * (z[i] - mz);
    }
    OlsFit f;
    if (sxx <= 0.0) return f; // all selected x equal: sigma unidentifiable
    f.a = sxz / sxx;
    f.b = mz - f.a * mx;
    f.rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = f.a * x[i] + f.b - z[i];
        f.rss += r * r;
    }
    f.ok = true;
    return f;
}

TemplateFit fit_exact(const Sample1D& s, const Template& t) {
    const std::size_t n = s.size();
    const std::size_t m = t.size();

    TemplateFit best;
    best.objective = std::numeric_limits<double>::infinity();
    bool found = false;

    std::vector<std::size_t> asg(m, 0);
    std::vector<double> xs(m);
    while (true) {
        for (std::size_t i = 0; i < m; ++i) xs[i] = s.value(asg[i]);
        const OlsFit f = ols(xs, t.z);
        if (f.ok && f.a > 0.0 && f.rss < best.objective) {
            best.objective = f.rss;
            best.sigma = 1.0 / f.a;
            best.mu = -f.b / f.a;
            best.assignment = asg;
            found = true;
        }
        // odometer over assignments, lexicographic
        std::size_t p = m;
        bool adv = false;
        while (p-- > 0) {
            if (asg[p] + 1 < n) {
                ++asg[p];
                for (std::size_t q = p + 1; q < m; ++q) asg[q] = 0;
                adv = true;
                break;
            }
        }
        if (!adv) break;
    }
    if (!found) {
        throw DegenerateError("fit_template: all assignments degenerate");
    }
    best.exact = true;
    return best;
}

TemplateFit fit_beam(const Sample1D& s, const Template& t, std::size_t beam_width) {
    const std::size_t n = s.size();
    const std::size_t m = t.size();

    struct State {
        std::vector<std::size_t> asg;
        double score = 0.0;
    };
    std::vector<State> beam;
    for (std::size_t j = 0; j < n; ++j) {
        beam.push_back(State{{j}, 0.0});
    }

    std::vector<double> xs, zs;
    for (std::size_t level = 1; level < m; ++level) {
        std::vector<State> next;
        next.reserve(beam.size() * n);
        for (const State& st : beam) {
            for (std::size_t j = 0; j < n; ++j) {
                State ns{st.asg, 0.0};
                ns.asg.push_back(j);
                xs.clear();
                zs.clear();
                for (std::size_t i = 0; i < ns.asg.size(); ++i) {
                    xs.push_back(s.value(ns.asg[i]));
                    zs.push_back(t.z[i]);
                }
                const OlsFit f = ols(xs, zs);
                ns.score = f.ok ? (f.a > 0.0 ? f.rss : f.rss + 1e9) : 1e12;
                next.push_back(std::move(ns));
            }
        }
        std::stable_sort(next.begin(), next.end(),
                         [](const State& a, const State& b) { return a.score < b.score; });
        if (next.size() > beam_width) next.resize(beam_width);
        beam = std::move(next);
    }

    TemplateFit best;
    best.objective = std::numeric_limits<double>::infinity();
    bool found = false;
    for (const State& st : beam) {
        xs.clear();
        for (std::size_t i = 0; i < m; ++i) xs.push_back(s.value(st.asg[i]));
        const OlsFit f = ols(xs, t.z);
        if (f.ok && f.a > 0.0 && f.rss < best.objective) {
            best.objective = f.rss;
            best.sigma = 1.0 / f.a;
            best.mu = -f.b / f.a;
            best.assignment = st.asg;
            found = true;
        }
    }
    if (!found) {
        throw DegenerateError("fit_template: all assignments degenerate");
    }
    best.exact = false;
    return best;
}

} // namespace

TemplateFit fit_template(const Sample1D& s, const Template& t, std::size_t beam_width) {
    if (s.size() < 2) {
        throw ValidationError("fit_template: need n >= 2");
    }
    bool two_distinct = false;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s.value(i) != s.value(0)) {
            two_distinct = true;
            break;
        }
    }
    if (!two_distinct) {
        throw DegenerateError("fit_template: all data values equal");
    }
    if (t.size() <= 4) {
        return fit_exact(s, t);
    }
    return fit_beam(s, t, beam_width);
}

bool contains_template_image(const std::vector<double>& values, const Template& t, double gap) {
    if (values.size() < t.size()) return false;
    Sample1D sub(values);
    bool two_distinct = false;
    for (double v : values) {
        if (v != values[0]) {
            two_distinct = true;
            break;
        }
    }
    if (!two_distinct) return false;
    try {
        const TemplateFit f = fit_template(sub, t);
        // per-point residual below gap <=> rss below m * gap^2
        return f.objective < static_cast<double>(t.size()) * gap * gap;
    } catch (const DegenerateError&) {
        return false;
    }
}

PatternBreakdown modified_breakdown(const Sample1D& s, const Template& t,
                                    const ContaminationClass& cls, std::uint64_t seed) {
    const std::size_t n = s.size();
    const TemplateFit fit0 = fit_template(s, t);
    if (fit0.objective > 1e-9) {
        throw ValidationError("modified_breakdown: sample contains no exact template embedding");
    }

    // Signal points are protected; only the rest may be replaced.
    std::set<std::size_t> signal(fit0.assignment.begin(), fit0.assignment.end());
    std::vector<std::size_t> attackable;
    for (std::size_t i = 0; i < n; ++i) {
        if (!signal.count(i)) attackable.push_back(i);
    }

    const double mu_tol = 0.25 * fit0.sigma;
    const double sigma_tol = 0.05;

    auto moved = [&](const TemplateFit& f) {
        return std::abs(f.mu - fit0.mu) > mu_tol ||
               std::abs(f.sigma / fit0.sigma - 1.0) > sigma_tol;
    };

    double lo = s.value(0), hi = s.value(0);
    for (double v : s.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;

    Rng rng(seed);
    PatternBreakdown out;

    // Replacement-count ladder: every small k exactly, then decile steps.
    std::vector<std::size_t> ladder;
    for (std::size_t k = 1; k <= std::min<std::size_t>(10, attackable.size()); ++k) {
        ladder.push_back(k);
    }
    for (std::size_t j = 2; j <= 10; ++j) {
        const std::size_t k = attackable.size() * j / 10;
        if (k > 10) ladder.push_back(k);
    }
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

    const std::size_t m = t.size();
    for (std::size_t k : ladder) {
        std::vector<std::size_t> idx(attackable.begin(),
                                     attackable.begin() + static_cast<std::ptrdiff_t>(k));

        std::vector<std::vector<double>> attacks;
        if (cls.allow_replica && k >= m) {
            // Second exact template copy, displaced and rescaled, padded
            // with far-off fill.
            std::vector<double> vals;
            const double mu2 = fit0.mu + 20.0 * fit0.sigma + range;
            const double sg2 = fit0.sigma * 3.0;
            for (std::size_t i = 0; i < k; ++i) {
                if (i < m) {
                    vals.push_back(mu2 + sg2 * t.z[i]);
                } else {
                    vals.push_back(mu2 + sg2 * (3.0 + static_cast<double>(i)));
                }
            }
            attacks.push_back(std::move(vals));
        }
        // Class-valid noise attacks.
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<double> vals;
            int guard = 0;
            while (vals.size() < k && guard++ < 1000) {
                vals.push_back(rng.uniform(lo - 5.0 * range, hi + 5.0 * range));
                if (vals.size() == k && !cls.allow_replica &&
                    contains_template_image(vals, t, cls.gap)) {
                    vals.pop_back(); // drop the offending point and redraw
                }
            }
            if (vals.size() == k) attacks.push_back(std::move(vals));
        }

        for (const auto& vals : attacks) {
            Sample1D q = replace_points(s, idx, vals).sample;
            TemplateFit f = fit_template(q, t);
            bool broken = moved(f);
            if (!broken && k >= m && contains_template_image(vals, t, std::max(cls.gap, 1e-9))) {
                // A second exact image ties the global optimum at discrepant
                // parameters: the fit is broken even if the tie-break keeps it.
                f = fit_template(Sample1D(vals), t);
                broken = moved(f);
            }
            if (broken) {
                out.fraction = static_cast<double>(k) / static_cast<double>(n);
                out.broke = true;
                out.mu_shift = std::abs(f.mu - fit0.mu) / fit0.sigma;
                out.sigma_ratio = f.sigma / fit0.sigma;
                out.witness_values = q.values();
                return out;
            }
        }
    }
    out.fraction = 1.0;
    out.broke = false;
    return out;
}

} // namespace bdlab
