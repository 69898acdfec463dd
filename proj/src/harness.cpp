#include "bdlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include <json.hpp>

#include "bdlab/breakdown.hpp"
#include "bdlab/chains.hpp"
#include "bdlab/io.hpp"
#include "bdlab/pattern.hpp"
#include "bdlab/rng.hpp"

namespace bdlab {

Sample1D generate_ar1(std::size_t n, double rho, double sigma, std::uint64_t seed) {
    if (n < 2) {
        throw ValidationError("generate_ar1: need n >= 2");
    }
    if (!(sigma > 0.0)) {
        throw ValidationError("generate_ar1: sigma must be positive");
    }
    Rng rng(seed);
    std::vector<double> x(n);
    x[0] = sigma * rng.normal();
    for (std::size_t t = 0; t + 1 < n; ++t) {
        x[t + 1] = rho * x[t] + sigma * rng.normal();
    }
    return Sample1D(std::move(x));
}

Point pca_first_component(const Sample2D& s) {
    if (s.size() < 2) {
        throw ValidationError("pca_first_component: need n >= 2");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        mx += s.weight(i) * s.point(i).x;
        my += s.weight(i) * s.point(i).y;
    }
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dx = s.point(i).x - mx;
        const double dy = s.point(i).y - my;
        a += s.weight(i) * dx * dx;
        b += s.weight(i) * dx * dy;
        c += s.weight(i) * dy * dy;
    }
    if (a + c <= 0.0) {
        throw DegenerateError("pca_first_component: degenerate covariance");
    }
    const double gap = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
    if (gap <= 1e-12 * std::max(1.0, a + c)) {
        throw EqualEigenvalueError("pca_first_component: equal eigenvalues");
    }
    const double lmax = 0.5 * (a + c + gap);
    double vx, vy;
    if (b == 0.0) {
        if (a > c) {
            vx = 1.0;
            vy = 0.0;
        } else {
            vx = 0.0;
            vy = 1.0;
        }
    } else {
        // pick the better-conditioned row of (A - lmax I)
        const Point v1{b, lmax - a};
        const Point v2{lmax - c, b};
        const double n1 = v1.x * v1.x + v1.y * v1.y;
        const double n2 = v2.x * v2.x + v2.y * v2.y;
        const Point v = (n1 >= n2) ? v1 : v2;
        const double nv = std::sqrt(v.x * v.x + v.y * v.y);
        vx = v.x / nv;
        vy = v.y / nv;
    }
    if (vx < 0.0 || (vx == 0.0 && vy < 0.0)) {
        vx = -vx;
        vy = -vy;
    }
    return Point{vx, vy};
}

Fig1Step fig1_path_step(const Sample2D& s, const PiecewiseLinear& target, std::size_t moved,
                        std::optional<double> new_x) {
    if (moved >= s.size()) {
        throw IndexError("fig1_path_step: index out of range");
    }
    const Point p = s.point(moved);
    if (p.y == target(p.x)) {
        throw ValidationError("fig1_path_step: point already conforms to the curve");
    }
    const double nx = new_x.value_or(p.x);
    const std::size_t idx[] = {moved};
    const Point np[] = {Point{nx, target(nx)}};
    Sample2D out = replace_points(s, idx, np).sample;
    const CorrelationValue sc = spearman(out);
    return Fig1Step{std::move(out), sc};
}

// ---- experiments -----------------------------------------------------------

namespace {

double param(const ExperimentSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ExperimentReport exp_median_game(const ExperimentSpec& spec) {
    const auto n = static_cast<std::size_t>(param(spec, "n", 20));
    const double shift = param(spec, "shift", 200.0);
    const auto reps = static_cast<std::size_t>(param(spec, "reps", 50));
    const std::size_t moves = std::min<std::size_t>(10, n);

    CsvTable tab{{"rep", "move", "median"}, {}};
    double max_abs_m9 = 0.0;
    double min_m10 = std::numeric_limits<double>::infinity();
    double max_m10 = -min_m10;
    std::size_t single_jump = 0;

    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(Rng::substream(spec.seed, rep));
        std::vector<double> x(n);
        for (double& v : x) v = rng.normal();
        // seeded move order
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::swap(order[i], order[i + static_cast<std::size_t>(rng.integer(n - i))]);
        }
        std::vector<double> meds;
        meds.push_back(median_of(x));
        tab.rows.push_back({static_cast<double>(rep), 0.0, meds.back()});
        std::vector<double> y = x;
        for (std::size_t k = 0; k < moves; ++k) {
            y[order[k]] = x[order[k]] + shift;
            meds.push_back(median_of(y));
            tab.rows.push_back({static_cast<double>(rep), static_cast<double>(k + 1), meds.back()});
        }
        max_abs_m9 = std::max(max_abs_m9, std::abs(meds[9]));
        min_m10 = std::min(min_m10, meds[10]);
        max_m10 = std::max(max_m10, meds[10]);
        bool ok = meds[10] - meds[9] > 50.0;
        for (std::size_t k = 1; k <= 9; ++k) {
            if (std::abs(meds[k] - meds[k - 1]) >= 5.0) ok = false;
        }
        if (ok) ++single_jump;
    }

    ExperimentReport rep;
    rep.summary = {
        {"reps", static_cast<double>(reps)},
        {"max_abs_median_after_9", max_abs_m9},
        {"min_median_after_10", min_m10},
        {"max_median_after_10", max_m10},
        {"single_jump_fraction", static_cast<double>(single_jump) / static_cast<double>(reps)},
    };
    rep.series.emplace_back("medians", std::move(tab));
    return rep;
}

struct Fig1Path {
    std::vector<double> spearmans; // start value first
    double max_step = 0.0;
};

// Greedy conforming path: most vertically displaced point first, landing x
// chosen among the current gap slots to minimize the step.
Fig1Path fig1_greedy_path(Sample2D s, const PiecewiseLinear& curve,
                          const std::set<std::size_t>& designated) {
    const std::size_t n = s.size();
    Fig1Path path;
    path.spearmans.push_back(spearman(s).value);
    std::set<std::size_t> conform = designated;
    while (conform.size() < n) {
        // most displaced nonconforming point
        std::size_t pick = n;
        double disp = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (conform.count(i)) continue;
            const double d = std::abs(s.point(i).y - curve(s.point(i).x));
            if (d > disp) {
                disp = d;
                pick = i;
            }
        }
        // candidate landing slots
        std::vector<double> xs;
        for (const Point& p : s.points()) xs.push_back(p.x);
        std::sort(xs.begin(), xs.end());
        std::vector<double> slots = {s.point(pick).x};
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) slots.push_back(0.5 * (xs[i] + xs[i + 1]));
        slots.push_back(xs.front() - 0.05);
        slots.push_back(xs.back() + 0.05);

        const double t0 = path.spearmans.back();
        double best_gap = std::numeric_limits<double>::infinity();
        std::optional<Fig1Step> best;
        for (double sx : slots) {
            Fig1Step step = fig1_path_step(s, curve, pick, sx);
            const double gap = std::abs(step.spearman_value.value - t0);
            if (gap < best_gap) {
                best_gap = gap;
                best = std::move(step);
            }
        }
        s = std::move(best->sample);
        conform.insert(pick);
        path.spearmans.push_back(best->spearman_value.value);
        path.max_step = std::max(path.max_step, best_gap);
    }
    return path;
}

ExperimentReport exp_fig1_path(const ExperimentSpec& spec) {
    const auto n = static_cast<std::size_t>(param(spec, "n", 20));
    const auto reps = static_cast<std::size_t>(param(spec, "reps", 50));
    const auto designated_size = static_cast<std::size_t>(param(spec, "designated", 6));
    const double step_budget = param(spec, "step_budget", 0.18);

    CsvTable tab{{"rep", "step", "spearman"}, {}};
    double max_step = 0.0;
    double min_final = 1.0;
    double sum_start = 0.0;
    std::size_t exact_final = 0;

    for (std::size_t rep = 0; rep < reps; ++rep) {
        std::optional<Fig1Path> accepted;
        for (std::size_t attempt = 0; attempt < 64 && !accepted; ++attempt) {
            Rng rng(Rng::substream(spec.seed, rep * 1024 + attempt));
            std::vector<Point> pts(n);
            for (Point& p : pts) p = Point{rng.uniform(), rng.uniform()};
            Sample2D s{pts};
            // designated nondecreasing subset from the weak-monotone chain
            const DeltaResult d = delta_chain(s, /*weak_monotone=*/true);
            if (d.witness_plus.size() < designated_size) continue;
            std::vector<std::size_t> chain(d.witness_plus.begin(),
                                           d.witness_plus.begin() +
                                               static_cast<std::ptrdiff_t>(designated_size));
            std::vector<double> kx, ky;
            for (std::size_t i : chain) {
                kx.push_back(s.point(i).x);
                ky.push_back(s.point(i).y);
            }
            std::sort(kx.begin(), kx.end());
            std::sort(ky.begin(), ky.end());
            // continuous draws make the chain strictly increasing
            PiecewiseLinear curve(kx, ky);
            Fig1Path path =
                fig1_greedy_path(s, curve, std::set<std::size_t>(chain.begin(), chain.end()));
            if (path.max_step <= step_budget && path.spearmans.back() == 1.0) {
                accepted = std::move(path);
            }
        }
        if (!accepted) {
            throw SpecError("fig1_path: no admissible sample found (unexpected)");
        }
        for (std::size_t k = 0; k < accepted->spearmans.size(); ++k) {
            tab.rows.push_back(
                {static_cast<double>(rep), static_cast<double>(k), accepted->spearmans[k]});
        }
        max_step = std::max(max_step, accepted->max_step);
        min_final = std::min(min_final, accepted->spearmans.back());
        sum_start += accepted->spearmans.front();
        if (accepted->spearmans.back() == 1.0) ++exact_final;
    }

    ExperimentReport rep;
    rep.summary = {
        {"reps", static_cast<double>(reps)},
        {"max_step", max_step},
        {"min_final_spearman", min_final},
        {"exact_final_fraction", static_cast<double>(exact_final) / static_cast<double>(reps)},
        {"mean_start_spearman", sum_start / static_cast<double>(reps)},
    };
    rep.series.emplace_back("path", std::move(tab));
    return rep;
}

ExperimentReport exp_delta_scaling(const ExperimentSpec& spec) {
    const auto reps = static_cast<std::size_t>(param(spec, "reps", 200));
    const std::vector<std::size_t> ns = {400, 1600, 2500};

    CsvTable tab{{"n", "rep", "delta_plus"}, {}};
    ExperimentReport rep;
    std::map<std::size_t, double> means;
    for (std::size_t n : ns) {
        double sum = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            Rng rng(Rng::substream(spec.seed, n * 100000 + r));
            std::vector<Point> pts(n);
            for (Point& p : pts) p = Point{rng.uniform(), rng.uniform()};
            const DeltaResult d = delta_chain(Sample2D{std::move(pts)});
            sum += d.delta_plus;
            tab.rows.push_back({static_cast<double>(n), static_cast<double>(r), d.delta_plus});
        }
        means[n] = sum / static_cast<double>(reps);
    }
    for (std::size_t n : ns) {
        rep.summary.emplace_back("mean_dplus_" + std::to_string(n), means[n]);
        rep.summary.emplace_back("mean_dplus_sqrtn_" + std::to_string(n),
                                 means[n] * std::sqrt(static_cast<double>(n)));
    }
    rep.summary.emplace_back("ratio_1600_over_400", means[1600] / means[400]);
    rep.series.emplace_back("delta", std::move(tab));
    return rep;
}

ExperimentReport exp_cheshire(const ExperimentSpec& spec) {
    const auto n = static_cast<std::size_t>(param(spec, "n", 100));
    const auto reps = static_cast<std::size_t>(param(spec, "reps", 50));
    const Template t = default_template();
    const std::vector<double> fractions = {0.5, 0.7, 0.85, 0.95};

    CsvTable tab{{"fraction", "rep", "sigma_rel_err", "recovered"}, {}};
    ExperimentReport rep;

    const double zlo = *std::min_element(t.z.begin(), t.z.end());
    const double zhi = *std::max_element(t.z.begin(), t.z.end());

    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        const double f = fractions[fi];
        std::size_t recovered = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            Rng rng(Rng::substream(spec.seed, fi * 1000003 + r));
            const double mu = rng.uniform(-5.0, 5.0);
            const double sg = rng.uniform(0.5, 5.0);
            const auto n_noise = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
            const std::size_t n_signal = n - n_noise;

            std::vector<double> vals;
            for (std::size_t i = 0; i < n_signal; ++i) {
                vals.push_back(mu + sg * t.z[i % t.size()]);
            }
            // noise on a range 100x wider than the template image, kept
            // free of exact replicas
            const double center = mu + sg * 0.5 * (zlo + zhi);
            const double half = 50.0 * sg * (zhi - zlo);
            std::vector<double> noise;
            for (int attempt = 0; attempt < 20; ++attempt) {
                noise.clear();
                for (std::size_t i = 0; i < n_noise; ++i) {
                    noise.push_back(rng.uniform(center - half, center + half));
                }
                if (!contains_template_image(noise, t, 1e-9)) break;
            }
            vals.insert(vals.end(), noise.begin(), noise.end());

            const TemplateFit fit = fit_template(Sample1D(std::move(vals)), t);
            const double rel = std::abs(fit.sigma - sg) / sg;
            const bool ok = rel <= 0.01;
            if (ok) ++recovered;
            tab.rows.push_back({f, static_cast<double>(r), rel, ok ? 1.0 : 0.0});
        }
        rep.summary.emplace_back(
            "recovery_rate_" + std::to_string(static_cast<int>(std::llround(f * 100))),
            static_cast<double>(recovered) / static_cast<double>(reps));
    }
    rep.summary.emplace_back("reps", static_cast<double>(reps));
    rep.series.emplace_back("recovery", std::move(tab));
    return rep;
}

ExperimentReport exp_ar1(const ExperimentSpec& spec) {
    const auto n = static_cast<std::size_t>(param(spec, "n", 14));
    const double rho = param(spec, "rho", -1.25);
    const double sigma = param(spec, "sigma", 0.2);
    const auto reps = static_cast<std::size_t>(param(spec, "reps", 200));

    CsvTable tab{{"rep", "slope", "clamped", "within_005"}, {}};
    std::size_t within = 0;
    std::size_t clamped_at_minus1 = 0;
    double slope_sum = 0.0;

    for (std::size_t r = 0; r < reps; ++r) {
        const Sample1D series = generate_ar1(n, rho, sigma, Rng::substream(spec.seed, r));
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t t = 0; t + 1 < n; ++t) {
            sxx += series.value(t) * series.value(t);
            sxy += series.value(t) * series.value(t + 1);
        }
        const double slope = sxy / sxx;
        const double clamped = std::min(1.0, std::max(-1.0, slope));
        const bool ok = std::abs(slope - rho) <= 0.05;
        if (ok) {
            ++within;
            if (clamped == -1.0) ++clamped_at_minus1;
        }
        slope_sum += slope;
        tab.rows.push_back({static_cast<double>(r), slope, clamped, ok ? 1.0 : 0.0});
    }

    ExperimentReport rep;
    rep.summary = {
        {"reps", static_cast<double>(reps)},
        {"rate_within_005", static_cast<double>(within) / static_cast<double>(reps)},
        {"clamped_minus1_rate_given_within",
         within == 0 ? 0.0 : static_cast<double>(clamped_at_minus1) / static_cast<double>(within)},
        {"mean_slope", slope_sum / static_cast<double>(reps)},
    };
    rep.series.emplace_back("slopes", std::move(tab));
    return rep;
}

ExperimentReport exp_pca_flip(const ExperimentSpec& spec) {
    const double eps = param(spec, "eps", 1e-9);
    const std::vector<Point> base = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};

    bool base_equal = false;
    try {
        (void)pca_first_component(Sample2D{base});
    } catch (const EqualEigenvalueError&) {
        base_equal = true;
    }

    std::vector<Point> plus = base;
    plus[0].x += eps;
    std::vector<Point> minus = base;
    minus[0].x -= eps;
    const Point va = pca_first_component(Sample2D{plus});
    const Point vb = pca_first_component(Sample2D{minus});
    const double dot = std::min(1.0, std::abs(va.x * vb.x + va.y * vb.y));
    const double angle = std::acos(dot) * 180.0 / std::numbers::pi;

    ExperimentReport rep;
    rep.summary = {
        {"base_equal_eigenvalues", base_equal ? 1.0 : 0.0},
        {"perturbation", eps},
        {"angle_degrees", angle},
        {"dir_plus_x", va.x},
        {"dir_plus_y", va.y},
        {"dir_minus_x", vb.x},
        {"dir_minus_y", vb.y},
    };
    return rep;
}

ExperimentReport exp_ko_rate(const ExperimentSpec& spec) {
    const auto reps = static_cast<std::size_t>(param(spec, "reps", 200));
    const std::vector<std::size_t> ns = {100, 400, 1600};

    CsvTable tab{{"n", "rep", "sqrtn_dko"}, {}};
    ExperimentReport rep;
    std::vector<double> medians;
    for (std::size_t n : ns) {
        std::vector<double> vals;
        for (std::size_t r = 0; r < reps; ++r) {
            Rng rng(Rng::substream(spec.seed, n * 70001 + r));
            std::vector<double> x(n);
            for (double& v : x) v = rng.uniform();
            std::sort(x.begin(), x.end());
            // sup |F_n - U(0,1)| over the sorted sample
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double fi = static_cast<double>(i + 1) / static_cast<double>(n);
                const double fim = static_cast<double>(i) / static_cast<double>(n);
                d = std::max(d, std::max(fi - x[i], x[i] - fim));
            }
            const double v = std::sqrt(static_cast<double>(n)) * d;
            vals.push_back(v);
            tab.rows.push_back({static_cast<double>(n), static_cast<double>(r), v});
        }
        medians.push_back(median_of(vals));
        rep.summary.emplace_back("median_sqrtn_dko_" + std::to_string(n), medians.back());
    }
    rep.summary.emplace_back(
        "median_spread", *std::max_element(medians.begin(), medians.end()) -
                             *std::min_element(medians.begin(), medians.end()));
    rep.series.emplace_back("dko", std::move(tab));
    return rep;
}

ExperimentReport exp_gl_collapse(const ExperimentSpec& spec) {
    const auto grid_count = static_cast<std::size_t>(param(spec, "grid", 41));
    const std::vector<long> ns = {5, 10, 20};
    const GridSpec grid{-1.0, 1.0, grid_count};

    ExperimentReport rep;
    for (long n : ns) {
        const double contaminant = 10.0 * static_cast<double>(n) * static_cast<double>(n);
        const double dc = gl_value_set_diameter(CounterexampleKind::clamped_mean, n, contaminant, grid);
        const double dt = gl_value_set_diameter(CounterexampleKind::t_star, n, contaminant, grid);
        rep.summary.emplace_back("diameter_clamped_n" + std::to_string(n), dc);
        rep.summary.emplace_back("diameter_tstar_n" + std::to_string(n), dt);
        rep.summary.emplace_back("bound_2_over_n2_n" + std::to_string(n),
                                 2.0 / (static_cast<double>(n) * static_cast<double>(n)));
    }
    return rep;
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "median_game", "fig1_path", "delta_scaling", "cheshire",
        "ar1",         "pca_flip",  "ko_rate",       "gl_collapse",
    };
    return names;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (spec.name == "median_game") return exp_median_game(spec);
    if (spec.name == "fig1_path") return exp_fig1_path(spec);
    if (spec.name == "delta_scaling") return exp_delta_scaling(spec);
    if (spec.name == "cheshire") return exp_cheshire(spec);
    if (spec.name == "ar1") return exp_ar1(spec);
    if (spec.name == "pca_flip") return exp_pca_flip(spec);
    if (spec.name == "ko_rate") return exp_ko_rate(spec);
    if (spec.name == "gl_collapse") return exp_gl_collapse(spec);
    throw SpecError("unknown experiment: " + spec.name);
}

void write_report(const ExperimentReport& rep, const std::string& out_dir,
                  const std::string& name) {
    std::filesystem::create_directories(out_dir);
    nlohmann::ordered_json j;
    for (const auto& [k, v] : rep.summary) j[k] = v;
    {
        std::ofstream out(out_dir + "/" + name + "_summary.json");
        if (!out) throw ValidationError("cannot write summary json");
        out << j.dump(2) << '\n';
    }
    for (const auto& [series_name, tab] : rep.series) {
        std::ofstream out(out_dir + "/" + name + "_" + series_name + ".csv");
        if (!out) throw ValidationError("cannot write series csv");
        for (std::size_t c = 0; c < tab.columns.size(); ++c) {
            out << tab.columns[c] << (c + 1 < tab.columns.size() ? "," : "\n");
        }
        for (const auto& row : tab.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << format_double(row[c]) << (c + 1 < row.size() ? "," : "\n");
            }
        }
    }
}

} // namespace bdlab
