#include "bdlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bdlab/errors.hpp"

namespace bdlab {

namespace {

struct Atom1D {
    double x;
    double p;
    double q;
};

// Merged support with per-sample masses, sorted by value.
std::vector<Atom1D> merged_atoms(const Sample1D& p, const Sample1D& q) {
    std::map<double, std::pair<double, double>> m;
    for (std::size_t i = 0; i < p.size(); ++i) m[p.value(i)].first += p.weight(i);
    for (std::size_t i = 0; i < q.size(); ++i) m[q.value(i)].second += q.weight(i);
    std::vector<Atom1D> out;
    out.reserve(m.size());
    for (const auto& [x, pq] : m) out.push_back(Atom1D{x, pq.first, pq.second});
    return out;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

} // namespace

double strip_mass(const Sample2D& s, const StripSpec& c) {
    if (c.a == 0.0 && c.b == 0.0) {
        throw ValidationError("strip_mass: (a, b) must be nonzero");
    }
    if (c.delta < 0.0) {
        throw ValidationError("strip_mass: delta must be nonnegative");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double t = c.a * s.point(i).x + c.b * s.point(i).y + c.c;
        if (t >= -c.delta && t <= c.delta) mass += s.weight(i);
    }
    return mass;
}

MetricValue d_ko(const Sample1D& p, const Sample1D& q) {
    const auto atoms = merged_atoms(p, q);

    // Uniform equal-n fast path: exact integer counting.
    if (p.uniform_weights() && q.uniform_weights() && p.size() == q.size()) {
        const double unit = p.weight(0);
        const double per_atom = 1.0 / unit; // units per weight; counts are exact
        long cnt = 0;
        long best = 0;
        double best_x = atoms.front().x;
        for (const auto& a : atoms) {
            cnt += static_cast<long>(std::llround(a.p * per_atom)) -
                   static_cast<long>(std::llround(a.q * per_atom));
            if (std::abs(cnt) > best) {
                best = std::abs(cnt);
                best_x = a.x;
            }
        }
        MetricValue mv;
        mv.value = static_cast<double>(best) * unit;
        mv.certificate = IntervalCert{{{atoms.front().x, best_x}}};
        return mv;
    }

    double run = 0.0;
    double best = 0.0;
    double best_x = atoms.front().x;
    for (const auto& a : atoms) {
        run += a.p - a.q;
        if (std::abs(run) > best) {
            best = std::abs(run);
            best_x = a.x;
        }
    }
    MetricValue mv;
    mv.value = clamp01(best);
    mv.certificate = IntervalCert{{{atoms.front().x, best_x}}};
    return mv;
}

namespace {

// Max-sum selection of at most k disjoint contiguous runs of d (empty
// selection allowed). Returns the value and the chosen [first, last] index
// ranges.
struct RunResult {
    double value = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> runs;
};

RunResult max_k_runs(const std::vector<double>& d, int k) {
    const int m = static_cast<int>(d.size());
    k = std::min(k, m);
    const double neg_inf = -std::numeric_limits<double>::infinity();

    // f[t][i]: best with exactly t runs, t-th run ending at i.
    // g[t][i]: best with at most t runs within the first i+1 entries.
    std::vector<std::vector<double>> f(k + 1, std::vector<double>(m, neg_inf));
    std::vector<std::vector<double>> g(k + 1, std::vector<double>(m, 0.0));
    std::vector<std::vector<char>> f_ext(k + 1, std::vector<char>(m, 0));
    std::vector<std::vector<char>> g_take(k + 1, std::vector<char>(m, 0));

    for (int t = 1; t <= k; ++t) {
        for (int i = 0; i < m; ++i) {
            double start_new = (i > 0) ? g[t - 1][i - 1] : 0.0;
            double extend = (i > 0) ? f[t][i - 1] : neg_inf;
            if (extend > start_new) {
                f[t][i] = d[i] + extend;
                f_ext[t][i] = 1;
            } else {
                f[t][i] = d[i] + start_new;
            }
            double skip = (i > 0) ? g[t][i - 1] : 0.0;
            if (f[t][i] > skip) {
                g[t][i] = f[t][i];
                g_take[t][i] = 1;
            } else {
                g[t][i] = skip;
            }
        }
    }

    RunResult r;
    if (m == 0 || k == 0) return r;
    r.value = std::max(0.0, g[k][m - 1]);
    if (r.value == 0.0) return r;

    // Walk back through g/f to recover the runs.
    int t = k;
    int i = m - 1;
    while (t > 0 && i >= 0) {
        if (!g_take[t][i]) {
            --i;
            continue;
        }
        const std::size_t last = static_cast<std::size_t>(i);
        while (f_ext[t][i]) --i;
        r.runs.emplace_back(static_cast<std::size_t>(i), last);
        --i;
        --t;
    }
    std::reverse(r.runs.begin(), r.runs.end());
    return r;
}

} // namespace

MetricValue d_kuiper(const Sample1D& p, const Sample1D& q, int k) {
    if (k < 1) {
        throw ValidationError("d_kuiper: k must be >= 1");
    }
    const auto atoms = merged_atoms(p, q);
    std::vector<double> d;
    d.reserve(atoms.size());
    for (const auto& a : atoms) d.push_back(a.p - a.q);

    RunResult plus = max_k_runs(d, k);
    for (double& v : d) v = -v;
    RunResult minus = max_k_runs(d, k);

    const RunResult& best = (plus.value >= minus.value) ? plus : minus;
    MetricValue mv;
    mv.value = clamp01(best.value);
    IntervalCert cert;
    for (const auto& [a, b] : best.runs) {
        cert.intervals.emplace_back(atoms[a].x, atoms[b].x);
    }
    mv.certificate = cert;
    return mv;
}

namespace {

// Inclusive interval mass from a sorted (values, prefix-weights) table.
struct MassTable {
    std::vector<double> xs;     // sorted, unique
    std::vector<double> prefix; // prefix[i] = mass of xs[0..i]

    static MassTable build(const Sample1D& s) {
        std::map<double, double> m;
        for (std::size_t i = 0; i < s.size(); ++i) m[s.value(i)] += s.weight(i);
        MassTable t;
        double run = 0.0;
        for (const auto& [x, w] : m) {
            t.xs.push_back(x);
            run += w;
            t.prefix.push_back(run);
        }
        return t;
    }

    double mass(double lo, double hi) const {
        const auto b = std::upper_bound(xs.begin(), xs.end(), hi) - xs.begin();
        const auto a = std::lower_bound(xs.begin(), xs.end(), lo) - xs.begin();
        if (b <= a) return 0.0;
        return prefix[b - 1] - (a > 0 ? prefix[a - 1] : 0.0);
    }
};

// Worst violation of P(I) <= Q(I^eps) + eps over the candidate intervals.
double pk_worst_gap(const MassTable& tp, const std::vector<double>& candidates,
                    const MassTable& tq, double eps) {
    const double expand = std::exp(eps);
    double worst = -std::numeric_limits<double>::infinity();
    const std::size_t m = candidates.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const double lo = candidates[i];
            const double hi = candidates[j];
            const double c = 0.5 * (lo + hi);
            const double h = 0.5 * (hi - lo);
            const double pm = tp.mass(lo, hi);
            const double qm = tq.mass(c - h * expand, c + h * expand);
            worst = std::max(worst, pm - qm - eps);
        }
    }
    return worst;
}

double pk_one_sided(const Sample1D& p, const Sample1D& q) {
    const MassTable tp = MassTable::build(p);
    const MassTable tq = MassTable::build(q);
    std::vector<double> cand = tp.xs;
    cand.insert(cand.end(), tq.xs.begin(), tq.xs.end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    if (pk_worst_gap(tp, cand, tq, 0.0) <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (pk_worst_gap(tp, cand, tq, mid) <= 1e-15) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

MetricValue d_pk(const Sample1D& p, const Sample1D& q) {
    const double a = pk_one_sided(p, q);
    const double b = pk_one_sided(q, p);
    MetricValue mv;
    mv.value = clamp01(std::max(a, b));
    return mv;
}

MetricValue d_tv_discrete(const Sample1D& p, const Sample1D& q) {
    const auto atoms = merged_atoms(p, q);
    double sum = 0.0;
    for (const auto& a : atoms) sum += std::abs(a.p - a.q);
    MetricValue mv;
    mv.value = clamp01(0.5 * sum);
    return mv;
}

namespace {

struct Atom2D {
    Point pt;
    double d; // net weight p - q
};

std::vector<Atom2D> merged_atoms(const Sample2D& p, const Sample2D& q) {
    std::map<std::pair<double, double>, double> m;
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[{p.point(i).x, p.point(i).y}] += p.weight(i);
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        m[{q.point(i).x, q.point(i).y}] -= q.weight(i);
    }
    std::vector<Atom2D> out;
    out.reserve(m.size());
    for (const auto& [xy, d] : m) out.push_back(Atom2D{Point{xy.first, xy.second}, d});
    return out;
}

} // namespace

MetricValue d_tv_discrete(const Sample2D& p, const Sample2D& q) {
    const auto atoms = merged_atoms(p, q);
    double sum = 0.0;
    for (const auto& a : atoms) sum += std::abs(a.d);
    MetricValue mv;
    mv.value = clamp01(0.5 * sum);
    return mv;
}

namespace {

// Best band [lo, hi] of projections along the unit normal (ca, sa):
// max |sum of net weights| over a contiguous tie-group run.
struct BandBest {
    double value = 0.0;
    double lo = 0.0, hi = 0.0;
};

BandBest best_band(const std::vector<Atom2D>& atoms, double ca, double sa) {
    const std::size_t n = atoms.size();
    std::vector<std::pair<double, double>> proj(n);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        proj[i] = {ca * atoms[i].pt.x + sa * atoms[i].pt.y, atoms[i].d};
        scale = std::max(scale, std::abs(proj[i].first));
    }
    std::sort(proj.begin(), proj.end());

    // Group projections equal up to rounding noise.
    std::vector<double> gx, gw;
    const double tol = 1e-9 * scale;
    for (const auto& [t, w] : proj) {
        if (!gx.empty() && t - gx.back() <= tol) {
            gw.back() += w;
        } else {
            gx.push_back(t);
            gw.push_back(w);
        }
    }

    BandBest best;
    for (int sign : {+1, -1}) {
        double run = 0.0;
        std::size_t start = 0;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double v = sign * gw[i];
            if (run + v < v) {
                run = v;
                start = i;
            } else {
                run += v;
            }
            if (run > best.value) {
                best.value = run;
                best.lo = gx[start];
                best.hi = gx[i];
            }
        }
    }
    return best;
}

} // namespace

MetricValue d_strip(const Sample2D& p, const Sample2D& q) {
    auto atoms = merged_atoms(p, q);
    if (atoms.size() < 2) {
        throw ValidationError("d_strip: combined support must contain at least 2 points");
    }
    std::erase_if(atoms, [](const Atom2D& a) { return a.d == 0.0; });
    MetricValue mv;
    if (atoms.empty()) {
        mv.value = 0.0;
        return mv;
    }

    // Critical normal angles in [0, pi): orthogonal to pair differences,
    // plus the axes.
    std::vector<double> angles = {0.0, M_PI_2};
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            const double dx = atoms[j].pt.x - atoms[i].pt.x;
            const double dy = atoms[j].pt.y - atoms[i].pt.y;
            double th = std::atan2(dx, -dy); // normal of (dx, dy)
            while (th < 0.0) th += M_PI;
            while (th >= M_PI) th -= M_PI;
            angles.push_back(th);
        }
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 angles.end());

    // Probe every critical angle and every sector midpoint.
    std::vector<double> probes = angles;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double next = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + M_PI;
        probes.push_back(0.5 * (angles[i] + next));
    }

    StripCert cert;
    double best = 0.0;
    for (double th : probes) {
        const double ca = std::cos(th);
        const double sa = std::sin(th);
        const BandBest b = best_band(atoms, ca, sa);
        if (b.value > best) {
            best = b.value;
            cert = StripCert{ca, sa, b.lo, b.hi};
        }
    }
    mv.value = clamp01(best);
    mv.certificate = cert;
    return mv;
}

namespace {

// Max-weight strictly increasing chain over atoms with positive weight
// only. O(n^2). Returns weight and member indices into `atoms`.
struct ChainBest {
    double value = 0.0;
    std::vector<std::size_t> members;
};

ChainBest best_chain(const std::vector<Atom2D>& atoms, bool from_p, bool flip_y) {
    struct Node {
        double x, y, w;
        std::size_t idx;
    };
    std::vector<Node> nodes;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double w = from_p ? atoms[i].d : -atoms[i].d;
        if (w > 0.0) {
            nodes.push_back(Node{atoms[i].pt.x, flip_y ? -atoms[i].pt.y : atoms[i].pt.y, w, i});
        }
    }
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });

    ChainBest best;
    const std::size_t n = nodes.size();
    std::vector<double> dp(n, 0.0);
    std::vector<std::ptrdiff_t> parent(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        dp[i] = nodes[i].w;
        for (std::size_t j = 0; j < i; ++j) {
            if (nodes[j].x < nodes[i].x && nodes[j].y < nodes[i].y && dp[j] + nodes[i].w > dp[i]) {
                dp[i] = dp[j] + nodes[i].w;
                parent[i] = static_cast<std::ptrdiff_t>(j);
            }
        }
        if (dp[i] > best.value) {
            best.value = dp[i];
            best.members.clear();
            std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i);
            while (k >= 0) {
                best.members.push_back(nodes[static_cast<std::size_t>(k)].idx);
                k = parent[static_cast<std::size_t>(k)];
            }
            std::reverse(best.members.begin(), best.members.end());
        }
    }
    return best;
}

} // namespace

MetricValue d_tube_chain(const Sample2D& p, const Sample2D& q) {
    const auto atoms = merged_atoms(p, q);
    MetricValue mv;
    double best = 0.0;
    ChainCert cert;
    for (bool from_p : {true, false}) {
        for (bool flip_y : {false, true}) {
            const ChainBest b = best_chain(atoms, from_p, flip_y);
            if (b.value > best) {
                best = b.value;
                cert.points.clear();
                for (std::size_t idx : b.members) cert.points.push_back(atoms[idx].pt);
                cert.increasing = !flip_y;
            }
        }
    }
    mv.value = clamp01(best);
    if (!cert.points.empty()) mv.certificate = cert;
    return mv;
}

} // namespace bdlab
