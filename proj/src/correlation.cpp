#include "bdlab/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bdlab/rng.hpp"

namespace bdlab {

namespace {

void require_uniform_weights(const Sample2D& s, const char* what) {
    if (!s.uniform_weights()) {
        throw ValidationError(std::string(what) + ": rank statistics require uniform weights");
    }
}

// 0 not collinear, +1 / -1 collinear with that slope sign,
// +2 degenerate (all points coincide or axis-aligned line).
int collinear_sign(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::size_t ref = 0;
    while (ref < n && x[ref] == x[0] && y[ref] == y[0]) ++ref;
    if (ref == n) return 2; // single atom
    const double dx = x[ref] - x[0];
    const double dy = y[ref] - y[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (dx * (y[i] - y[0]) != dy * (x[i] - x[0])) return 0;
    }
    if (dx == 0.0 || dy == 0.0) return 2; // vertical/horizontal: zero variance
    return (dx * dy > 0.0) ? 1 : -1;
}

double weighted_pearson(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& w) {
    const int col = collinear_sign(x, y);
    if (col == 2) {
        throw DegenerateError("pearson: zero variance in a coordinate");
    }
    if (col != 0) {
        return static_cast<double>(col);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += w[i] * x[i];
        my += w[i] * y[i];
    }
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += w[i] * dx * dx;
        syy += w[i] * dy * dy;
        sxy += w[i] * dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        throw DegenerateError("pearson: zero variance in a coordinate");
    }
    const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
    return std::min(1.0, std::max(-1.0, r));
}

} // namespace

CorrelationValue pearson(const Sample2D& s) {
    if (s.size() < 2) {
        throw ValidationError("pearson: need n >= 2");
    }
    std::vector<double> x(s.size()), y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        x[i] = s.point(i).x;
        y[i] = s.point(i).y;
    }
    return CorrelationValue{weighted_pearson(x, y, s.weights()), CorrKind::pearson};
}

CorrelationValue spearman(const Sample2D& s, TiePolicy tie_policy) {
    if (s.size() < 2) {
        throw ValidationError("spearman: need n >= 2");
    }
    require_uniform_weights(s, "spearman");
    std::vector<double> x(s.size()), y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        x[i] = s.point(i).x;
        y[i] = s.point(i).y;
    }
    const RankVector rx = ranks(x, tie_policy);
    const RankVector ry = ranks(y, tie_policy);
    return CorrelationValue{weighted_pearson(rx.ranks, ry.ranks, s.weights()),
                            CorrKind::spearman};
}

namespace {

// Inversions by merge sort; equal keys are not inversions.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buf,
                               std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
    std::size_t a = lo, b = mid, out = lo;
    while (a < mid && b < hi) {
        if (v[b] < v[a]) {
            inv += mid - a;
            buf[out++] = v[b++];
        } else {
            buf[out++] = v[a++];
        }
    }
    while (a < mid) buf[out++] = v[a++];
    while (b < hi) buf[out++] = v[b++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
              buf.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

std::uint64_t tie_pairs(const std::vector<double>& sorted_keys) {
    std::uint64_t pairs = 0;
    std::size_t i = 0;
    while (i < sorted_keys.size()) {
        std::size_t j = i;
        while (j + 1 < sorted_keys.size() && sorted_keys[j + 1] == sorted_keys[i]) ++j;
        const std::uint64_t run = j - i + 1;
        pairs += run * (run - 1) / 2;
        i = j + 1;
    }
    return pairs;
}

} // namespace

CorrelationValue kendall(const Sample2D& s, KendallVariant variant) {
    const std::size_t n = s.size();
    if (n < 2) {
        throw ValidationError("kendall: need n >= 2");
    }
    require_uniform_weights(s, "kendall");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Point& pa = s.point(a);
        const Point& pb = s.point(b);
        return pa.x < pb.x || (pa.x == pb.x && pa.y < pb.y);
    });

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = s.point(order[i]).x;
        ys[i] = s.point(order[i]).y;
    }

    const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::uint64_t tx = tie_pairs(xs);

    // Joint ties: runs of identical (x, y) pairs.
    std::uint64_t txy = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && xs[j + 1] == xs[i] && ys[j + 1] == ys[i]) ++j;
            const std::uint64_t run = j - i + 1;
            txy += run * (run - 1) / 2;
            i = j + 1;
        }
    }

    // With x-ties broken by ascending y, strict y-inversions are exactly the
    // discordant pairs.
    std::vector<double> yy = ys;
    std::vector<double> buf(n);
    const std::uint64_t discordant = count_inversions(yy, buf, 0, n);
    // yy is now sorted.
    const std::uint64_t ty = tie_pairs(yy);

    const std::uint64_t strict = n0 - tx - ty + txy;
    if (strict == 0) {
        throw DegenerateError("kendall: all pairs tied");
    }
    const double num = static_cast<double>(strict) - 2.0 * static_cast<double>(discordant);

    double denom;
    if (variant == KendallVariant::tau_a) {
        denom = static_cast<double>(n0);
    } else {
        const double dx = static_cast<double>(n0 - tx);
        const double dy = static_cast<double>(n0 - ty);
        denom = std::sqrt(dx) * std::sqrt(dy);
    }
    const double tau = num / denom;
    return CorrelationValue{std::min(1.0, std::max(-1.0, tau)), CorrKind::kendall};
}

double subset_count(int n) {
    if (n < 0) throw ValidationError("subset_count: n must be nonnegative");
    return std::exp2(n) - 1.0 - n - 0.5 * n * (n - 1);
}

namespace {

// Pearson over the index subset; nullopt when the subset is degenerate.
std::optional<double> subset_pearson(const Sample2D& s, const std::vector<std::size_t>& idx) {
    std::vector<double> x, y, w;
    x.reserve(idx.size());
    y.reserve(idx.size());
    for (std::size_t i : idx) {
        x.push_back(s.point(i).x);
        y.push_back(s.point(i).y);
    }
    w.assign(idx.size(), 1.0 / static_cast<double>(idx.size()));
    try {
        return weighted_pearson(x, y, w);
    } catch (const DegenerateError&) {
        return std::nullopt;
    }
}

} // namespace

CorrelationValue subset_average_corr(const Sample2D& s, std::optional<MonteCarloSpec> mc) {
    const std::size_t n = s.size();
    if (n < 3) {
        throw ValidationError("subset_average_corr: need n >= 3");
    }
    require_uniform_weights(s, "subset_average_corr");

    double total = 0.0;
    std::uint64_t used = 0;

    if (!mc.has_value()) {
        if (n > 20) {
            throw ValidationError("subset_average_corr: exact mode requires n <= 20");
        }
        std::vector<std::size_t> idx;
        for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
            if (std::popcount(mask) < 3) continue;
            idx.clear();
            for (std::size_t i = 0; i < n; ++i) {
                if (mask >> i & 1ULL) idx.push_back(i);
            }
            if (auto r = subset_pearson(s, idx)) {
                total += *r;
                ++used;
            }
        }
    } else {
        Rng rng(mc->seed);
        // Cumulative profile over sizes 3..n proportional to C(n, size).
        std::vector<double> cum;
        double log_cnk = 0.0; // log C(n, k), start at k = 0
        double acc = 0.0;
        std::vector<double> size_weight(n + 1, 0.0);
        for (std::size_t k = 1; k <= n; ++k) {
            log_cnk += std::log(static_cast<double>(n - k + 1)) - std::log(static_cast<double>(k));
            if (k >= 3) size_weight[k] = log_cnk;
        }
        const double mx = *std::max_element(size_weight.begin() + 3, size_weight.end());
        for (std::size_t k = 3; k <= n; ++k) {
            acc += std::exp(size_weight[k] - mx);
            cum.push_back(acc);
        }
        std::vector<std::size_t> pool(n);
        for (std::uint64_t t = 0; t < mc->samples; ++t) {
            const double u = rng.uniform() * acc;
            const std::size_t k = 3 + static_cast<std::size_t>(
                std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            const std::size_t sz = std::min(k, n);
            std::iota(pool.begin(), pool.end(), 0);
            for (std::size_t i = 0; i < sz; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.integer(n - i));
                std::swap(pool[i], pool[j]);
            }
            std::vector<std::size_t> idx(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(sz));
            if (auto r = subset_pearson(s, idx)) {
                total += *r;
                ++used;
            }
        }
    }

    if (used == 0) {
        throw DegenerateError("subset_average_corr: no nondegenerate subset");
    }
    return CorrelationValue{total / static_cast<double>(used), CorrKind::subset_average};
}

} // namespace bdlab
