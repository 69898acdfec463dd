#include "bdlab/chains.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "bdlab/errors.hpp"

namespace bdlab {

namespace {

struct MergedPoint {
    Point pt;
    double w;
    std::vector<std::size_t> members; // original indices carried jointly
};

std::vector<MergedPoint> merge_duplicates(const Sample2D& s) {
    std::map<std::pair<double, double>, std::size_t> slot;
    std::vector<MergedPoint> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto key = std::make_pair(s.point(i).x, s.point(i).y);
        auto it = slot.find(key);
        if (it == slot.end()) {
            slot.emplace(key, out.size());
            out.push_back(MergedPoint{s.point(i), s.weight(i), {i}});
        } else {
            out[it->second].w += s.weight(i);
            out[it->second].members.push_back(i);
        }
    }
    return out;
}

struct ChainOutcome {
    double value = 0.0;
    std::vector<std::size_t> witness;
};

bool all_equal_weights(const std::vector<MergedPoint>& pts) {
    for (const auto& p : pts) {
        if (p.w != pts[0].w) return false;
    }
    return true;
}

// Longest chain by patience sorting on y (values assumed pre-sorted by x
// with the tie convention baked in). strict: y strictly increasing.
ChainOutcome patience_chain(const std::vector<MergedPoint>& pts,
                            const std::vector<std::size_t>& order, bool strict) {
    std::vector<double> tails;
    std::vector<std::size_t> tail_idx;     // index (into order) ending each pile
    std::vector<std::ptrdiff_t> parent(order.size(), -1);
    std::vector<std::size_t> self_pile(order.size(), 0);

    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const double y = pts[order[oi]].pt.y;
        std::size_t pos;
        if (strict) {
            pos = static_cast<std::size_t>(
                std::lower_bound(tails.begin(), tails.end(), y) - tails.begin());
        } else {
            pos = static_cast<std::size_t>(
                std::upper_bound(tails.begin(), tails.end(), y) - tails.begin());
        }
        if (pos == tails.size()) {
            tails.push_back(y);
            tail_idx.push_back(oi);
        } else {
            tails[pos] = y;
            tail_idx[pos] = oi;
        }
        parent[oi] = (pos > 0) ? static_cast<std::ptrdiff_t>(tail_idx[pos - 1]) : -1;
        self_pile[oi] = pos;
    }

    ChainOutcome out;
    if (tails.empty()) return out;
    std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(tail_idx.back());
    std::vector<std::size_t> chain;
    while (cur >= 0) {
        chain.push_back(order[static_cast<std::size_t>(cur)]);
        cur = parent[static_cast<std::size_t>(cur)];
    }
    std::reverse(chain.begin(), chain.end());
    for (std::size_t mi : chain) {
        out.value += pts[mi].w;
        for (std::size_t orig : pts[mi].members) out.witness.push_back(orig);
    }
    return out;
}

// Max-weight chain, O(n^2). strict: y strictly increasing; weak: y
// nondecreasing. x is strictly increasing either way.
ChainOutcome weighted_chain(const std::vector<MergedPoint>& pts, bool weak) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pts[a].pt.x < pts[b].pt.x ||
               (pts[a].pt.x == pts[b].pt.x && pts[a].pt.y < pts[b].pt.y);
    });

    std::vector<double> dp(n, 0.0);
    std::vector<std::ptrdiff_t> par(n, -1);
    double best = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pi = pts[order[i]];
        dp[i] = pi.w;
        for (std::size_t j = 0; j < i; ++j) {
            const auto& pj = pts[order[j]];
            const bool ok_y = weak ? (pj.pt.y <= pi.pt.y) : (pj.pt.y < pi.pt.y);
            if (pj.pt.x < pi.pt.x && ok_y && dp[j] + pi.w > dp[i]) {
                dp[i] = dp[j] + pi.w;
                par[i] = static_cast<std::ptrdiff_t>(j);
            }
        }
        if (dp[i] > best) {
            best = dp[i];
            best_i = i;
        }
    }

    ChainOutcome out;
    out.value = best;
    std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(best_i);
    std::vector<std::size_t> chain;
    while (cur >= 0) {
        chain.push_back(order[static_cast<std::size_t>(cur)]);
        cur = par[static_cast<std::size_t>(cur)];
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        for (std::size_t orig : pts[*it].members) out.witness.push_back(orig);
    }
    return out;
}

ChainOutcome best_monotone_chain(std::vector<MergedPoint> pts, bool increasing, bool weak) {
    if (!increasing) {
        for (auto& p : pts) p.pt.y = -p.pt.y;
    }

    // Fast path: uniform merged weights and all coordinates distinct.
    bool distinct = true;
    {
        std::set<double> xs, ys;
        for (const auto& p : pts) {
            if (!xs.insert(p.pt.x).second || !ys.insert(p.pt.y).second) {
                distinct = false;
                break;
            }
        }
    }
    if (distinct && all_equal_weights(pts)) {
        std::vector<std::size_t> order(pts.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return pts[a].pt.x < pts[b].pt.x;
        });
        return patience_chain(pts, order, /*strict=*/!weak);
    }
    return weighted_chain(pts, weak);
}

} // namespace

DeltaResult delta_chain(const Sample2D& s, bool weak_monotone) {
    const auto pts = merge_duplicates(s);
    DeltaResult r;
    ChainOutcome up = best_monotone_chain(pts, true, weak_monotone);
    ChainOutcome down = best_monotone_chain(pts, false, weak_monotone);
    r.delta_plus = up.value;
    r.delta_minus = down.value;
    r.witness_plus = std::move(up.witness);
    r.witness_minus = std::move(down.witness);
    return r;
}

DeltaResult delta_line(const Sample2D& s) {
    const auto pts = merge_duplicates(s);
    const std::size_t m = pts.size();

    DeltaResult r;
    // Degenerate single-point lines: the heaviest atom belongs to both classes.
    std::size_t heaviest = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (pts[i].w > pts[heaviest].w) heaviest = i;
    }
    r.delta_plus = r.delta_minus = pts[heaviest].w;
    r.witness_plus = r.witness_minus = pts[heaviest].members;

    auto consider = [&](double mass, const std::vector<std::size_t>& line, int cls) {
        // cls: +1 nonnegative slope, -1 nonpositive, 0 both (axis-parallel).
        std::vector<std::size_t> members;
        for (std::size_t mi : line) {
            for (std::size_t orig : pts[mi].members) members.push_back(orig);
        }
        if (cls >= 0 && mass > r.delta_plus) {
            r.delta_plus = mass;
            r.witness_plus = members;
        }
        if (cls <= 0 && mass > r.delta_minus) {
            r.delta_minus = mass;
            r.witness_minus = members;
        }
    };

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double dx = pts[j].pt.x - pts[i].pt.x;
            const double dy = pts[j].pt.y - pts[i].pt.y;
            std::vector<std::size_t> line;
            double mass = 0.0;
            bool i_j_minimal = true;
            for (std::size_t k = 0; k < m; ++k) {
                const double cross =
                    dx * (pts[k].pt.y - pts[i].pt.y) - dy * (pts[k].pt.x - pts[i].pt.x);
                if (cross == 0.0) {
                    if (k < j && k != i) {
                        i_j_minimal = false; // this line was handled at a smaller pair
                        break;
                    }
                    line.push_back(k);
                    mass += pts[k].w;
                }
            }
            if (!i_j_minimal) continue;
            const double sl = dx * dy;
            consider(mass, line, sl > 0.0 ? +1 : (sl < 0.0 ? -1 : 0));
        }
    }
    return r;
}

double ChainBound::exact() const { return std::exp(log_exact); }
double ChainBound::bound() const { return std::exp(log_bound); }

ChainBound chain_probability_bound(long n, long k) {
    if (k < 1 || n < 1 || k > n) {
        throw ValidationError("chain_probability_bound: need 1 <= k <= n");
    }
    const double lg_k1 = std::lgamma(static_cast<double>(k) + 1.0);
    ChainBound b;
    b.log_exact = std::lgamma(static_cast<double>(n) + 1.0) -
                  std::lgamma(static_cast<double>(n - k) + 1.0) - 2.0 * lg_k1;
    b.log_bound = static_cast<double>(k) * std::log(static_cast<double>(n)) - 2.0 * lg_k1;
    return b;
}

} // namespace bdlab
