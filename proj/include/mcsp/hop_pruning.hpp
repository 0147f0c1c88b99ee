#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "mcsp/skyline.hpp"

namespace mcsp {

/// Axis-aligned bounding box over the concatenated skyline paths of one hop.
/// The infimum is exact; the supremum is only tight for two criteria or when
/// the box was measured from an actual path set.
struct NCube {
    CostVector inf;
    CostVector sup;
    VertexId hop = 0;
    bool sup_fixed = false;
};

/// Two-criteria specialization: both corners are real concatenated paths.
struct HopRectangle {
    PathSummary top_left;      // minimum weight, maximum cost
    PathSummary bottom_right;  // maximum weight, minimum cost
    VertexId hop = 0;
};

inline HopRectangle hop_rectangle(SetView left, SetView right, VertexId hop) {
    require(!left.empty() && !right.empty(), ErrorCode::EmptyHop, "hop rectangle of empty factor");
    require(left[0].cost.size() == 2, ErrorCode::InvalidValue, "hop rectangle requires two criteria");
    HopRectangle r;
    r.hop = hop;
    r.top_left = concat_pair(left.front(), right.front(), hop, 0, 0);
    r.bottom_right = concat_pair(left.back(), right.back(), hop, static_cast<int32_t>(left.size()) - 1,
                                 static_cast<int32_t>(right.size()) - 1);
    return r;
}

/// Rectangle of a plain skyline set (hop with an identity factor).
inline HopRectangle rectangle_of_set(SetView s, VertexId hop) {
    require(!s.empty(), ErrorCode::EmptyHop, "hop rectangle of empty set");
    HopRectangle r;
    r.hop = hop;
    r.top_left = s.front();
    r.bottom_right = s.back();
    return r;
}

/// Keeps the hops whose rectangle intersects the query rectangle built from
/// the globally best corners, then drops any hop whose whole rectangle is
/// dominated by another hop's fixed endpoint. Input order is preserved.
inline std::vector<VertexId> prune_hops_rectangle(const std::vector<HopRectangle>& rects) {
    if (rects.empty()) return {};
    CostVector tl = rects[0].top_left.cost;
    CostVector br = rects[0].bottom_right.cost;
    for (const auto& r : rects) {
        if (r.top_left.cost[0] < tl[0]) tl = r.top_left.cost;
        if (r.bottom_right.cost[1] < br[1]) br = r.bottom_right.cost;
    }
    std::vector<VertexId> kept;
    for (size_t h = 0; h < rects.size(); ++h) {
        const auto& r = rects[h];
        // weight spans [tl.w, br.w], cost spans [br.c, tl.c]
        bool intersects = r.top_left.cost[0] <= br[0] && r.bottom_right.cost[0] >= tl[0] &&
                          r.bottom_right.cost[1] <= tl[1] && r.top_left.cost[1] >= br[1];
        if (!intersects) continue;
        bool covered = false;
        for (size_t g = 0; g < rects.size() && !covered; ++g) {
            if (g == h) continue;
            for (const PathSummary* e : {&rects[g].top_left, &rects[g].bottom_right}) {
                if (e->cost[0] <= r.top_left.cost[0] && e->cost[1] <= r.bottom_right.cost[1]) {
                    // identical degenerate rectangles survive by lowest hop id
                    bool same_point = r.top_left.cost == r.bottom_right.cost &&
                                      r.top_left.cost == e->cost;
                    if (!same_point || rects[g].hop < r.hop) {
                        covered = true;
                        break;
                    }
                }
            }
        }
        if (!covered) kept.push_back(r.hop);
    }
    return kept;
}

inline NCube ncube_of_set(SetView s, VertexId hop) {
    require(!s.empty(), ErrorCode::EmptyHop, "cube of empty set");
    NCube c;
    c.hop = hop;
    c.inf = s[0].cost;
    c.sup = s[0].cost;
    for (const auto& p : s) {
        c.inf = component_min(c.inf, p.cost);
        c.sup = component_max(c.sup, p.cost);
    }
    c.sup_fixed = true;
    return c;
}

/// Bounding cube of a concatenation without computing it: per-dimension sums
/// of the factor extremes. Exact infimum; loose supremum beyond two criteria.
inline NCube hop_ncube(SetView left, SetView right, VertexId hop) {
    require(!left.empty() && !right.empty(), ErrorCode::EmptyHop, "cube of empty factor");
    NCube a = ncube_of_set(left, hop);
    NCube b = ncube_of_set(right, hop);
    NCube c;
    c.hop = hop;
    c.inf = checked_add(a.inf, b.inf);
    c.sup = checked_add(a.sup, b.sup);
    c.sup_fixed = left[0].cost.size() == 2;
    return c;
}

/// Every path in b is dominated by a path in a.
inline bool ncube_dominates(const NCube& a, const NCube& b) {
    require(a.inf.size() == b.inf.size(), ErrorCode::InvalidValue, "cube dominance on mismatched n");
    return dominates(a.sup, b.inf);
}

/// Cube of the concatenation of two cubes' path spaces.
inline NCube ncube_add(const NCube& a, const NCube& b) {
    NCube c;
    c.hop = a.hop;
    c.inf = checked_add(a.inf, b.inf);
    c.sup = checked_add(a.sup, b.sup);
    c.sup_fixed = a.sup_fixed && b.sup_fixed;
    return c;
}

/// Componentwise hull of several cubes.
inline NCube ncube_envelope(const std::vector<NCube>& cubes) {
    require(!cubes.empty(), ErrorCode::EmptyHop, "envelope of no cubes");
    NCube c = cubes[0];
    for (size_t i = 1; i < cubes.size(); ++i) {
        c.inf = component_min(c.inf, cubes[i].inf);
        c.sup = component_max(c.sup, cubes[i].sup);
        c.sup_fixed = c.sup_fixed && cubes[i].sup_fixed;
    }
    return c;
}

/// Concatenation priority: cubes owning more strictly-minimal infimum
/// dimensions come first; ties fall back to supremum wins, then infimum
/// values in decreasing dimension order, then hop id.
inline std::vector<size_t> ncube_priority(const std::vector<NCube>& cubes) {
    const size_t k = cubes.size();
    std::vector<int> inf_wins(k, 0), sup_wins(k, 0);
    if (k > 0) {
        const int n = cubes[0].inf.size();
        for (int d = 0; d < n; ++d) {
            size_t inf_owner = 0, sup_owner = 0;
            int inf_ties = 0, sup_ties = 0;
            for (size_t i = 0; i < k; ++i) {
                if (cubes[i].inf[d] < cubes[inf_owner].inf[d]) inf_owner = i, inf_ties = 0;
                else if (i != inf_owner && cubes[i].inf[d] == cubes[inf_owner].inf[d]) ++inf_ties;
                if (cubes[i].sup[d] < cubes[sup_owner].sup[d]) sup_owner = i, sup_ties = 0;
                else if (i != sup_owner && cubes[i].sup[d] == cubes[sup_owner].sup[d]) ++sup_ties;
            }
            if (inf_ties == 0) inf_wins[inf_owner]++;
            if (sup_ties == 0) sup_wins[sup_owner]++;
        }
    }
    std::vector<size_t> order(k);
    for (size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (inf_wins[a] != inf_wins[b]) return inf_wins[a] > inf_wins[b];
        if (sup_wins[a] != sup_wins[b]) return sup_wins[a] > sup_wins[b];
        for (int d = cubes[a].inf.size() - 1; d >= 0; --d)
            if (cubes[a].inf[d] != cubes[b].inf[d]) return cubes[a].inf[d] < cubes[b].inf[d];
        return cubes[a].hop < cubes[b].hop;
    });
    return order;
}

inline std::vector<NCube> ncube_order(const std::vector<NCube>& cubes) {
    std::vector<NCube> out;
    out.reserve(cubes.size());
    for (size_t i : ncube_priority(cubes)) out.push_back(cubes[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Multi-hop concatenation.
// ---------------------------------------------------------------------------

/// One hop of a multi-hop concatenation. A null right factor means the left
/// entries are themselves the candidates (a label stored directly at the hop).
struct HopInput {
    VertexId hop = 0;
    SetView left;
    SetView right;
    bool identity = false;  // candidates are the left entries themselves
};

namespace detail {

inline SkylineSet identity_concat(SetView s, VertexId hop, ConcatStats* stats) {
    SkylineSet out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i)
        out.push_back(PathSummary{s[i].cost, Provenance{Via::Label, static_cast<int32_t>(hop),
                                                        static_cast<int32_t>(i), -1}});
    if (stats) stats->pairs_generated += s.size();
    return out;
}

inline SkylineSet hop_concat(const HopInput& h, const ConcatConfig& cfg, ConcatStats* stats) {
    if (h.identity) return identity_concat(h.left, h.hop, stats);
    return concat_hop(h.left, h.right, h.hop, cfg, stats);
}

inline NCube hop_cube(const HopInput& h) {
    if (h.identity) return ncube_of_set(h.left, h.hop);
    return hop_ncube(h.left, h.right, h.hop);
}

inline HopRectangle hop_rect(const HopInput& h) {
    if (h.identity) return rectangle_of_set(h.left, h.hop);
    return hop_rectangle(h.left, h.right, h.hop);
}

inline CostVector bounding_sup(SetView s) {
    CostVector sup = s[0].cost;
    for (const auto& p : s) sup = component_max(sup, p.cost);
    return sup;
}

/// Pops every candidate pair in canonical cost order; visit returns false to
/// stop. Generation is lazy, so stopping early leaves the rest unexplored.
template <typename Visit>
void enumerate_pairs_ascending(SetView left, SetView right, ConcatStats* stats, Visit&& visit) {
    const int32_t m = static_cast<int32_t>(left.size());
    const int32_t n = static_cast<int32_t>(right.size());
    if (m == 0 || n == 0) return;
    std::vector<uint8_t> visited(static_cast<size_t>(m) * n, 0);
    std::vector<FrontierEntry> heap;
    auto generate = [&](int32_t i, int32_t j) {
        if (i >= m || j >= n) return;
        uint8_t& flag = visited[static_cast<size_t>(i) * n + j];
        if (flag) return;
        flag = 1;
        if (stats) stats->pairs_generated++;
        heap.push_back({checked_add(left[i].cost, right[j].cost), i, j});
        std::push_heap(heap.begin(), heap.end(), FrontierOrder{});
    };
    generate(0, 0);
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), FrontierOrder{});
        FrontierEntry e = heap.back();
        heap.pop_back();
        if (!visit(e.cost, e.i, e.j)) return;
        generate(e.i + 1, e.j);
        generate(e.i, e.j + 1);
    }
}

}  // namespace detail

/// Skyline over the union of all hops' concatenations. Hops are bounded by
/// cubes, processed in priority order, and skipped wholesale once the
/// supremum of the accepted results dominates their infimum.
inline SkylineSet multi_hop_skyline(const std::vector<HopInput>& hops,
                                    const ConcatConfig& cfg = default_concat_config(),
                                    ConcatStats* stats = nullptr) {
    std::vector<HopInput> active;
    for (const auto& h : hops)
        if (!h.left.empty() && (h.identity || !h.right.empty())) active.push_back(h);
    if (active.empty()) return {};
    const int n = active[0].left.front().cost.size();

    if (n == 2 && cfg.rectangle_pruning && active.size() > 1) {
        std::vector<HopRectangle> rects;
        rects.reserve(active.size());
        for (const auto& h : active) rects.push_back(detail::hop_rect(h));
        std::vector<VertexId> kept = prune_hops_rectangle(rects);
        std::vector<HopInput> filtered;
        for (const auto& h : active)
            if (std::find(kept.begin(), kept.end(), h.hop) != kept.end()) filtered.push_back(h);
        if (stats) stats->hops_skipped += active.size() - filtered.size();
        active = std::move(filtered);
    }

    std::vector<NCube> cubes;
    cubes.reserve(active.size());
    for (const auto& h : active) cubes.push_back(detail::hop_cube(h));
    std::vector<size_t> order;
    if (cfg.cube_pruning) {
        order = ncube_priority(cubes);
    } else {
        order.resize(active.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    }

    SkylineSet result;
    CostVector running_sup;
    for (size_t oi : order) {
        if (cfg.cube_pruning && !result.empty() && dominates(running_sup, cubes[oi].inf)) {
            if (stats) stats->hops_skipped++;
            continue;
        }
        if (stats) stats->hops_concatenated++;
        SkylineSet part = detail::hop_concat(active[oi], cfg, stats);
        result = skyline_merge(result, part);
        if (!result.empty()) running_sup = detail::bounding_sup(result);
    }
    return result;
}

/// Per-hop candidate trace for diagnostics; complete only when constraint
/// pruning is disabled.
struct HopTrace {
    VertexId hop;
    std::vector<CostVector> candidates;
};

/// Minimum-weight concatenated path meeting every cost bound, or nothing.
/// Ties on weight resolve to the lexicographically smallest cost vector so
/// that every engine and the oracle agree on the returned path.
inline std::optional<PathSummary> best_under_constraints(
    const std::vector<HopInput>& hops, const std::vector<Value>& constraints,
    const ConcatConfig& cfg = default_concat_config(), ConcatStats* stats = nullptr,
    std::vector<HopTrace>* trace = nullptr) {
    std::vector<HopInput> active;
    for (const auto& h : hops)
        if (!h.left.empty() && (h.identity || !h.right.empty())) active.push_back(h);
    if (active.empty()) return std::nullopt;
    const int n = active[0].left.front().cost.size();
    require(static_cast<int>(constraints.size()) == n - 1, ErrorCode::InvalidValue,
            "constraint vector must cover the cost criteria");

    auto feasible = [&](const CostVector& v) {
        for (int i = 1; i < n; ++i)
            if (v[i] > constraints[static_cast<size_t>(i - 1)]) return false;
        return true;
    };

    std::optional<PathSummary> best;
    auto offer = [&](const CostVector& v, VertexId hop, int32_t i, int32_t j) {
        if (!best || canonical_less(v, best->cost))
            best = PathSummary{v, Provenance{Via::Label, static_cast<int32_t>(hop), i, j}};
    };

    if (!cfg.constraint_pruning) {
        // reference mode: every pair of every hop, no termination
        for (const auto& h : active) {
            HopTrace* t = nullptr;
            if (trace) {
                trace->push_back(HopTrace{h.hop, {}});
                t = &trace->back();
            }
            for (size_t i = 0; i < h.left.size(); ++i) {
                if (h.identity) {
                    const CostVector& v = h.left[i].cost;
                    if (stats) stats->pairs_generated++;
                    if (t) t->candidates.push_back(v);
                    if (feasible(v)) offer(v, h.hop, static_cast<int32_t>(i), -1);
                    continue;
                }
                for (size_t j = 0; j < h.right.size(); ++j) {
                    CostVector v = checked_add(h.left[i].cost, h.right[j].cost);
                    if (stats) stats->pairs_generated++;
                    if (t) t->candidates.push_back(v);
                    if (feasible(v)) offer(v, h.hop, static_cast<int32_t>(i), static_cast<int32_t>(j));
                }
            }
        }
        return best;
    }

    // entries violating a constraint on their own can never contribute
    auto prefilter = [&](SetView s) {
        std::pair<SkylineSet, std::vector<int32_t>> out;
        for (size_t i = 0; i < s.size(); ++i) {
            if (feasible(s[i].cost)) {
                out.first.push_back(s[i]);
                out.second.push_back(static_cast<int32_t>(i));
            }
        }
        return out;
    };

    struct ConstrainedHop {
        VertexId hop;
        SkylineSet left, right;
        std::vector<int32_t> left_idx, right_idx;
        bool identity;
        NCube cube;
    };
    std::vector<ConstrainedHop> chops;
    for (const auto& h : active) {
        ConstrainedHop ch;
        ch.hop = h.hop;
        ch.identity = h.identity;
        std::tie(ch.left, ch.left_idx) = prefilter(h.left);
        if (!h.identity) std::tie(ch.right, ch.right_idx) = prefilter(h.right);
        if (ch.left.empty() || (!ch.identity && ch.right.empty())) {
            if (stats) stats->hops_skipped++;
            continue;
        }
        ch.cube = ch.identity ? ncube_of_set(ch.left, ch.hop) : hop_ncube(ch.left, ch.right, ch.hop);
        // a cube whose infimum already violates a bound holds no feasible path
        bool infeasible_cube = false;
        for (int i = 1; i < n; ++i)
            if (ch.cube.inf[i] > constraints[static_cast<size_t>(i - 1)]) infeasible_cube = true;
        if (infeasible_cube) {
            if (stats) stats->hops_skipped++;
            continue;
        }
        for (int i = 1; i < n; ++i)
            if (ch.cube.sup[i] > constraints[static_cast<size_t>(i - 1)]) {
                ch.cube.sup[i] = constraints[static_cast<size_t>(i - 1)];
                ch.cube.sup_fixed = false;
            }
        chops.push_back(std::move(ch));
    }
    std::sort(chops.begin(), chops.end(), [](const ConstrainedHop& a, const ConstrainedHop& b) {
        if (a.cube.inf != b.cube.inf) return canonical_less(a.cube.inf, b.cube.inf);
        return a.hop < b.hop;
    });

    for (const auto& ch : chops) {
        if (best && ch.cube.inf.weight() > best->cost.weight()) {
            if (stats) stats->hops_skipped++;
            continue;
        }
        if (stats) stats->hops_concatenated++;
        HopTrace* t = nullptr;
        if (trace) {
            trace->push_back(HopTrace{ch.hop, {}});
            t = &trace->back();
        }
        if (ch.identity) {
            // prefiltered entries are all feasible; the first is minimal
            const CostVector& v = ch.left[0].cost;
            if (stats) stats->pairs_generated++;
            if (t) t->candidates.push_back(v);
            offer(v, ch.hop, ch.left_idx[0], -1);
            continue;
        }
        detail::enumerate_pairs_ascending(
            ch.left, ch.right, stats, [&](const CostVector& v, int32_t i, int32_t j) {
                if (t) t->candidates.push_back(v);
                if (best && v.weight() > best->cost.weight()) return false;
                if (feasible(v)) {
                    offer(v, ch.hop, ch.left_idx[static_cast<size_t>(i)],
                          ch.right_idx[static_cast<size_t>(j)]);
                    return false;  // later pairs in this hop only rank worse
                }
                return true;
            });
    }
    return best;
}

}  // namespace mcsp
