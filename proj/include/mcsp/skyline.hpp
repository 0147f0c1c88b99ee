#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "mcsp/cost_vector.hpp"
#include "mcsp/errors.hpp"

namespace mcsp {

using VertexId = uint32_t;
constexpr int32_t no_vertex = -1;

/// How a path summary was produced; enough to unpack the real vertex
/// sequence later without re-searching the graph.
enum class Via : uint8_t {
    None,      // oracle result or zero path, no retrieval support
    Edge,      // one original edge (endpoints from context)
    Shortcut,  // bypasses contracted vertex `via`; left/right index its cut sets
    Label,     // concatenation through hop `via`; right = -1 means left factor only
    Clique,    // boundary all-pair entry; `via` indexes a stored vertex path
};

struct Provenance {
    Via kind = Via::None;
    int32_t via = no_vertex;
    int32_t left = -1;
    int32_t right = -1;
};

struct PathSummary {
    CostVector cost;
    Provenance via;
};

/// Weight-ascending, mutually non-dominated, duplicate-free path set.
using SkylineSet = std::vector<PathSummary>;
using SetView = std::span<const PathSummary>;

inline bool canonical_less(const PathSummary& a, const PathSummary& b) {
    return canonical_less(a.cost, b.cost);
}

inline std::vector<CostVector> costs_of(SetView s) {
    std::vector<CostVector> out;
    out.reserve(s.size());
    for (const auto& p : s) out.push_back(p.cost);
    return out;
}

/// True iff `s` satisfies the SkylinePathSet invariants.
inline bool is_canonical(SetView s) {
    for (size_t i = 0; i < s.size(); ++i) {
        if (i + 1 < s.size() && !canonical_less(s[i].cost, s[i + 1].cost)) return false;
        for (size_t j = 0; j < s.size(); ++j)
            if (i != j && (dominates(s[j].cost, s[i].cost) || s[j].cost == s[i].cost)) return false;
    }
    return true;
}

/// Exact non-dominated, deduplicated subset in canonical order.
inline SkylineSet skyline_of(std::vector<PathSummary> paths) {
    std::stable_sort(paths.begin(), paths.end(),
                     [](const PathSummary& a, const PathSummary& b) { return canonical_less(a, b); });
    SkylineSet out;
    for (auto& p : paths) {
        bool keep = true;
        for (const auto& q : out) {
            // any dominator or duplicate sorts before p
            if (q.cost == p.cost || dominates(q.cost, p.cost)) {
                keep = false;
                break;
            }
        }
        if (keep) out.push_back(std::move(p));
    }
    return out;
}

/// Skyline of the union of two canonical sets.
/// With two criteria this is a single merge pass over the weight-sorted lists.
inline SkylineSet skyline_merge(const SkylineSet& a, const SkylineSet& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    SkylineSet out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    const int n = a[0].cost.size();
    Value best_cost = INT32_MAX;  // 2D: min cost seen so far
    while (i < a.size() || j < b.size()) {
        const PathSummary* next;
        if (j >= b.size() || (i < a.size() && !canonical_less(b[j], a[i])))
            next = &a[i++];
        else
            next = &b[j++];
        if (!out.empty() && out.back().cost == next->cost) continue;
        if (n == 2) {
            if (next->cost[1] < best_cost) {
                best_cost = next->cost[1];
                out.push_back(*next);
            }
        } else {
            bool keep = true;
            for (const auto& q : out)
                if (dominates(q.cost, next->cost)) {
                    keep = false;
                    break;
                }
            if (keep) out.push_back(*next);
        }
    }
    return out;
}

/// Component-wise sum of two summaries travelling through `hop`.
inline PathSummary concat_pair(const PathSummary& p, const PathSummary& q, VertexId hop,
                               int32_t left_index = -1, int32_t right_index = -1) {
    return PathSummary{checked_add(p.cost, q.cost),
                       Provenance{Via::Label, static_cast<int32_t>(hop), left_index, right_index}};
}

// ---------------------------------------------------------------------------
// Pruning configuration and instrumentation shared by concatenation layers.
// ---------------------------------------------------------------------------

struct ConcatConfig {
    bool rectangle_pruning = true;   // 2D hop rectangles
    bool cube_pruning = true;        // n-cube ordering and skipping
    bool constraint_pruning = true;  // constraint clamp / early termination
    bool rank_threshold = true;      // rank-based early rejection
    bool validate_by_intersection = false;  // cross-check strategy for nD validation
};

inline const ConcatConfig& default_concat_config() {
    static const ConcatConfig cfg{};
    return cfg;
}

struct ConcatStats {
    uint64_t pairs_generated = 0;   // candidate concatenations computed
    uint64_t dominance_checks = 0;  // pairwise dominance comparisons during validation
    uint64_t early_rejects = 0;     // rank-threshold rejections
    uint64_t hops_skipped = 0;      // hops skipped by rectangle/cube/constraint pruning
    uint64_t hops_concatenated = 0;

    void reset() { *this = ConcatStats{}; }
};

/// Rejected 2D candidate and the accepted entry that witnessed the rejection
/// (factor indices); used to check the cross-region dominance property.
struct RejectionWitness {
    int32_t cand_left, cand_right;
    int32_t wit_left, wit_right;
};

// ---------------------------------------------------------------------------
// Single-hop concatenation, 2D.
// ---------------------------------------------------------------------------

namespace detail {

struct FrontierEntry {
    CostVector cost;
    int32_t i, j;
};

struct FrontierOrder {
    // max-heap adapter: reversed canonical order, ties by indices for determinism
    bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
        if (a.cost != b.cost) return canonical_less(b.cost, a.cost);
        if (a.i != b.i) return a.i > b.i;
        return a.j > b.j;
    }
};

/// Property 1: a single path concatenated with a skyline set is already a
/// skyline set, in the same canonical order.
inline SkylineSet map_single(SetView left, SetView right, VertexId hop,
                             ConcatStats* stats) {
    SkylineSet out;
    if (left.size() == 1) {
        out.reserve(right.size());
        for (size_t j = 0; j < right.size(); ++j)
            out.push_back(concat_pair(left[0], right[j], hop, 0, static_cast<int32_t>(j)));
    } else {
        out.reserve(left.size());
        for (size_t i = 0; i < left.size(); ++i)
            out.push_back(concat_pair(left[i], right[0], hop, static_cast<int32_t>(i), 0));
    }
    if (stats) stats->pairs_generated += out.size();
    return out;
}

}  // namespace detail

/// Skyline of {p + q : p in left, q in right} for two criteria.
/// Candidates are generated lazily in weight order from a priority queue
/// seeded with the first pair; a popped candidate is accepted iff the last
/// accepted entry does not dominate it, and successors are generated
/// recursively, skipping cells that are already generated or already
/// dominated by the current tail of the result.
inline SkylineSet concat_hop_2d(SetView left, SetView right, VertexId hop,
                                ConcatStats* stats = nullptr,
                                std::vector<RejectionWitness>* witnesses = nullptr) {
    if (left.empty() || right.empty()) return {};
    require(left[0].cost.size() == 2 && right[0].cost.size() == 2, ErrorCode::InvalidValue,
            "concat_hop_2d requires two criteria");
    if (left.size() == 1 || right.size() == 1) return detail::map_single(left, right, hop, stats);

    const int32_t m = static_cast<int32_t>(left.size());
    const int32_t n = static_cast<int32_t>(right.size());
    std::vector<uint8_t> visited(static_cast<size_t>(m) * n, 0);
    auto seen = [&](int32_t i, int32_t j) -> uint8_t& {
        return visited[static_cast<size_t>(i) * n + j];
    };

    std::vector<detail::FrontierEntry> heap;
    SkylineSet out;
    int32_t last_i = 0, last_j = 0;  // indices of the last accepted entry
    Value cost_tail;                 // its cost, the current minimum

    auto record_reject = [&](int32_t i, int32_t j) {
        if (witnesses) witnesses->push_back({i, j, last_i, last_j});
    };

    // generates (i,j); queues it unless dominated, in which case its own
    // successors are explored immediately
    auto lazy_insert = [&](auto&& self, int32_t i, int32_t j) -> void {
        if (i >= m || j >= n || seen(i, j)) return;
        seen(i, j) = 1;
        CostVector c = checked_add(left[i].cost, right[j].cost);
        if (stats) stats->pairs_generated++;
        if (c[1] >= cost_tail) {
            record_reject(i, j);
            self(self, i + 1, j);
            self(self, i, j + 1);
            return;
        }
        heap.push_back({c, i, j});
        std::push_heap(heap.begin(), heap.end(), detail::FrontierOrder{});
    };

    // the first pair is always a skyline path
    seen(0, 0) = 1;
    CostVector c00 = checked_add(left[0].cost, right[0].cost);
    if (stats) stats->pairs_generated++;
    out.push_back(PathSummary{c00, Provenance{Via::Label, static_cast<int32_t>(hop), 0, 0}});
    cost_tail = c00[1];
    lazy_insert(lazy_insert, 1, 0);
    lazy_insert(lazy_insert, 0, 1);

    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), detail::FrontierOrder{});
        detail::FrontierEntry e = heap.back();
        heap.pop_back();
        if (e.cost[1] < cost_tail) {
            out.push_back(
                PathSummary{e.cost, Provenance{Via::Label, static_cast<int32_t>(hop), e.i, e.j}});
            cost_tail = e.cost[1];
            last_i = e.i;
            last_j = e.j;
        } else {
            record_reject(e.i, e.j);
        }
        lazy_insert(lazy_insert, e.i + 1, e.j);
        lazy_insert(lazy_insert, e.i, e.j + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rank index and multi-dimensional validation.
// ---------------------------------------------------------------------------

/// Per-criterion orderings of an accepted skyline set, grown one path at a
/// time. A new value ranks after all equal values already present.
class RankIndex {
public:
    explicit RankIndex(int criteria) : n_(criteria), order_(static_cast<size_t>(criteria)) {
        require(criteria >= 2 && criteria <= CostVector::max_criteria, ErrorCode::InvalidValue,
                "criteria count out of range");
    }

    int criteria() const { return n_; }
    int size() const { return static_cast<int>(paths_.size()); }
    const CostVector& path(int idx) const { return paths_[static_cast<size_t>(idx)]; }
    Value max_weight() const { return max_weight_; }

    void insert(const CostVector& v) {
        int32_t idx = static_cast<int32_t>(paths_.size());
        paths_.push_back(v);
        if (v.weight() > max_weight_) max_weight_ = v.weight();
        for (int c = 0; c < n_; ++c) {
            auto& ord = order_[static_cast<size_t>(c)];
            auto pos = std::upper_bound(ord.begin(), ord.end(), v[c], [&](Value val, int32_t k) {
                return val < paths_[static_cast<size_t>(k)][c];
            });
            ord.insert(pos, idx);
        }
    }

    /// Count of stored values <= q in criterion c (the candidate's rank minus one).
    int count_leq(int c, Value q) const {
        const auto& ord = order_[static_cast<size_t>(c)];
        int lo = 0, hi = static_cast<int>(ord.size());
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (paths_[static_cast<size_t>(ord[static_cast<size_t>(mid)])][c] <= q)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    /// Path index ranked r-th (1-based) in criterion c.
    int32_t ranked(int c, int r) const { return order_[static_cast<size_t>(c)][static_cast<size_t>(r - 1)]; }

    /// Distinct criterion of a candidate: the cost criterion where it ranks
    /// best, found by advancing per-criterion binary searches lazily and
    /// stopping as soon as the best optimistic rank has converged.
    struct DistinctCriterion {
        int criterion;
        int rank;  // 1-based rank among size()+1 paths, after equals
    };

    DistinctCriterion find_distinct(const CostVector& q) const {
        const int k = size();
        struct Window {
            int lo, hi;  // count_leq is in [lo, hi]
        };
        std::vector<Window> w(static_cast<size_t>(n_), Window{0, k});
        while (true) {
            int best = -1;
            int best_lb = INT32_MAX;
            for (int c = 1; c < n_; ++c) {  // the weight criterion never ranks best
                int lb = w[static_cast<size_t>(c)].lo;
                if (lb < best_lb) {
                    best_lb = lb;
                    best = c;
                }
            }
            auto& win = w[static_cast<size_t>(best)];
            if (win.lo == win.hi) return {best, win.lo + 1};
            int mid = (win.lo + win.hi) / 2;
            const auto& ord = order_[static_cast<size_t>(best)];
            if (paths_[static_cast<size_t>(ord[static_cast<size_t>(mid)])][best] <= q[best])
                win.lo = mid + 1;
            else
                win.hi = mid;
        }
    }

private:
    int n_;
    std::vector<CostVector> paths_;
    std::vector<std::vector<int32_t>> order_;
    Value max_weight_ = 0;
};

/// True iff no accepted entry dominates (or equals) the candidate.
/// Candidates must arrive in weight order. The rank threshold rejects
/// hopeless candidates before any pairwise comparison; otherwise dominance
/// is checked only against entries ranked at or above the candidate in its
/// distinct criterion, or equivalently via higher-ranked set intersection.
inline bool validate_candidate_nd(const RankIndex& index, const CostVector& candidate,
                                  const ConcatConfig& cfg = default_concat_config(),
                                  ConcatStats* stats = nullptr) {
    const int k = index.size();
    if (k == 0) return true;
    require(candidate.weight() >= index.max_weight(), ErrorCode::PreconditionViolated,
            "candidates must arrive in weight-increasing order");
    const int n = index.criteria();

    auto dc = index.find_distinct(candidate);
    if (cfg.rank_threshold) {
        // reject iff (k + 1 - r_dc) * (n - 1) < k
        if (static_cast<int64_t>(k + 1 - dc.rank) * (n - 1) < k) {
            if (stats) stats->early_rejects++;
            return false;
        }
    }

    if (!cfg.validate_by_intersection) {
        for (int r = 1; r < dc.rank; ++r) {
            const CostVector& p = index.path(index.ranked(dc.criterion, r));
            if (stats) stats->dominance_checks++;
            if (p == candidate || dominates(p, candidate)) return false;
        }
        return true;
    }

    // intersection strategy: candidates ranked above in every cost criterion
    // (every accepted path ranks above in weight already)
    std::vector<int32_t> acc;
    bool first = true;
    for (int c = 1; c < n; ++c) {
        int cnt = index.count_leq(c, candidate[c]);
        if (cnt == 0) return true;
        std::vector<int32_t> cur;
        cur.reserve(static_cast<size_t>(cnt));
        for (int r = 1; r <= cnt; ++r) cur.push_back(index.ranked(c, r));
        std::sort(cur.begin(), cur.end());
        if (first) {
            acc = std::move(cur);
            first = false;
        } else {
            std::vector<int32_t> next;
            std::set_intersection(acc.begin(), acc.end(), cur.begin(), cur.end(),
                                  std::back_inserter(next));
            acc = std::move(next);
        }
        if (acc.empty()) return true;
    }
    return acc.empty();
}

/// Skyline of the cross product for three or more criteria. Same lazy
/// frontier as the 2D case; acceptance goes through the rank-based validator.
inline SkylineSet concat_hop_nd(SetView left, SetView right, VertexId hop,
                                const ConcatConfig& cfg = default_concat_config(),
                                ConcatStats* stats = nullptr) {
    if (left.empty() || right.empty()) return {};
    const int n = left[0].cost.size();
    require(n >= 3, ErrorCode::InvalidValue, "concat_hop_nd requires three or more criteria");
    if (left.size() == 1 || right.size() == 1) return detail::map_single(left, right, hop, stats);

    const int32_t m = static_cast<int32_t>(left.size());
    const int32_t nn = static_cast<int32_t>(right.size());
    std::vector<uint8_t> visited(static_cast<size_t>(m) * nn, 0);
    auto generate = [&](std::vector<detail::FrontierEntry>& heap, int32_t i, int32_t j) {
        if (i >= m || j >= nn) return;
        uint8_t& flag = visited[static_cast<size_t>(i) * nn + j];
        if (flag) return;
        flag = 1;
        if (stats) stats->pairs_generated++;
        heap.push_back({checked_add(left[i].cost, right[j].cost), i, j});
        std::push_heap(heap.begin(), heap.end(), detail::FrontierOrder{});
    };

    std::vector<detail::FrontierEntry> heap;
    SkylineSet out;
    RankIndex index(n);
    generate(heap, 0, 0);
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), detail::FrontierOrder{});
        detail::FrontierEntry e = heap.back();
        heap.pop_back();
        if (validate_candidate_nd(index, e.cost, cfg, stats)) {
            out.push_back(
                PathSummary{e.cost, Provenance{Via::Label, static_cast<int32_t>(hop), e.i, e.j}});
            index.insert(e.cost);
        }
        generate(heap, e.i + 1, e.j);
        generate(heap, e.i, e.j + 1);
    }
    return out;
}

/// Dimension dispatch between the 2D and nD concatenation algorithms.
inline SkylineSet concat_hop(SetView left, SetView right, VertexId hop,
                             const ConcatConfig& cfg = default_concat_config(),
                             ConcatStats* stats = nullptr) {
    if (left.empty() || right.empty()) return {};
    if (left[0].cost.size() == 2) return concat_hop_2d(left, right, hop, stats);
    return concat_hop_nd(left, right, hop, cfg, stats);
}

}  // namespace mcsp
