#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "mcsp/graph.hpp"
#include "mcsp/skyline.hpp"

namespace mcsp {

struct SkyDijkOptions {
    const std::vector<Value>* constraints = nullptr;  // prune partial paths eagerly
    const std::vector<VertexId>* targets = nullptr;   // stop once all targets are settled
    bool track_parents = false;                       // keep predecessor links for path output
};

/// Per-vertex exact skyline sets from one source, with optional predecessor
/// links. Entries appear in canonical order because labels pop that way.
class SkyDijkResult {
public:
    std::vector<SkylineSet> sets;
    std::vector<std::vector<std::pair<int32_t, int32_t>>> parents;  // (vertex, entry) per label

    std::vector<VertexId> path_to(VertexId t, size_t entry) const {
        require(!parents.empty(), ErrorCode::InvalidProvenance, "search ran without parent tracking");
        std::vector<VertexId> path;
        int32_t v = static_cast<int32_t>(t);
        int32_t e = static_cast<int32_t>(entry);
        while (v >= 0) {
            path.push_back(static_cast<VertexId>(v));
            auto [pv, pe] = parents[static_cast<size_t>(v)][static_cast<size_t>(e)];
            v = pv;
            e = pe;
        }
        std::reverse(path.begin(), path.end());
        return path;
    }
};

/// Label-correcting multi-criteria search: vertices are re-visited once per
/// skyline entry, labels pop in canonical order, and a popped label is
/// discarded when the vertex's current set dominates it.
inline SkyDijkResult sky_dijkstra(const Graph& g, VertexId s, const SkyDijkOptions& opt = {}) {
    require(g.valid_vertex(s), ErrorCode::InvalidVertex, "source out of range");
    const int n = g.criteria_count();
    const size_t v_count = g.vertex_count();

    struct QEntry {
        CostVector cost;
        VertexId vertex;
        int32_t parent_vertex;
        int32_t parent_entry;
    };
    struct Order {
        bool operator()(const QEntry& a, const QEntry& b) const {
            if (a.cost != b.cost) return canonical_less(b.cost, a.cost);
            return a.vertex > b.vertex;
        }
    };

    SkyDijkResult res;
    res.sets.resize(v_count);
    if (opt.track_parents) res.parents.resize(v_count);

    auto dominated_or_dup = [&](VertexId v, const CostVector& c) {
        const auto& set = res.sets[v];
        if (set.empty()) return false;
        if (n == 2) return c[1] >= set.back().cost[1];  // weights arrive ascending
        for (const auto& m : set)
            if (m.cost == c || dominates(m.cost, c)) return true;
        return false;
    };
    auto feasible = [&](const CostVector& c) {
        if (!opt.constraints) return true;
        for (int i = 1; i < n; ++i)
            if (c[i] > (*opt.constraints)[static_cast<size_t>(i - 1)]) return false;
        return true;
    };

    std::vector<QEntry> heap;
    auto push = [&](QEntry e) {
        heap.push_back(std::move(e));
        std::push_heap(heap.begin(), heap.end(), Order{});
    };
    push(QEntry{CostVector(n, 0), s, -1, -1});

    // a target is settled once every queued label is covered by its set
    auto all_targets_settled = [&]() {
        for (VertexId t : *opt.targets) {
            const auto& set = res.sets[t];
            if (set.empty()) return false;
            for (const auto& q : heap) {
                bool covered = false;
                for (const auto& m : set)
                    if (leq_all(m.cost, q.cost)) {
                        covered = true;
                        break;
                    }
                if (!covered) return false;
            }
        }
        return true;
    };

    size_t accepted = 0;
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), Order{});
        QEntry e = heap.back();
        heap.pop_back();
        if (dominated_or_dup(e.vertex, e.cost)) continue;
        res.sets[e.vertex].push_back(PathSummary{e.cost, Provenance{}});
        if (opt.track_parents) res.parents[e.vertex].emplace_back(e.parent_vertex, e.parent_entry);
        ++accepted;
        if (opt.targets && (accepted & 0xff) == 0 && all_targets_settled()) break;

        int32_t entry_idx = static_cast<int32_t>(res.sets[e.vertex].size()) - 1;
        for (const auto& edge : g.edges(e.vertex)) {
            CostVector nc = checked_add(e.cost, edge.cost);
            if (!feasible(nc)) continue;
            if (dominated_or_dup(edge.to, nc)) continue;
            push(QEntry{nc, edge.to, static_cast<int32_t>(e.vertex), entry_idx});
        }
    }
    return res;
}

/// Exact skyline set between two vertices by simple-path enumeration;
/// guarded to small graphs.
inline SkylineSet brute_force_skyline(const Graph& g, VertexId s, VertexId t) {
    require(g.valid_vertex(s) && g.valid_vertex(t), ErrorCode::InvalidVertex, "vertex out of range");
    require(g.vertex_count() <= 14, ErrorCode::TooLarge, "simple path enumeration beyond 14 vertices");
    const int n = g.criteria_count();
    if (s == t) return {PathSummary{CostVector(n, 0), Provenance{}}};
    std::vector<PathSummary> all;
    std::vector<uint8_t> on_path(g.vertex_count(), 0);
    auto dfs = [&](auto&& self, VertexId v, const CostVector& acc) -> void {
        if (v == t) {
            all.push_back(PathSummary{acc, Provenance{}});
            return;
        }
        on_path[v] = 1;
        for (const auto& e : g.edges(v))
            if (!on_path[e.to]) self(self, e.to, checked_add(acc, e.cost));
        on_path[v] = 0;
    };
    dfs(dfs, s, CostVector(n, 0));
    return skyline_of(std::move(all));
}

/// Definitional MCSP answer: the canonical-first skyline entry meeting every
/// constraint, or nothing.
inline std::optional<PathSummary> select_feasible(const SkylineSet& skyline,
                                                  const std::vector<Value>& constraints) {
    for (const auto& p : skyline) {
        bool ok = true;
        for (size_t i = 0; i + 1 < static_cast<size_t>(p.cost.size()); ++i)
            if (i < constraints.size() && p.cost[static_cast<int>(i) + 1] > constraints[i]) ok = false;
        if (ok) return p;
    }
    return std::nullopt;
}

inline std::optional<PathSummary> mcsp_oracle(const Graph& g, const QuerySpec& q) {
    require(g.valid_vertex(q.s) && g.valid_vertex(q.t), ErrorCode::InvalidVertex, "vertex out of range");
    if (q.s == q.t) return PathSummary{CostVector(g.criteria_count(), 0), Provenance{}};
    std::vector<VertexId> targets{q.t};
    SkyDijkOptions opt;
    opt.targets = &targets;
    SkyDijkResult res = sky_dijkstra(g, q.s, opt);
    return select_feasible(res.sets[q.t], q.constraints);
}

}  // namespace mcsp
