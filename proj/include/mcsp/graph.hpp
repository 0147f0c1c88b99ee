#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcsp/cost_vector.hpp"
#include "mcsp/errors.hpp"
#include "mcsp/rng.hpp"
#include "mcsp/skyline.hpp"

namespace mcsp {

struct QuerySpec {
    VertexId s = 0;
    VertexId t = 0;
    std::vector<Value> constraints;  // empty for pure skyline queries
};

/// Undirected multi-criteria graph. One CostVector per edge, no self loops,
/// no parallel edges; adjacency is immutable after construction and sorted by
/// neighbor id.
class Graph {
public:
    struct Edge {
        VertexId to;
        CostVector cost;
    };

    Graph() = default;
    Graph(size_t vertices, int criteria) : criteria_(criteria), adj_(vertices) {}

    size_t vertex_count() const { return adj_.size(); }
    int criteria_count() const { return criteria_; }
    size_t edge_count() const { return edge_count_; }
    int merge_warnings() const { return merge_warnings_; }

    const std::vector<Edge>& edges(VertexId v) const { return adj_[v]; }

    std::optional<CostVector> edge_between(VertexId u, VertexId v) const {
        const auto& es = adj_[u];
        auto it = std::lower_bound(es.begin(), es.end(), v,
                                   [](const Edge& e, VertexId x) { return e.to < x; });
        if (it == es.end() || it->to != v) return std::nullopt;
        return it->cost;
    }

    bool valid_vertex(VertexId v) const { return v < adj_.size(); }

    /// Inserts or replaces the undirected edge {u,v}. Used by loaders and
    /// generators; keeps both adjacency lists sorted.
    void set_edge(VertexId u, VertexId v, const CostVector& cost) {
        require(u < adj_.size() && v < adj_.size(), ErrorCode::InvalidVertex, "edge endpoint out of range");
        require(u != v, ErrorCode::InvalidValue, "self loops are not allowed");
        require(cost.size() == criteria_, ErrorCode::InvalidValue, "edge criteria mismatch");
        if (insert_arc(u, v, cost)) ++edge_count_;
        insert_arc(v, u, cost);
    }

    void note_merge_warning() { ++merge_warnings_; }

    /// Raw asymmetric insert for validation tests.
    void add_arc_unchecked(VertexId u, VertexId v, const CostVector& cost) {
        adj_[u].push_back(Edge{v, cost});
        std::sort(adj_[u].begin(), adj_[u].end(),
                  [](const Edge& a, const Edge& b) { return a.to < b.to; });
    }

private:
    bool insert_arc(VertexId u, VertexId v, const CostVector& cost) {
        auto& es = adj_[u];
        auto it = std::lower_bound(es.begin(), es.end(), v,
                                   [](const Edge& e, VertexId x) { return e.to < x; });
        if (it != es.end() && it->to == v) {
            it->cost = cost;
            return false;
        }
        es.insert(it, Edge{v, cost});
        return true;
    }

    int criteria_ = 0;
    std::vector<std::vector<Edge>> adj_;
    size_t edge_count_ = 0;
    int merge_warnings_ = 0;
};

// ---------------------------------------------------------------------------
// DIMACS ingestion.
// ---------------------------------------------------------------------------

namespace detail {

struct ArcList {
    size_t vertices = 0;
    std::vector<std::pair<VertexId, VertexId>> arcs;  // 0-based endpoints
    std::vector<std::vector<Value>> values;           // one row per criterion source
};

/// Parses `p sp N M` / `a u v w` lines; `c` lines are comments. Cost
/// companions reuse the same grammar without requiring the header.
inline void parse_arc_file(std::istream& in, ArcList& out, bool is_weight_source) {
    std::string line;
    std::vector<Value> vals;
    std::map<std::pair<VertexId, VertexId>, std::vector<size_t>> remaining;  // cost matching
    if (!is_weight_source) {
        for (size_t i = 0; i < out.arcs.size(); ++i) remaining[out.arcs[i]].push_back(i);
        for (auto& [k, v] : remaining) std::reverse(v.begin(), v.end());
        vals.assign(out.arcs.size(), -1);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char tag = line[0];
        if (tag == 'c' || tag == '\r') continue;
        std::istringstream ls(line);
        if (tag == 'p') {
            std::string p, sp;
            size_t n = 0, m = 0;
            ls >> p >> sp >> n >> m;
            require(is_weight_source, ErrorCode::InvalidValue, "unexpected problem line in cost source");
            out.vertices = n;
        } else if (tag == 'a') {
            char a;
            long long u, v, w;
            if (!(ls >> a >> u >> v >> w)) fail(ErrorCode::InvalidValue, "malformed arc line: " + line);
            require(u >= 1 && v >= 1, ErrorCode::InvalidValue, "vertex ids must be positive");
            require(w >= 0, ErrorCode::InvalidValue, "negative criterion value");
            require(w <= INT32_MAX, ErrorCode::InvalidValue, "criterion value out of range");
            VertexId uu = static_cast<VertexId>(u - 1), vv = static_cast<VertexId>(v - 1);
            if (is_weight_source) {
                out.arcs.emplace_back(uu, vv);
                out.values[0].push_back(static_cast<Value>(w));
            } else {
                auto it = remaining.find({uu, vv});
                if (it == remaining.end() || it->second.empty())
                    fail(ErrorCode::MismatchedEdgeSet,
                         "cost source lists arc " + std::to_string(u) + "->" + std::to_string(v) +
                             " absent from the weight source");
                vals[it->second.back()] = static_cast<Value>(w);
                it->second.pop_back();
            }
        }
        // other tags ignored
    }
    if (!is_weight_source) {
        for (size_t i = 0; i < vals.size(); ++i)
            if (vals[i] < 0)
                fail(ErrorCode::MismatchedEdgeSet, "cost source is missing an arc of the weight source");
        out.values.push_back(std::move(vals));
    }
}

}  // namespace detail

/// Loads a DIMACS weight file plus one companion file per extra cost
/// criterion. Vertex ids are remapped densely; directed arc pairs merge into
/// one undirected edge (componentwise minimum on disagreement, counted as a
/// warning); parallel arcs collapse to the skyline representative with the
/// smallest weight.
inline Graph load_dimacs(std::istream& weight_source, std::vector<std::istream*> cost_sources) {
    detail::ArcList arcs;
    arcs.values.resize(1);
    detail::parse_arc_file(weight_source, arcs, true);
    for (auto* cs : cost_sources) detail::parse_arc_file(*cs, arcs, false);
    require(!arcs.arcs.empty(), ErrorCode::EmptyGraph, "no edges in the weight source");

    const int n = 1 + static_cast<int>(cost_sources.size());
    require(n <= CostVector::max_criteria, ErrorCode::InvalidValue, "too many criteria");
    size_t vertices = arcs.vertices;
    for (const auto& [u, v] : arcs.arcs) vertices = std::max({vertices, size_t(u) + 1, size_t(v) + 1});

    // collapse parallel arcs per direction to the canonical skyline head
    std::map<std::pair<VertexId, VertexId>, CostVector> directed;
    for (size_t i = 0; i < arcs.arcs.size(); ++i) {
        auto [u, v] = arcs.arcs[i];
        if (u == v) continue;
        CostVector c(n);
        for (int k = 0; k < n; ++k) c[k] = arcs.values[static_cast<size_t>(k)][i];
        auto it = directed.find({u, v});
        if (it == directed.end())
            directed.emplace(std::make_pair(u, v), c);
        else if (canonical_less(c, it->second))
            it->second = c;
    }
    require(!directed.empty(), ErrorCode::EmptyGraph, "only self loops in the weight source");

    Graph g(vertices, n);
    for (const auto& [key, c] : directed) {
        auto [u, v] = key;
        if (u > v) continue;  // handled from the lower endpoint
        auto rev = directed.find({v, u});
        if (rev == directed.end()) {
            g.note_merge_warning();
            g.set_edge(u, v, c);
        } else if (rev->second == c) {
            g.set_edge(u, v, c);
        } else {
            g.note_merge_warning();
            g.set_edge(u, v, component_min(c, rev->second));
        }
    }
    // arcs present only as (v,u) with v > u
    for (const auto& [key, c] : directed) {
        auto [u, v] = key;
        if (u < v || g.edge_between(v, u)) continue;
        g.note_merge_warning();
        g.set_edge(v, u, c);
    }
    return g;
}

/// Writes the graph back as a weight stream plus one stream per extra cost;
/// arc order is deterministic so reloading reproduces the graph exactly.
inline void write_dimacs(const Graph& g, std::ostream& weight_out, std::vector<std::ostream*> cost_outs) {
    require(static_cast<int>(cost_outs.size()) == g.criteria_count() - 1, ErrorCode::InvalidValue,
            "one output stream per cost criterion");
    weight_out << "p sp " << g.vertex_count() << " " << 2 * g.edge_count() << "\n";
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        for (const auto& e : g.edges(u)) {
            weight_out << "a " << u + 1 << " " << e.to + 1 << " " << e.cost[0] << "\n";
            for (int k = 1; k < g.criteria_count(); ++k)
                *cost_outs[static_cast<size_t>(k - 1)]
                    << "a " << u + 1 << " " << e.to + 1 << " " << e.cost[k] << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Synthetic cost generation.
// ---------------------------------------------------------------------------

enum class SynthMode { Positive, Random, Negative };

inline SynthMode synth_mode_from_string(const std::string& s) {
    if (s == "positive") return SynthMode::Positive;
    if (s == "random") return SynthMode::Random;
    if (s == "negative") return SynthMode::Negative;
    fail(ErrorCode::InvalidValue, "unknown synthesis mode: " + s);
}

/// Appends `count` cost criteria correlated with the weight: positive uses
/// round(w*u) with u in [0.8, 1.2], random is uniform in [1, w_max], negative
/// uses round((w_max + 1 - w) * u). Values are clamped to be at least 1.
inline Graph synthesize_costs(const Graph& g, SynthMode mode, int count, uint64_t seed) {
    require(count >= 1, ErrorCode::InvalidValue, "cost criteria count must be positive");
    require(g.criteria_count() + count <= CostVector::max_criteria, ErrorCode::InvalidValue,
            "too many criteria");
    const int n0 = g.criteria_count();
    const int n = n0 + count;
    Value w_max = 1;
    for (VertexId u = 0; u < g.vertex_count(); ++u)
        for (const auto& e : g.edges(u)) w_max = std::max(w_max, e.cost[0]);

    Graph out(g.vertex_count(), n);
    Rng rng(seed);
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        for (const auto& e : g.edges(u)) {
            if (e.to < u) continue;  // one draw per undirected edge
            CostVector c(n);
            for (int k = 0; k < n0; ++k) c[k] = e.cost[k];
            for (int k = n0; k < n; ++k) {
                Value w = e.cost[0];
                double val = 0;
                switch (mode) {
                    case SynthMode::Positive: val = w * rng.next_real(0.8, 1.2); break;
                    case SynthMode::Random: val = static_cast<double>(rng.next_int(1, w_max)); break;
                    case SynthMode::Negative:
                        val = (static_cast<double>(w_max) + 1 - w) * rng.next_real(0.8, 1.2);
                        break;
                }
                c[k] = std::max<Value>(1, static_cast<Value>(val + 0.5));
            }
            out.set_edge(u, e.to, c);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structural validation.
// ---------------------------------------------------------------------------

struct ValidationReport {
    size_t components = 0;
    bool symmetric = true;
    size_t symmetry_violations = 0;
    size_t self_loops = 0;
    int criteria_count = 0;

    bool single_component() const { return components == 1; }
};

inline ValidationReport validate_graph(const Graph& g) {
    ValidationReport r;
    r.criteria_count = g.criteria_count();
    const size_t v = g.vertex_count();
    std::vector<uint8_t> seen(v, 0);
    for (VertexId s = 0; s < v; ++s) {
        if (seen[s]) continue;
        ++r.components;
        std::vector<VertexId> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            for (const auto& e : g.edges(u)) {
                if (!seen[e.to]) {
                    seen[e.to] = 1;
                    stack.push_back(e.to);
                }
            }
        }
    }
    for (VertexId u = 0; u < v; ++u) {
        for (const auto& e : g.edges(u)) {
            if (e.to == u) ++r.self_loops;
            auto back = g.edge_between(e.to, u);
            if (!back || !(*back == e.cost)) ++r.symmetry_violations;
        }
    }
    r.symmetric = r.symmetry_violations == 0;
    return r;
}

}  // namespace mcsp
