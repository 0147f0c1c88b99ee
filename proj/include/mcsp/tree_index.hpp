#pragma once

#include <atomic>
#include <optional>
#include <vector>

#include "mcsp/sky_dijkstra.hpp"
#include "mcsp/tree.hpp"

namespace mcsp {

inline uint64_t next_index_tag() {
    static std::atomic<uint64_t> counter{1};
    return counter.fetch_add(1);
}

/// A query answer bound to the index instance that produced it.
struct QueryResult {
    VertexId s = 0, t = 0;
    QueryHit hit;
    uint64_t index_tag = 0;
};

/// Whole-graph MCSP-2Hop index: minimum-degree skyline tree decomposition
/// with top-down cascaded labels.
class TreeIndex {
public:
    void build(const Graph& g) {
        require(g.vertex_count() > 0, ErrorCode::EmptyGraph, "empty graph");
        require(validate_graph(g).single_component(), ErrorCode::InvalidValue,
                "index construction requires a connected graph");
        criteria_ = g.criteria_count();
        tree_.build(EdgeSetGraph::from_graph(g));
        tag_ = next_index_tag();
    }

    int criteria() const { return criteria_; }
    uint64_t tag() const { return tag_; }
    const SkylineTree& tree() const { return tree_; }
    SkylineTree& mutable_tree() { return tree_; }
    void set_tag_and_criteria(uint64_t tag, int criteria) {
        tag_ = tag;
        criteria_ = criteria;
    }

    std::vector<VertexId> contraction_order() const { return tree_.contraction_order(); }
    VertexId lca(VertexId u, VertexId v) const { return tree_.lca(u, v); }
    SkylineTree::Stats stats() const { return tree_.stats(); }

    SkylineSet query_skyline(VertexId s, VertexId t,
                             const ConcatConfig& cfg = default_concat_config(),
                             ConcatStats* stats = nullptr) const {
        SkylineSet out;
        for (const auto& h : tree_.query_skyline(s, t, cfg, stats))
            out.push_back(PathSummary{h.cost, Provenance{}});
        return out;
    }

    std::vector<QueryResult> query_skyline_hits(VertexId s, VertexId t,
                                                const ConcatConfig& cfg = default_concat_config(),
                                                ConcatStats* stats = nullptr) const {
        std::vector<QueryResult> out;
        for (const auto& h : tree_.query_skyline(s, t, cfg, stats))
            out.push_back(QueryResult{s, t, h, tag_});
        return out;
    }

    std::optional<QueryResult> query_mcsp(VertexId s, VertexId t, const std::vector<Value>& constraints,
                                          const ConcatConfig& cfg = default_concat_config(),
                                          ConcatStats* stats = nullptr,
                                          std::vector<HopTrace>* trace = nullptr) const {
        auto hit = tree_.query_mcsp(s, t, constraints, cfg, stats, trace);
        if (!hit) return std::nullopt;
        return QueryResult{s, t, *hit, tag_};
    }

    std::vector<VertexId> retrieve_path(const QueryResult& r) const {
        require(r.index_tag == tag_, ErrorCode::InvalidProvenance,
                "result was produced by a different index");
        return tree_.retrieve_path(r.s, r.t, r.hit);
    }

private:
    SkylineTree tree_;
    int criteria_ = 0;
    uint64_t tag_ = 0;
};

}  // namespace mcsp
