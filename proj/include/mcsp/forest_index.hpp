#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "mcsp/sky_dijkstra.hpp"
#include "mcsp/tree.hpp"
#include "mcsp/tree_index.hpp"

namespace mcsp {

struct Partition {
    int32_t id = 0;
    std::vector<VertexId> vertices;  // ascending
    std::vector<VertexId> boundary;  // ascending, endpoints of cross-partition edges
};

/// Seeded greedy region growing with boundary-swap refinement. Partitions are
/// connected, disjoint, and cover the graph; the refinement passes shrink the
/// boundary vertex count where a move keeps both sides connected.
inline std::vector<Partition> partition_graph(const Graph& g, int count, uint64_t seed) {
    const size_t v_count = g.vertex_count();
    require(count >= 1, ErrorCode::InvalidValue, "partition count must be positive");
    require(static_cast<size_t>(count) <= v_count, ErrorCode::InvalidValue,
            "more partitions than vertices");
    require(validate_graph(g).single_component(), ErrorCode::InvalidValue,
            "partitioning requires a connected graph");

    std::vector<int32_t> part(v_count, -1);
    if (count == 1) {
        Partition p;
        p.id = 0;
        p.vertices.resize(v_count);
        for (VertexId v = 0; v < v_count; ++v) p.vertices[v] = v;
        std::fill(part.begin(), part.end(), 0);
        return {p};
    }

    Rng rng(seed);
    // farthest-point seeds for spread-out regions
    std::vector<VertexId> seeds;
    seeds.push_back(static_cast<VertexId>(rng.next_below(v_count)));
    auto bfs_dist = [&](const std::vector<VertexId>& sources) {
        std::vector<int32_t> dist(v_count, -1);
        std::vector<VertexId> queue;
        for (VertexId s : sources) {
            dist[s] = 0;
            queue.push_back(s);
        }
        for (size_t head = 0; head < queue.size(); ++head) {
            VertexId u = queue[head];
            for (const auto& e : g.edges(u))
                if (dist[e.to] < 0) {
                    dist[e.to] = dist[u] + 1;
                    queue.push_back(e.to);
                }
        }
        return dist;
    };
    while (static_cast<int>(seeds.size()) < count) {
        auto dist = bfs_dist(seeds);
        VertexId far = 0;
        for (VertexId v = 1; v < v_count; ++v)
            if (dist[v] > dist[far]) far = v;
        seeds.push_back(far);
    }

    // balanced multi-source growth, one claim per round for the smallest region
    std::vector<std::vector<VertexId>> frontier(static_cast<size_t>(count));
    std::vector<size_t> head(static_cast<size_t>(count), 0), size(static_cast<size_t>(count), 0);
    for (int p = 0; p < count; ++p) {
        if (part[seeds[static_cast<size_t>(p)]] >= 0) {
            // duplicate seed on tiny graphs; claim any unassigned vertex
            for (VertexId v = 0; v < v_count; ++v)
                if (part[v] < 0) {
                    seeds[static_cast<size_t>(p)] = v;
                    break;
                }
        }
        VertexId s = seeds[static_cast<size_t>(p)];
        part[s] = p;
        size[static_cast<size_t>(p)] = 1;
        frontier[static_cast<size_t>(p)].push_back(s);
    }
    size_t assigned = static_cast<size_t>(count);
    while (assigned < v_count) {
        int best = -1;
        for (int p = 0; p < count; ++p) {
            if (head[static_cast<size_t>(p)] >= frontier[static_cast<size_t>(p)].size()) continue;
            if (best < 0 || size[static_cast<size_t>(p)] < size[static_cast<size_t>(best)]) best = p;
        }
        require(best >= 0, ErrorCode::InvalidValue, "region growth stalled");
        auto& fr = frontier[static_cast<size_t>(best)];
        auto& hd = head[static_cast<size_t>(best)];
        bool claimed = false;
        while (hd < fr.size() && !claimed) {
            VertexId u = fr[hd];
            for (const auto& e : g.edges(u)) {
                if (part[e.to] < 0) {
                    part[e.to] = best;
                    fr.push_back(e.to);
                    ++size[static_cast<size_t>(best)];
                    ++assigned;
                    claimed = true;
                    break;
                }
            }
            if (!claimed) ++hd;
        }
    }

    auto is_boundary = [&](VertexId v) {
        for (const auto& e : g.edges(v))
            if (part[e.to] != part[v]) return true;
        return false;
    };
    auto boundary_count = [&]() {
        size_t c = 0;
        for (VertexId v = 0; v < v_count; ++v)
            if (is_boundary(v)) ++c;
        return c;
    };
    auto connected_without = [&](int p, VertexId skip) {
        VertexId start = static_cast<VertexId>(-1);
        size_t members = 0;
        for (VertexId v = 0; v < v_count; ++v)
            if (part[v] == p && v != skip) {
                ++members;
                if (start == static_cast<VertexId>(-1)) start = v;
            }
        if (members == 0) return false;
        std::vector<VertexId> queue{start};
        std::vector<uint8_t> seen(v_count, 0);
        seen[start] = 1;
        size_t reached = 1;
        for (size_t i = 0; i < queue.size(); ++i)
            for (const auto& e : g.edges(queue[i]))
                if (!seen[e.to] && part[e.to] == p && e.to != skip) {
                    seen[e.to] = 1;
                    ++reached;
                    queue.push_back(e.to);
                }
        return reached == members;
    };

    // boundary-swap refinement
    for (int pass = 0; pass < 3; ++pass) {
        size_t before = boundary_count();
        bool moved = false;
        for (VertexId v = 0; v < v_count; ++v) {
            if (!is_boundary(v)) continue;
            int from = part[v];
            std::vector<int> options;
            for (const auto& e : g.edges(v))
                if (part[e.to] != from &&
                    std::find(options.begin(), options.end(), part[e.to]) == options.end())
                    options.push_back(part[e.to]);
            std::sort(options.begin(), options.end());
            for (int to : options) {
                if (size[static_cast<size_t>(from)] <= 1) break;
                if (!connected_without(from, v)) break;
                part[v] = to;
                size_t after = boundary_count();
                if (after < before) {
                    --size[static_cast<size_t>(from)];
                    ++size[static_cast<size_t>(to)];
                    before = after;
                    moved = true;
                    break;
                }
                part[v] = from;
            }
        }
        if (!moved) break;
    }

    std::vector<Partition> out(static_cast<size_t>(count));
    for (int p = 0; p < count; ++p) out[static_cast<size_t>(p)].id = p;
    for (VertexId v = 0; v < v_count; ++v) {
        out[static_cast<size_t>(part[v])].vertices.push_back(v);
        if (is_boundary(v)) out[static_cast<size_t>(part[v])].boundary.push_back(v);
    }
    return out;
}

/// Exact all-pair boundary skylines of one partition, computed on the full
/// graph so that detours through other partitions are covered. Entries store
/// their full vertex paths for later retrieval.
struct BoundaryClique {
    std::map<std::pair<VertexId, VertexId>, SkylineSet> sets;  // key (min,max)
    const SkylineSet* find(VertexId u, VertexId v) const {
        auto it = sets.find({std::min(u, v), std::max(u, v)});
        return it == sets.end() ? nullptr : &it->second;
    }
};

inline BoundaryClique boundary_allpairs(const Graph& g, const Partition& part,
                                        std::vector<std::vector<VertexId>>& path_store) {
    BoundaryClique clique;
    const auto& b = part.boundary;
    if (b.size() <= 1) return clique;
    for (size_t i = 0; i + 1 < b.size(); ++i) {
        std::vector<VertexId> targets(b.begin() + static_cast<long>(i) + 1, b.end());
        SkyDijkOptions opt;
        opt.targets = &targets;
        opt.track_parents = true;
        SkyDijkResult res = sky_dijkstra(g, b[i], opt);
        for (VertexId t : targets) {
            SkylineSet set;
            const auto& src = res.sets[t];
            set.reserve(src.size());
            for (size_t e = 0; e < src.size(); ++e) {
                int32_t pid = static_cast<int32_t>(path_store.size());
                path_store.push_back(res.path_to(t, e));
                set.push_back(PathSummary{src[e].cost, Provenance{Via::Clique, pid, -1, -1}});
            }
            clique.sets.emplace(std::make_pair(b[i], t), std::move(set));
        }
    }
    return clique;
}

/// Forest hop labeling: per-partition inner trees over boundary cliques, a
/// boundary tree contracted partition by partition, and boundary or extended
/// label modes for cross-partition queries.
class ForestIndex {
public:
    enum class LabelMode : uint8_t { Boundary, Extended };

    struct Result {
        enum class Kind : uint8_t { Zero, Inner, Boundary, Composed, Extended };
        VertexId s = 0, t = 0;
        CostVector cost;
        Kind kind = Kind::Zero;
        int32_t pid = -1;                // Inner
        QueryHit hit;                    // Inner / Boundary
        VertexId b_s = 0, b_t = 0;       // Composed boundary hops
        int32_t left_idx = -1;           // entry in L_inner(s)[b_s]; -1 when s == b_s
        QueryHit mid;                    // boundary-tree hit b_s -> b_t
        int32_t right_idx = -1;          // entry in L_inner(t)[b_t]; -1 when t == b_t
        VertexId hop = 0;                // Extended 2-hop vertex
        int32_t ext_left = -1, ext_right = -1;
        uint64_t index_tag = 0;
    };

    ForestIndex() = default;
    ForestIndex(const ForestIndex&) = delete;
    ForestIndex& operator=(const ForestIndex&) = delete;

    void build(const Graph& g, int partition_count, uint64_t seed,
               LabelMode mode = LabelMode::Boundary, bool inherit_shortcuts = true) {
        build_with_partitions(g, partition_graph(g, partition_count, seed), mode, inherit_shortcuts);
    }

    void build_with_partitions(const Graph& g, std::vector<Partition> parts, LabelMode mode,
                               bool inherit_shortcuts = true) {
        v_count_ = g.vertex_count();
        criteria_ = g.criteria_count();
        parts_ = std::move(parts);
        part_of_.assign(v_count_, -1);
        boundary_.assign(v_count_, 0);
        for (const auto& p : parts_) {
            for (VertexId v : p.vertices) part_of_[v] = p.id;
            for (VertexId v : p.boundary) boundary_[v] = 1;
        }
        clique_paths_.clear();
        cliques_.clear();
        cliques_.resize(parts_.size());
        for (const auto& p : parts_)
            cliques_[static_cast<size_t>(p.id)] = boundary_allpairs(g, p, clique_paths_);

        build_inner_trees(g);
        build_boundary_tree(g, inherit_shortcuts);
        mode_ = LabelMode::Boundary;
        ext_targets_.assign(v_count_, {});
        ext_sets_.assign(v_count_, {});
        ext_hops_.assign(v_count_, {});
        if (mode == LabelMode::Extended) extend_labels();
        tag_ = next_index_tag();
    }

    LabelMode mode() const { return mode_; }
    uint64_t tag() const { return tag_; }
    int criteria() const { return criteria_; }
    size_t vertex_count() const { return v_count_; }
    const std::vector<Partition>& partitions() const { return parts_; }
    int32_t partition_of(VertexId v) const { return part_of_[v]; }
    bool is_boundary(VertexId v) const { return boundary_[v] != 0; }
    const SkylineTree& inner_tree(size_t pid) const { return inner_[pid]; }
    const SkylineTree& boundary_tree() const { return btree_; }
    bool has_boundary_tree() const { return has_btree_; }
    const BoundaryClique& clique(size_t pid) const { return cliques_[pid]; }

    /// Pushes boundary labels down to every inner vertex; cross-partition
    /// queries then run as plain 2-hop lookups.
    void extend_labels() {
        if (mode_ == LabelMode::Extended) return;
        for (const auto& p : parts_) {
            for (VertexId v : p.vertices) {
                if (boundary_[v]) continue;
                std::vector<VertexId> banc = boundary_ancestors(v);
                if (banc.empty()) continue;
                // closure of the boundary hops over the boundary tree
                std::vector<VertexId> targets;
                for (VertexId b : banc) {
                    targets.push_back(b);
                    for (VertexId a : btree_.node(b).ancestors) targets.push_back(a);
                }
                std::sort(targets.begin(), targets.end());
                targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
                ext_hops_[v] = targets;
                const SkylineTree& inner = inner_[static_cast<size_t>(p.id)];
                for (VertexId a : targets) {
                    if (inner.member(a) && (a == v || inner.is_ancestor(a, v))) continue;
                    std::vector<HopInput> hops;
                    for (VertexId b : banc) {
                        if (b == a) continue;  // covered by the inner label check above
                        HopInput in;
                        in.hop = b;
                        in.left = inner.pair_set(v, b);
                        in.right = middle_set(b, a);
                        hops.push_back(in);
                    }
                    ext_targets_[v].push_back(a);
                    ext_sets_[v].push_back(multi_hop_skyline(hops));
                }
            }
        }
        mode_ = LabelMode::Extended;
    }

    SkylineSet query_skyline(VertexId s, VertexId t,
                             const ConcatConfig& cfg = default_concat_config(),
                             ConcatStats* stats = nullptr) const {
        require(s < v_count_ && t < v_count_, ErrorCode::InvalidVertex, "query vertex out of range");
        if (s == t) return {PathSummary{CostVector(criteria_, 0), Provenance{}}};
        if (boundary_[s] && boundary_[t]) return strip(btree_.query_skyline(s, t, cfg, stats));
        if (part_of_[s] == part_of_[t])
            return strip(inner_[static_cast<size_t>(part_of_[s])].query_skyline(s, t, cfg, stats));
        if (mode_ == LabelMode::Extended) return extended_skyline(s, t, cfg, stats);
        return composed_skyline(s, t, cfg, stats);
    }

    std::optional<Result> query_mcsp(VertexId s, VertexId t, const std::vector<Value>& constraints,
                                     const ConcatConfig& cfg = default_concat_config(),
                                     ConcatStats* stats = nullptr) const {
        require(s < v_count_ && t < v_count_, ErrorCode::InvalidVertex, "query vertex out of range");
        std::vector<Value> c = constraints;
        if (c.empty()) c.assign(static_cast<size_t>(criteria_ - 1), INT32_MAX);
        Result r;
        r.s = s;
        r.t = t;
        r.index_tag = tag_;
        if (s == t) {
            r.cost = CostVector(criteria_, 0);
            r.kind = Result::Kind::Zero;
            return r;
        }
        if (boundary_[s] && boundary_[t]) {
            auto hit = btree_.query_mcsp(s, t, c, cfg, stats);
            if (!hit) return std::nullopt;
            r.kind = Result::Kind::Boundary;
            r.hit = *hit;
            r.cost = hit->cost;
            return r;
        }
        if (part_of_[s] == part_of_[t]) {
            auto hit = inner_[static_cast<size_t>(part_of_[s])].query_mcsp(s, t, c, cfg, stats);
            if (!hit) return std::nullopt;
            r.kind = Result::Kind::Inner;
            r.pid = part_of_[s];
            r.hit = *hit;
            r.cost = hit->cost;
            return r;
        }
        if (mode_ == LabelMode::Extended) return extended_mcsp(r, s, t, c, cfg, stats);
        return composed_mcsp(r, s, t, c, cfg, stats);
    }

    std::vector<VertexId> retrieve_path(const Result& r) const {
        require(r.index_tag == tag_, ErrorCode::InvalidProvenance,
                "result was produced by a different index");
        auto clique_hook = [this](int32_t pid) { return clique_paths_[static_cast<size_t>(pid)]; };
        switch (r.kind) {
            case Result::Kind::Zero:
                return {r.s};
            case Result::Kind::Inner:
                return inner_[static_cast<size_t>(r.pid)].retrieve_path(r.s, r.t, r.hit, clique_hook);
            case Result::Kind::Boundary:
                return btree_.retrieve_path(r.s, r.t, r.hit, clique_hook);
            case Result::Kind::Composed: {
                std::vector<VertexId> path = side_path(r.s, r.b_s, r.left_idx);
                std::vector<VertexId> mid = btree_.retrieve_path(r.b_s, r.b_t, r.mid, clique_hook);
                path.insert(path.end(), mid.begin() + 1, mid.end());
                std::vector<VertexId> right = side_path(r.t, r.b_t, r.right_idx);
                std::reverse(right.begin(), right.end());
                path.insert(path.end(), right.begin() + 1, right.end());
                return path;
            }
            case Result::Kind::Extended: {
                std::vector<VertexId> left = extended_side_path(r.s, r.hop, r.ext_left);
                std::vector<VertexId> right = extended_side_path(r.t, r.hop, r.ext_right);
                std::reverse(right.begin(), right.end());
                left.insert(left.end(), right.begin() + 1, right.end());
                return left;
            }
        }
        fail(ErrorCode::InvalidProvenance, "unknown result kind");
    }

    struct Stats {
        size_t partitions = 0;
        size_t boundary_vertices = 0;
        size_t label_entries = 0;
        size_t shortcut_entries = 0;
    };
    Stats stats() const {
        Stats s;
        s.partitions = parts_.size();
        for (VertexId v = 0; v < v_count_; ++v)
            if (boundary_[v]) ++s.boundary_vertices;
        for (const auto& t : inner_) {
            auto st = t.stats();
            s.label_entries += st.label_entries;
            s.shortcut_entries += st.shortcut_entries;
        }
        if (has_btree_) {
            auto st = btree_.stats();
            s.label_entries += st.label_entries;
            s.shortcut_entries += st.shortcut_entries;
        }
        for (const auto& sets : ext_sets_)
            for (const auto& set : sets) s.label_entries += set.size();
        return s;
    }

private:
    static SkylineSet strip(const std::vector<QueryHit>& hits) {
        SkylineSet out;
        out.reserve(hits.size());
        for (const auto& h : hits) out.push_back(PathSummary{h.cost, Provenance{}});
        return out;
    }

    void build_inner_trees(const Graph& g) {
        inner_.clear();
        inner_.resize(parts_.size());
        inner_phase_.assign(v_count_, 0);
        inner_skip_.assign(v_count_, 0);
        for (VertexId v = 0; v < v_count_; ++v) {
            inner_phase_[v] = boundary_[v];
            inner_skip_[v] = boundary_[v];
        }
        for (const auto& p : parts_) {
            EdgeSetGraph esg;
            esg.universe = v_count_;
            esg.criteria = criteria_;
            esg.members = p.vertices;
            for (VertexId u : p.vertices)
                for (const auto& e : g.edges(u))
                    if (part_of_[e.to] == p.id && u < e.to)
                        esg.edges.emplace(
                            std::make_pair(u, e.to),
                            SkylineSet{PathSummary{e.cost, Provenance{Via::Edge, no_vertex, -1, -1}}});
            for (const auto& [key, set] : cliques_[static_cast<size_t>(p.id)].sets) {
                auto it = esg.edges.find(key);
                if (it == esg.edges.end())
                    esg.edges.emplace(key, set);
                else
                    it->second = skyline_merge(it->second, set);
            }
            SkylineTree::BuildOptions opt;
            opt.phase = &inner_phase_;
            opt.skip_labels = &inner_skip_;
            opt.external_pair = make_clique_resolver(p.id);
            opt.record_shortcut_phase = 1;  // boundary-phase shortcuts feed the boundary tree
            inner_[static_cast<size_t>(p.id)].build(esg, opt);
        }
    }

    SkylineTree::ExternalPairFn make_clique_resolver(int32_t pid) const {
        return [this, pid](VertexId u, VertexId a) -> const SkylineSet* {
            if (u == a || !boundary_[u] || !boundary_[a]) return nullptr;
            if (part_of_[u] != pid || part_of_[a] != pid) return nullptr;
            return cliques_[static_cast<size_t>(pid)].find(u, a);
        };
    }

    void build_boundary_tree(const Graph& g, bool inherit_shortcuts) {
        EdgeSetGraph esg;
        esg.universe = v_count_;
        esg.criteria = criteria_;
        for (VertexId v = 0; v < v_count_; ++v)
            if (boundary_[v]) esg.members.push_back(v);
        has_btree_ = !esg.members.empty();
        if (!has_btree_) return;
        for (VertexId u : esg.members)
            for (const auto& e : g.edges(u))
                if (part_of_[e.to] != part_of_[u] && u < e.to)
                    esg.edges.emplace(
                        std::make_pair(u, e.to),
                        SkylineSet{PathSummary{e.cost, Provenance{Via::Edge, no_vertex, -1, -1}}});
        for (const auto& clique : cliques_) {
            for (const auto& [key, set] : clique.sets) {
                auto it = esg.edges.find(key);
                if (it == esg.edges.end())
                    esg.edges.emplace(key, set);
                else
                    it->second = skyline_merge(it->second, set);
            }
        }

        // partitions by ascending boundary count, each following its inner
        // tree's boundary contraction order
        std::vector<const Partition*> order;
        for (const auto& p : parts_) order.push_back(&p);
        std::sort(order.begin(), order.end(), [](const Partition* a, const Partition* b) {
            if (a->boundary.size() != b->boundary.size()) return a->boundary.size() < b->boundary.size();
            return a->id < b->id;
        });
        std::vector<VertexId> explicit_order;
        for (const Partition* p : order)
            for (VertexId v : inner_[static_cast<size_t>(p->id)].contraction_order())
                if (boundary_[v]) explicit_order.push_back(v);

        std::map<std::tuple<VertexId, VertexId, VertexId>, const SkylineSet*> inherited;
        if (inherit_shortcuts)
            for (const auto& tree : inner_)
                for (const auto& rec : tree.recorded_shortcuts())
                    inherited[{rec.pivot, rec.a, rec.b}] = &rec.set;

        SkylineTree::BuildOptions opt;
        opt.explicit_order = &explicit_order;
        if (inherit_shortcuts)
            opt.inherited = [inh = std::move(inherited)](VertexId pivot, VertexId a,
                                                         VertexId b) -> const SkylineSet* {
                auto it = inh.find({pivot, a, b});
                return it == inh.end() ? nullptr : it->second;
            };
        btree_.build(esg, opt);
    }

    /// Boundary vertices among v's inner-tree ancestors, depth-ascending.
    std::vector<VertexId> boundary_ancestors(VertexId v) const {
        std::vector<VertexId> out;
        const SkylineTree& inner = inner_[static_cast<size_t>(part_of_[v])];
        for (VertexId a : inner.node(v).ancestors)
            if (boundary_[a]) out.push_back(a);
        return out;
    }

    // --- extended mode -----------------------------------------------------

    struct MidEntry {
        std::vector<QueryHit> hits;
        SkylineSet set;
    };
    using MidCache = std::map<std::pair<VertexId, VertexId>, MidEntry>;

    const MidEntry& mid_entry(MidCache& cache, VertexId b, VertexId a) const {
        auto it = cache.find({b, a});
        if (it == cache.end()) {
            MidEntry entry;
            entry.hits = btree_.query_skyline(b, a);
            entry.set.reserve(entry.hits.size());
            for (const auto& h : entry.hits) entry.set.push_back(PathSummary{h.cost, Provenance{}});
            it = cache.emplace(std::make_pair(b, a), std::move(entry)).first;
        }
        return it->second;
    }

    /// Boundary-tree skyline between b and a, persisted for extended labels.
    SetView middle_set(VertexId b, VertexId a) { return mid_entry(middle_store_, b, a).set; }

    /// Label hops shared by both endpoints in extended mode.
    std::vector<VertexId> extended_hops(VertexId v) const {
        if (boundary_[v]) {
            std::vector<VertexId> out = btree_.node(v).ancestors;
            out.push_back(v);
            std::sort(out.begin(), out.end());
            return out;
        }
        return ext_hops_[v];
    }

    /// The skyline set between v and hop x in extended mode.
    SetView extended_label(VertexId v, VertexId x) const {
        if (boundary_[v]) return btree_.pair_set(v, x);
        const SkylineTree& inner = inner_[static_cast<size_t>(part_of_[v])];
        if (inner.member(x) && inner.is_ancestor(x, v)) return inner.pair_set(v, x);
        const auto& targets = ext_targets_[v];
        auto it = std::lower_bound(targets.begin(), targets.end(), x);
        require(it != targets.end() && *it == x, ErrorCode::InvalidVertex, "no extended label for hop");
        return ext_sets_[v][static_cast<size_t>(it - targets.begin())];
    }

    std::vector<HopInput> extended_query_hops(VertexId s, VertexId t) const {
        std::vector<VertexId> hs = extended_hops(s), ht = extended_hops(t);
        std::vector<VertexId> common;
        std::set_intersection(hs.begin(), hs.end(), ht.begin(), ht.end(), std::back_inserter(common));
        require(!common.empty(), ErrorCode::InvalidVertex, "no common extended hop");
        std::vector<HopInput> hops;
        hops.reserve(common.size());
        for (VertexId x : common) {
            HopInput in;
            in.hop = x;
            if (x == s) {
                in.left = extended_label(t, x);
                in.identity = true;
            } else if (x == t) {
                in.left = extended_label(s, x);
                in.identity = true;
            } else {
                in.left = extended_label(s, x);
                in.right = extended_label(t, x);
            }
            hops.push_back(in);
        }
        return hops;
    }

    SkylineSet extended_skyline(VertexId s, VertexId t, const ConcatConfig& cfg,
                                ConcatStats* stats) const {
        SkylineSet res = multi_hop_skyline(extended_query_hops(s, t), cfg, stats);
        for (auto& p : res) p.via = Provenance{};
        return res;
    }

    std::optional<Result> extended_mcsp(Result r, VertexId s, VertexId t,
                                        const std::vector<Value>& c, const ConcatConfig& cfg,
                                        ConcatStats* stats) const {
        auto best = best_under_constraints(extended_query_hops(s, t), c, cfg, stats);
        if (!best) return std::nullopt;
        r.kind = Result::Kind::Extended;
        r.cost = best->cost;
        r.hop = static_cast<VertexId>(best->via.via);
        if (best->via.right < 0) {
            // identity hop: the entries belong to the non-hop endpoint
            if (r.hop == s) {
                r.ext_left = -1;
                r.ext_right = best->via.left;
            } else {
                r.ext_left = best->via.left;
                r.ext_right = -1;
            }
        } else {
            r.ext_left = best->via.left;
            r.ext_right = best->via.right;
        }
        return r;
    }

    /// Vertex path v .. x where x is an extended-mode hop of v.
    std::vector<VertexId> extended_side_path(VertexId v, VertexId x, int32_t idx) const {
        auto clique_hook = [this](int32_t pid) { return clique_paths_[static_cast<size_t>(pid)]; };
        if (idx < 0) {
            require(v == x, ErrorCode::InvalidProvenance, "missing extended entry index");
            return {v};
        }
        if (boundary_[v]) {
            QueryHit hit;
            hit.kind = QueryHit::Kind::Direct;
            hit.hop = x;
            hit.left = idx;
            hit.cost = btree_.pair_set(v, x)[static_cast<size_t>(idx)].cost;
            return btree_.retrieve_path(v, x, hit, clique_hook);
        }
        const SkylineTree& inner = inner_[static_cast<size_t>(part_of_[v])];
        if (inner.member(x) && inner.is_ancestor(x, v)) {
            QueryHit hit;
            hit.kind = QueryHit::Kind::Direct;
            hit.hop = x;
            hit.left = idx;
            hit.cost = inner.pair_set(v, x)[static_cast<size_t>(idx)].cost;
            return inner.retrieve_path(v, x, hit, clique_hook);
        }
        const auto& targets = ext_targets_[v];
        auto it = std::lower_bound(targets.begin(), targets.end(), x);
        require(it != targets.end() && *it == x, ErrorCode::InvalidProvenance, "no extended entry");
        const SkylineSet& set = ext_sets_[v][static_cast<size_t>(it - targets.begin())];
        require(idx < static_cast<int32_t>(set.size()), ErrorCode::InvalidProvenance,
                "extended entry index out of range");
        const PathSummary& e = set[static_cast<size_t>(idx)];
        VertexId b = static_cast<VertexId>(e.via.via);
        std::vector<VertexId> path = side_path(v, b, e.via.left);
        auto mid_it = middle_store_.find({b, x});
        require(mid_it != middle_store_.end() && e.via.right >= 0 &&
                    e.via.right < static_cast<int32_t>(mid_it->second.hits.size()),
                ErrorCode::InvalidProvenance, "extended middle entry missing");
        std::vector<VertexId> mid =
            btree_.retrieve_path(b, x, mid_it->second.hits[static_cast<size_t>(e.via.right)], clique_hook);
        path.insert(path.end(), mid.begin() + 1, mid.end());
        return path;
    }

    // --- boundary mode (composed queries) -----------------------------------

    struct SidePair {
        VertexId b;
        SetView label;  // empty with zero == true means the endpoint itself
        bool zero = false;
    };

    std::vector<SidePair> side_hops(VertexId v) const {
        std::vector<SidePair> out;
        if (boundary_[v]) {
            out.push_back(SidePair{v, {}, true});
            return out;
        }
        const SkylineTree& inner = inner_[static_cast<size_t>(part_of_[v])];
        for (VertexId b : boundary_ancestors(v)) out.push_back(SidePair{b, inner.pair_set(v, b), false});
        return out;
    }

    NCube side_cube(const SidePair& sp) const {
        if (sp.zero) {
            NCube c;
            c.inf = CostVector(criteria_, 0);
            c.sup = CostVector(criteria_, 0);
            c.hop = sp.b;
            c.sup_fixed = true;
            return c;
        }
        return ncube_of_set(sp.label, sp.b);
    }

    /// Cube bound of the boundary-tree skyline between two boundary vertices
    /// without computing it: envelope of the per-hop composite cubes.
    NCube mid_cube(VertexId b, VertexId b2) const {
        if (b == b2) {
            NCube c;
            c.inf = CostVector(criteria_, 0);
            c.sup = CostVector(criteria_, 0);
            c.hop = b;
            c.sup_fixed = true;
            return c;
        }
        if (btree_.is_ancestor(b, b2) || btree_.is_ancestor(b2, b))
            return ncube_of_set(btree_.pair_set(b, b2), b);
        VertexId l = btree_.lca(b, b2);
        std::vector<NCube> per_hop;
        for (VertexId m : btree_.bag(l))
            per_hop.push_back(ncube_add(ncube_of_set(btree_.pair_set(b, m), m),
                                        ncube_of_set(btree_.pair_set(b2, m), m)));
        return ncube_envelope(per_hop);
    }

    SkylineSet composed_skyline(VertexId s, VertexId t, const ConcatConfig& cfg,
                                ConcatStats* stats) const {
        MidCache cache;
        std::vector<SidePair> hs = side_hops(s), ht = side_hops(t);
        struct Pair {
            const SidePair* a;
            const SidePair* bp;
            NCube cube;
        };
        std::vector<Pair> pairs;
        std::vector<NCube> cubes;
        for (const auto& a : hs)
            for (const auto& b : ht) {
                NCube c = ncube_add(ncube_add(side_cube(a), mid_cube(a.b, b.b)), side_cube(b));
                c.hop = a.b;
                pairs.push_back(Pair{&a, &b, c});
                cubes.push_back(c);
            }
        std::vector<size_t> order(pairs.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        if (cfg.cube_pruning) order = ncube_priority(cubes);

        SkylineSet result;
        CostVector running_sup;
        for (size_t oi : order) {
            const Pair& pr = pairs[oi];
            if (cfg.cube_pruning && !result.empty() && dominates(running_sup, pr.cube.inf)) {
                if (stats) stats->hops_skipped++;
                continue;
            }
            if (stats) stats->hops_concatenated++;
            SetView mid = mid_entry(cache, pr.a->b, pr.bp->b).set;
            SkylineSet left_mid;
            if (pr.a->zero) {
                left_mid.assign(mid.begin(), mid.end());
            } else {
                left_mid = concat_hop(pr.a->label, mid, pr.a->b, cfg, stats);
            }
            SkylineSet full;
            if (pr.bp->zero)
                full = std::move(left_mid);
            else
                full = concat_hop(left_mid, pr.bp->label, pr.bp->b, cfg, stats);
            for (auto& p : full) p.via = Provenance{};
            result = skyline_merge(result, full);
            if (!result.empty()) running_sup = detail::bounding_sup(result);
        }
        return result;
    }

    std::optional<Result> composed_mcsp(Result r, VertexId s, VertexId t, const std::vector<Value>& c,
                                        const ConcatConfig& cfg, ConcatStats* stats) const {
        MidCache cache;
        const int n = criteria_;
        auto feasible = [&](const CostVector& v) {
            for (int i = 1; i < n; ++i)
                if (v[i] > c[static_cast<size_t>(i - 1)]) return false;
            return true;
        };

        struct Filtered {
            SkylineSet set;
            std::vector<int32_t> orig;
        };
        auto prefilter = [&](SetView span) {
            Filtered f;
            for (size_t i = 0; i < span.size(); ++i)
                if (!cfg.constraint_pruning || feasible(span[i].cost)) {
                    f.set.push_back(span[i]);
                    f.orig.push_back(static_cast<int32_t>(i));
                }
            return f;
        };

        std::vector<SidePair> hs = side_hops(s), ht = side_hops(t);
        struct Pair {
            const SidePair* a;
            const SidePair* bp;
            NCube cube;
            bool dropped = false;
        };
        std::vector<Pair> pairs;
        for (const auto& a : hs)
            for (const auto& b : ht) {
                Pair pr{&a, &b, ncube_add(ncube_add(side_cube(a), mid_cube(a.b, b.b)), side_cube(b)),
                        false};
                pr.cube.hop = a.b;
                if (cfg.constraint_pruning) {
                    for (int i = 1; i < n; ++i)
                        if (pr.cube.inf[i] > c[static_cast<size_t>(i - 1)]) pr.dropped = true;
                    for (int i = 1; i < n; ++i)
                        if (pr.cube.sup[i] > c[static_cast<size_t>(i - 1)]) {
                            pr.cube.sup[i] = c[static_cast<size_t>(i - 1)];
                            pr.cube.sup_fixed = false;
                        }
                }
                if (pr.dropped && stats) stats->hops_skipped++;
                if (!pr.dropped) pairs.push_back(pr);
            }
        if (cfg.constraint_pruning) {
            // drop composites wholly dominated by another composite
            std::vector<uint8_t> dominated(pairs.size(), 0);
            for (size_t i = 0; i < pairs.size(); ++i)
                for (size_t j = 0; j < pairs.size(); ++j)
                    if (i != j && ncube_dominates(pairs[j].cube, pairs[i].cube)) dominated[i] = 1;
            std::vector<Pair> kept;
            for (size_t i = 0; i < pairs.size(); ++i) {
                if (dominated[i]) {
                    if (stats) stats->hops_skipped++;
                } else {
                    kept.push_back(pairs[i]);
                }
            }
            pairs = std::move(kept);
        }
        std::vector<NCube> cubes;
        cubes.reserve(pairs.size());
        for (const auto& pr : pairs) cubes.push_back(pr.cube);
        std::vector<size_t> order(pairs.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        if (cfg.cube_pruning) order = ncube_priority(cubes);

        std::optional<Result> best;
        for (size_t oi : order) {
            const Pair& pr = pairs[oi];
            if (cfg.constraint_pruning && best && pr.cube.inf.weight() > best->cost.weight()) {
                if (stats) stats->hops_skipped++;
                continue;
            }
            if (stats) stats->hops_concatenated++;
            VertexId b = pr.a->b, b2 = pr.bp->b;

            // s -> b -> b' skyline with entry back-references
            struct MidRef {
                CostVector cost;
                int32_t left;  // entry in L(s)[b], -1 when s == b
                int32_t mid;   // boundary hit index, -1 when b == b'
            };
            std::vector<MidRef> s1;
            SetView mid = mid_entry(cache, b, b2).set;
            if (pr.a->zero) {
                for (size_t m = 0; m < mid.size(); ++m)
                    if (!cfg.constraint_pruning || feasible(mid[m].cost))
                        s1.push_back(MidRef{mid[m].cost, -1, static_cast<int32_t>(m)});
            } else {
                Filtered fl = prefilter(pr.a->label);
                Filtered fm = prefilter(mid);
                SkylineSet combined = concat_hop(fl.set, fm.set, b, cfg, stats);
                for (const auto& p : combined)
                    s1.push_back(MidRef{p.cost, fl.orig[static_cast<size_t>(p.via.left)],
                                        fm.orig[static_cast<size_t>(p.via.right)]});
            }
            if (s1.empty()) continue;

            auto offer = [&](const CostVector& v, int32_t li, int32_t mi, int32_t ri) {
                if (!feasible(v)) return false;
                if (best && !canonical_less(v, best->cost)) return true;
                Result cand = r;
                cand.kind = Result::Kind::Composed;
                cand.cost = v;
                cand.b_s = b;
                cand.b_t = b2;
                cand.left_idx = li;
                if (mi >= 0)
                    cand.mid = mid_entry(cache, b, b2).hits[static_cast<size_t>(mi)];
                else
                    cand.mid = QueryHit{CostVector(n, 0), QueryHit::Kind::Zero, b, -1, -1};
                cand.right_idx = ri;
                best = cand;
                return true;
            };

            if (pr.bp->zero) {
                for (const auto& m : s1) {
                    if (stats) stats->pairs_generated++;
                    if (cfg.constraint_pruning && best && m.cost.weight() > best->cost.weight()) break;
                    if (offer(m.cost, m.left, m.mid, -1) && cfg.constraint_pruning) break;
                }
                continue;
            }
            Filtered fr = prefilter(pr.bp->label);
            if (fr.set.empty()) continue;
            SkylineSet s1set;
            s1set.reserve(s1.size());
            for (const auto& m : s1) s1set.push_back(PathSummary{m.cost, Provenance{}});
            detail::enumerate_pairs_ascending(
                s1set, fr.set, stats, [&](const CostVector& v, int32_t i, int32_t j) {
                    if (cfg.constraint_pruning && best && v.weight() > best->cost.weight()) return false;
                    bool accepted = offer(v, s1[static_cast<size_t>(i)].left,
                                          s1[static_cast<size_t>(i)].mid, fr.orig[static_cast<size_t>(j)]);
                    if (accepted && cfg.constraint_pruning) return false;
                    return true;
                });
        }
        return best;
    }

    /// Vertex path v .. b where b is a boundary hop of v (or v itself).
    std::vector<VertexId> side_path(VertexId v, VertexId b, int32_t idx) const {
        if (idx < 0) {
            require(v == b, ErrorCode::InvalidProvenance, "missing side entry index");
            return {v};
        }
        auto clique_hook = [this](int32_t pid) { return clique_paths_[static_cast<size_t>(pid)]; };
        const SkylineTree& inner = inner_[static_cast<size_t>(part_of_[v])];
        QueryHit hit;
        hit.kind = QueryHit::Kind::Direct;
        hit.hop = b;
        hit.left = idx;
        hit.cost = inner.pair_set(v, b)[static_cast<size_t>(idx)].cost;
        return inner.retrieve_path(v, b, hit, clique_hook);
    }

    size_t v_count_ = 0;
    int criteria_ = 0;
    LabelMode mode_ = LabelMode::Boundary;
    uint64_t tag_ = 0;
    std::vector<Partition> parts_;
    std::vector<int32_t> part_of_;
    std::vector<uint8_t> boundary_;
    std::vector<uint8_t> inner_phase_, inner_skip_;
    std::vector<SkylineTree> inner_;
    SkylineTree btree_;
    bool has_btree_ = false;
    std::vector<BoundaryClique> cliques_;
    std::vector<std::vector<VertexId>> clique_paths_;
    std::vector<std::vector<VertexId>> ext_targets_;
    std::vector<std::vector<SkylineSet>> ext_sets_;
    std::vector<std::vector<VertexId>> ext_hops_;
    MidCache middle_store_;  // persisted middles referenced by extended labels

public:
    // serialization access
    friend struct ForestSerde;
};

}  // namespace mcsp
