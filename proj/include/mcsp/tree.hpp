#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "mcsp/graph.hpp"
#include "mcsp/hop_pruning.hpp"
#include "mcsp/skyline.hpp"

namespace mcsp {

/// Input to a skyline tree decomposition: a subset of a global vertex space
/// with skyline path sets as edges. Keys are canonically ordered (u < v).
struct EdgeSetGraph {
    size_t universe = 0;
    int criteria = 0;
    std::vector<VertexId> members;  // ascending
    std::map<std::pair<VertexId, VertexId>, SkylineSet> edges;

    static EdgeSetGraph from_graph(const Graph& g) {
        EdgeSetGraph esg;
        esg.universe = g.vertex_count();
        esg.criteria = g.criteria_count();
        esg.members.resize(g.vertex_count());
        for (VertexId v = 0; v < g.vertex_count(); ++v) esg.members[v] = v;
        for (VertexId u = 0; u < g.vertex_count(); ++u)
            for (const auto& e : g.edges(u))
                if (u < e.to)
                    esg.edges.emplace(std::make_pair(u, e.to),
                                      SkylineSet{PathSummary{e.cost, Provenance{Via::Edge, no_vertex, -1, -1}}});
        return esg;
    }
};

/// Minimum-degree elimination order of a plain graph; ties break to the
/// smallest vertex id. Fill edges are inserted structurally, so the returned
/// permutation matches the order a full skyline contraction would use.
inline std::vector<VertexId> min_degree_order(const Graph& g) {
    const size_t v_count = g.vertex_count();
    std::vector<std::vector<VertexId>> adj(v_count);
    for (VertexId u = 0; u < v_count; ++u)
        for (const auto& e : g.edges(u)) adj[u].push_back(e.to);
    for (auto& a : adj) std::sort(a.begin(), a.end());

    using Key = std::pair<size_t, VertexId>;
    std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
    std::vector<uint8_t> gone(v_count, 0);
    for (VertexId v = 0; v < v_count; ++v) heap.push({adj[v].size(), v});

    std::vector<VertexId> order;
    order.reserve(v_count);
    while (!heap.empty()) {
        auto [deg, v] = heap.top();
        heap.pop();
        if (gone[v] || deg != adj[v].size()) continue;  // stale entry
        gone[v] = 1;
        order.push_back(v);
        for (VertexId a : adj[v]) {
            auto& na = adj[a];
            na.erase(std::lower_bound(na.begin(), na.end(), v));
        }
        for (size_t i = 0; i < adj[v].size(); ++i) {
            for (size_t j = i + 1; j < adj[v].size(); ++j) {
                VertexId a = adj[v][i], b = adj[v][j];
                auto it = std::lower_bound(adj[a].begin(), adj[a].end(), b);
                if (it == adj[a].end() || *it != b) {
                    adj[a].insert(it, b);
                    adj[b].insert(std::lower_bound(adj[b].begin(), adj[b].end(), a), a);
                }
            }
        }
        for (VertexId a : adj[v]) heap.push({adj[a].size(), a});
        adj[v].clear();
        adj[v].shrink_to_fit();
    }
    return order;
}

struct TreeNode {
    bool member = false;
    VertexId pivot = 0;
    int32_t parent = no_vertex;
    uint32_t order = 0;
    uint32_t depth = 0;
    std::vector<VertexId> cut;          // ascending; every member has larger order
    std::vector<SkylineSet> cut_sets;   // frozen skyline shortcuts pivot -> cut[k]
    std::vector<VertexId> ancestors;    // root .. parent; ancestors[d] has depth d

    int slot_of(VertexId u) const {
        auto it = std::lower_bound(cut.begin(), cut.end(), u);
        require(it != cut.end() && *it == u, ErrorCode::InvalidProvenance, "vertex not in cut");
        return static_cast<int>(it - cut.begin());
    }
};

/// Offset-directory label storage: one contiguous entry pool per vertex,
/// sliced by ancestor depth.
class LabelTable {
public:
    void resize(size_t universe) {
        pool_.assign(universe, {});
        offsets_.assign(universe, {});
    }

    void begin_vertex(VertexId v, size_t ancestor_count) {
        offsets_[v].assign(ancestor_count + 1, 0);
    }

    void push_set(VertexId v, size_t ancestor_index, SkylineSet&& set) {
        auto& pool = pool_[v];
        pool.insert(pool.end(), std::make_move_iterator(set.begin()), std::make_move_iterator(set.end()));
        offsets_[v][ancestor_index + 1] = static_cast<uint32_t>(pool.size());
    }

    SetView get(VertexId v, size_t ancestor_index) const {
        const auto& off = offsets_[v];
        require(ancestor_index + 1 < off.size(), ErrorCode::InvalidProvenance, "no such ancestor label");
        return SetView{pool_[v].data() + off[ancestor_index], pool_[v].data() + off[ancestor_index + 1]};
    }

    bool has(VertexId v) const { return !offsets_[v].empty(); }
    size_t entry_count() const {
        size_t c = 0;
        for (const auto& p : pool_) c += p.size();
        return c;
    }

    const std::vector<PathSummary>& raw_pool(VertexId v) const { return pool_[v]; }
    const std::vector<uint32_t>& raw_offsets(VertexId v) const { return offsets_[v]; }
    void set_raw(VertexId v, std::vector<PathSummary> pool, std::vector<uint32_t> offsets) {
        pool_[v] = std::move(pool);
        offsets_[v] = std::move(offsets);
    }

private:
    std::vector<std::vector<PathSummary>> pool_;
    std::vector<std::vector<uint32_t>> offsets_;
};

/// One retrievable query answer of a tree-shaped index.
struct QueryHit {
    enum class Kind : uint8_t { Zero, Direct, Hop };
    CostVector cost;
    Kind kind = Kind::Zero;
    VertexId hop = 0;   // Hop: common hop vertex
    int32_t left = -1;  // Direct: entry index; Hop: index in L(s)[hop]
    int32_t right = -1; // Hop: index in L(t)[hop]
};

/// Tree decomposition with skyline shortcuts plus cascaded 2-hop labels.
/// Works over an arbitrary edge-set graph so the same machinery serves the
/// whole-graph index, per-partition inner trees, and the boundary tree.
class SkylineTree {
public:
    /// Exact skyline set between two member vertices provided from outside
    /// the label table (boundary cliques); null when not applicable.
    using ExternalPairFn = std::function<const SkylineSet*(VertexId, VertexId)>;
    /// Shortcut set to reuse instead of concatenating pivot's neighbour pair.
    using InheritFn = std::function<const SkylineSet*(VertexId pivot, VertexId a, VertexId b)>;
    /// Unpacks a stored path id into a vertex sequence (clique entries).
    using CliqueUnpackFn = std::function<std::vector<VertexId>(int32_t path_id)>;

    struct BuildOptions {
        const std::vector<uint8_t>* phase = nullptr;            // contraction phases per vertex
        const std::vector<VertexId>* explicit_order = nullptr;  // overrides degree order
        const std::vector<uint8_t>* skip_labels = nullptr;      // no labels stored for these
        ExternalPairFn external_pair;
        InheritFn inherited;
        uint8_t record_shortcut_phase = 0xff;  // record pair concats of this phase
    };

    struct ShortcutRecord {
        VertexId pivot, a, b;
        SkylineSet set;
    };

    void build(const EdgeSetGraph& in) { build(in, BuildOptions{}); }

    void build(const EdgeSetGraph& in, const BuildOptions& opt) {
        universe_ = in.universe;
        nodes_.assign(universe_, TreeNode{});
        labels_.resize(universe_);
        contraction_order_.clear();
        recorded_.clear();
        opt_external_pair_ = opt.external_pair;
        contract(in, opt);
        form_tree();
        assign_labels(opt);
    }

    size_t universe() const { return universe_; }
    bool member(VertexId v) const { return v < universe_ && nodes_[v].member; }
    const TreeNode& node(VertexId v) const { return nodes_[v]; }
    VertexId root() const { return root_; }
    const std::vector<VertexId>& contraction_order() const { return contraction_order_; }
    const std::vector<ShortcutRecord>& recorded_shortcuts() const { return recorded_; }
    const LabelTable& labels() const { return labels_; }

    bool is_ancestor(VertexId a, VertexId v) const {
        const TreeNode& nv = nodes_[v];
        return a != v && nodes_[a].depth < nv.depth && nv.ancestors[nodes_[a].depth] == a;
    }

    /// Lowest node that is an ancestor-or-self of both vertices.
    VertexId lca(VertexId u, VertexId v) const {
        require(member(u) && member(v), ErrorCode::InvalidVertex, "vertex not in tree");
        auto at = [&](VertexId x, uint32_t d) {
            return d < nodes_[x].depth ? nodes_[x].ancestors[d] : x;
        };
        uint32_t lo = 0, hi = std::min(nodes_[u].depth, nodes_[v].depth);
        while (lo < hi) {
            uint32_t mid = (lo + hi + 1) / 2;
            if (at(u, mid) == at(v, mid))
                lo = mid;
            else
                hi = mid - 1;
        }
        return at(u, lo);
    }

    /// All vertices of a tree node's bag: pivot plus its cut, ascending.
    std::vector<VertexId> bag(VertexId v) const {
        std::vector<VertexId> out = nodes_[v].cut;
        out.insert(std::lower_bound(out.begin(), out.end(), v), v);
        return out;
    }

    /// Skyline set between a member and one of its hop vertices, resolved
    /// from labels or the external provider. Returns an empty view for the
    /// vertex itself (handled by callers as the identity factor).
    SetView pair_set(VertexId v, VertexId a) const {
        if (opt_external_pair_) {
            if (const SkylineSet* s = opt_external_pair_(v, a)) return SetView{*s};
        }
        VertexId deeper = nodes_[v].depth >= nodes_[a].depth ? v : a;
        VertexId shallower = deeper == v ? a : v;
        require(is_ancestor(shallower, deeper), ErrorCode::InvalidVertex, "hop is not an ancestor");
        return labels_.get(deeper, nodes_[shallower].depth);
    }

    std::vector<QueryHit> query_skyline(VertexId s, VertexId t,
                                        const ConcatConfig& cfg = default_concat_config(),
                                        ConcatStats* stats = nullptr) const {
        require(member(s) && member(t), ErrorCode::InvalidVertex, "query vertex not in tree");
        const int n = criteria();
        if (s == t) return {QueryHit{CostVector(n, 0), QueryHit::Kind::Zero, s, -1, -1}};
        if (is_ancestor(t, s) || is_ancestor(s, t)) {
            VertexId deeper = is_ancestor(t, s) ? s : t;
            VertexId anc = deeper == s ? t : s;
            SetView span = pair_set(deeper, anc);
            std::vector<QueryHit> out;
            out.reserve(span.size());
            for (size_t i = 0; i < span.size(); ++i)
                out.push_back(QueryHit{span[i].cost, QueryHit::Kind::Direct, anc,
                                       static_cast<int32_t>(i), -1});
            return out;
        }
        std::vector<HopInput> hops = query_hops(s, t);
        SkylineSet res = multi_hop_skyline(hops, cfg, stats);
        std::vector<QueryHit> out;
        out.reserve(res.size());
        for (const auto& p : res)
            out.push_back(QueryHit{p.cost, QueryHit::Kind::Hop, static_cast<VertexId>(p.via.via),
                                   p.via.left, p.via.right});
        return out;
    }

    std::optional<QueryHit> query_mcsp(VertexId s, VertexId t, const std::vector<Value>& constraints,
                                       const ConcatConfig& cfg = default_concat_config(),
                                       ConcatStats* stats = nullptr,
                                       std::vector<HopTrace>* trace = nullptr) const {
        require(member(s) && member(t), ErrorCode::InvalidVertex, "query vertex not in tree");
        const int n = criteria();
        std::vector<Value> c = constraints;
        if (c.empty()) c.assign(static_cast<size_t>(n - 1), INT32_MAX);
        require(static_cast<int>(c.size()) == n - 1, ErrorCode::InvalidValue, "bad constraint arity");
        if (s == t) return QueryHit{CostVector(n, 0), QueryHit::Kind::Zero, s, -1, -1};
        if (is_ancestor(t, s) || is_ancestor(s, t)) {
            VertexId deeper = is_ancestor(t, s) ? s : t;
            VertexId anc = deeper == s ? t : s;
            SetView span = pair_set(deeper, anc);
            for (size_t i = 0; i < span.size(); ++i) {
                bool ok = true;
                for (int k = 1; k < n; ++k)
                    if (span[i].cost[k] > c[static_cast<size_t>(k - 1)]) ok = false;
                if (ok)
                    return QueryHit{span[i].cost, QueryHit::Kind::Direct, anc,
                                    static_cast<int32_t>(i), -1};
            }
            return std::nullopt;
        }
        std::vector<HopInput> hops = query_hops(s, t);
        auto res = best_under_constraints(hops, c, cfg, stats, trace);
        if (!res) return std::nullopt;
        return QueryHit{res->cost, QueryHit::Kind::Hop, static_cast<VertexId>(res->via.via),
                        res->via.left, res->via.right};
    }

    /// Unpacks a hit into the full vertex sequence from s to t.
    std::vector<VertexId> retrieve_path(VertexId s, VertexId t, const QueryHit& hit,
                                        const CliqueUnpackFn& clique_unpack = {}) const {
        switch (hit.kind) {
            case QueryHit::Kind::Zero:
                require(s == t, ErrorCode::InvalidProvenance, "zero path with distinct endpoints");
                return {s};
            case QueryHit::Kind::Direct: {
                VertexId deeper = hit.hop == t ? s : t;
                std::vector<VertexId> path = unpack_pair(deeper, hit.hop, hit.left, clique_unpack);
                return oriented(std::move(path), s, t);
            }
            case QueryHit::Kind::Hop: {
                std::vector<VertexId> left = unpack_pair(s, hit.hop, hit.left, clique_unpack);
                std::vector<VertexId> right = unpack_pair(t, hit.hop, hit.right, clique_unpack);
                left = oriented(std::move(left), s, hit.hop);
                right = oriented(std::move(right), hit.hop, t);
                left.insert(left.end(), right.begin() + 1, right.end());
                return left;
            }
        }
        fail(ErrorCode::InvalidProvenance, "unknown hit kind");
    }

    struct Stats {
        size_t members = 0;
        size_t height = 0;     // deepest node depth + 1
        size_t width = 0;      // largest bag size
        size_t label_entries = 0;
        size_t shortcut_entries = 0;
    };

    Stats stats() const {
        Stats s;
        for (VertexId v = 0; v < universe_; ++v) {
            if (!nodes_[v].member) continue;
            ++s.members;
            s.height = std::max(s.height, static_cast<size_t>(nodes_[v].depth) + 1);
            s.width = std::max(s.width, nodes_[v].cut.size() + 1);
            for (const auto& set : nodes_[v].cut_sets) s.shortcut_entries += set.size();
        }
        s.label_entries = labels_.entry_count();
        return s;
    }

    int criteria() const { return criteria_; }

    // serialization hooks (see serialize.hpp)
    TreeNode& mutable_node(VertexId v) { return nodes_[v]; }
    LabelTable& mutable_labels() { return labels_; }
    void restore_shell(size_t universe, VertexId root, int criteria,
                       std::vector<VertexId> contraction_order) {
        universe_ = universe;
        root_ = root;
        criteria_ = criteria;
        contraction_order_ = std::move(contraction_order);
        nodes_.assign(universe_, TreeNode{});
        labels_.resize(universe_);
    }
    void set_external_pair(ExternalPairFn fn) { opt_external_pair_ = std::move(fn); }

private:
    std::vector<HopInput> query_hops(VertexId s, VertexId t) const {
        VertexId l = lca(s, t);
        std::vector<VertexId> hop_vertices = bag(l);
        std::vector<HopInput> hops;
        hops.reserve(hop_vertices.size());
        for (VertexId h : hop_vertices) {
            // neither endpoint is an ancestor of the other here, so every bag
            // vertex is a proper ancestor of both
            HopInput in;
            in.hop = h;
            in.left = pair_set(s, h);
            in.right = pair_set(t, h);
            hops.push_back(in);
        }
        return hops;
    }

    static std::vector<VertexId> oriented(std::vector<VertexId> path, VertexId from, VertexId to) {
        require(!path.empty(), ErrorCode::InvalidProvenance, "empty unpacked path");
        if (path.front() == from && path.back() == to) return path;
        std::reverse(path.begin(), path.end());
        require(path.front() == from && path.back() == to, ErrorCode::InvalidProvenance,
                "unpacked path endpoints mismatch");
        return path;
    }

    /// Vertex sequence of entry `idx` of the skyline set between v and hop u.
    std::vector<VertexId> unpack_pair(VertexId v, VertexId u, int32_t idx,
                                      const CliqueUnpackFn& clique_unpack) const {
        if (v == u) return {v};
        if (opt_external_pair_) {
            if (const SkylineSet* s = opt_external_pair_(v, u)) {
                require(idx >= 0 && idx < static_cast<int32_t>(s->size()), ErrorCode::InvalidProvenance,
                        "external entry index out of range");
                return unpack_summary(v, u, (*s)[static_cast<size_t>(idx)], clique_unpack);
            }
        }
        VertexId deeper = nodes_[v].depth >= nodes_[u].depth ? v : u;
        VertexId shallower = deeper == v ? u : v;
        SetView span = labels_.get(deeper, nodes_[shallower].depth);
        require(idx >= 0 && idx < static_cast<int32_t>(span.size()), ErrorCode::InvalidProvenance,
                "label entry index out of range");
        std::vector<VertexId> path = unpack_label_entry(deeper, shallower, span[static_cast<size_t>(idx)],
                                                        clique_unpack);
        return oriented(std::move(path), v, u);
    }

    std::vector<VertexId> unpack_label_entry(VertexId v, VertexId a, const PathSummary& e,
                                             const CliqueUnpackFn& clique_unpack) const {
        require(e.via.kind == Via::Label, ErrorCode::InvalidProvenance, "label entry expected");
        VertexId u = static_cast<VertexId>(e.via.via);
        std::vector<VertexId> left = unpack_cut_entry(v, u, e.via.left, clique_unpack);
        if (e.via.right < 0) {
            require(u == a, ErrorCode::InvalidProvenance, "self-hop label to a different ancestor");
            return left;
        }
        std::vector<VertexId> right = unpack_pair(u, a, e.via.right, clique_unpack);
        right = oriented(std::move(right), u, a);
        left = oriented(std::move(left), v, u);
        left.insert(left.end(), right.begin() + 1, right.end());
        return left;
    }

    /// Path v .. w for entry `idx` of the frozen cut set of X(v) toward w.
    std::vector<VertexId> unpack_cut_entry(VertexId v, VertexId w, int32_t idx,
                                           const CliqueUnpackFn& clique_unpack) const {
        const TreeNode& node = nodes_[v];
        int slot = node.slot_of(w);
        const SkylineSet& set = node.cut_sets[static_cast<size_t>(slot)];
        require(idx >= 0 && idx < static_cast<int32_t>(set.size()), ErrorCode::InvalidProvenance,
                "cut entry index out of range");
        return unpack_summary(v, w, set[static_cast<size_t>(idx)], clique_unpack);
    }

    std::vector<VertexId> unpack_summary(VertexId v, VertexId w, const PathSummary& e,
                                         const CliqueUnpackFn& clique_unpack) const {
        switch (e.via.kind) {
            case Via::Edge:
                return {v, w};
            case Via::Clique: {
                require(static_cast<bool>(clique_unpack), ErrorCode::InvalidProvenance,
                        "clique entry without an unpacker");
                std::vector<VertexId> p = clique_unpack(e.via.via);
                return oriented(std::move(p), v, w);
            }
            case Via::Shortcut: {
                VertexId x = static_cast<VertexId>(e.via.via);
                VertexId lo = std::min(v, w), hi = std::max(v, w);
                std::vector<VertexId> a = unpack_cut_entry(x, lo, e.via.left, clique_unpack);
                std::vector<VertexId> b = unpack_cut_entry(x, hi, e.via.right, clique_unpack);
                a = oriented(std::move(a), x, lo);
                std::reverse(a.begin(), a.end());  // lo .. x
                b = oriented(std::move(b), x, hi);
                a.insert(a.end(), b.begin() + 1, b.end());  // lo .. x .. hi
                return oriented(std::move(a), v, w);
            }
            default:
                fail(ErrorCode::InvalidProvenance, "entry cannot be unpacked");
        }
    }

    void contract(const EdgeSetGraph& in, const BuildOptions& opt) {
        criteria_ = in.criteria;
        std::vector<std::map<VertexId, SkylineSet>> adj(universe_);
        for (const auto& [key, set] : in.edges) {
            require(!set.empty(), ErrorCode::InvalidValue, "empty edge set");
            require(set[0].cost.size() == criteria_, ErrorCode::InvalidValue, "edge criteria mismatch");
            adj[key.first][key.second] = set;
            adj[key.second][key.first] = set;
        }
        for (VertexId v : in.members) nodes_[v].member = true;
        require(!in.edges.empty() || in.members.size() <= 1, ErrorCode::EmptyGraph,
                "no edges to contract");

        std::vector<uint8_t> contracted(universe_, 0);
        uint32_t counter = 0;

        auto contract_one = [&](VertexId v) {
            TreeNode& node = nodes_[v];
            node.pivot = v;
            node.order = counter++;
            contraction_order_.push_back(v);
            contracted[v] = 1;
            auto& nbrs = adj[v];
            node.cut.reserve(nbrs.size());
            node.cut_sets.reserve(nbrs.size());
            for (auto& [u, set] : nbrs) {
                node.cut.push_back(u);
                node.cut_sets.push_back(std::move(set));
                adj[u].erase(v);
            }
            nbrs.clear();
            uint8_t phase = opt.phase ? (*opt.phase)[v] : 0;
            for (size_t i = 0; i < node.cut.size(); ++i) {
                for (size_t j = i + 1; j < node.cut.size(); ++j) {
                    VertexId a = node.cut[i], b = node.cut[j];
                    SkylineSet cand;
                    const SkylineSet* reuse =
                        opt.inherited ? opt.inherited(v, a, b) : nullptr;
                    if (reuse) {
                        cand = *reuse;
                    } else {
                        cand = concat_hop(node.cut_sets[i], node.cut_sets[j], v);
                        for (auto& p : cand) p.via.kind = Via::Shortcut;
                        if (opt.record_shortcut_phase == phase)
                            recorded_.push_back(ShortcutRecord{v, a, b, cand});
                    }
                    auto it = adj[a].find(b);
                    if (it == adj[a].end()) {
                        adj[a][b] = cand;
                        adj[b][a] = std::move(cand);
                    } else {
                        SkylineSet merged = skyline_merge(it->second, cand);
                        it->second = merged;
                        adj[b][a] = std::move(merged);
                    }
                }
            }
        };

        if (opt.explicit_order) {
            for (VertexId v : *opt.explicit_order) {
                require(nodes_[v].member && !contracted[v], ErrorCode::InvalidValue,
                        "bad explicit contraction order");
                contract_one(v);
            }
            for (VertexId v : in.members)
                require(contracted[v], ErrorCode::InvalidValue, "explicit order misses a member");
        } else {
            using Key = std::tuple<uint8_t, size_t, VertexId>;  // phase, degree, id
            std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
            auto key_of = [&](VertexId v) {
                return Key{opt.phase ? (*opt.phase)[v] : 0, adj[v].size(), v};
            };
            for (VertexId v : in.members) heap.push(key_of(v));
            while (!heap.empty()) {
                auto [ph, deg, v] = heap.top();
                heap.pop();
                if (contracted[v] || deg != adj[v].size()) continue;
                std::vector<VertexId> touched;
                for (const auto& [u, set] : adj[v]) touched.push_back(u);
                contract_one(v);
                // only the contracted vertex's neighbours change degree
                for (VertexId u : touched)
                    if (!contracted[u]) heap.push(key_of(u));
            }
        }
    }

    void form_tree() {
        root_ = no_vertex_id();
        for (VertexId v = 0; v < universe_; ++v) {
            TreeNode& node = nodes_[v];
            if (!node.member) continue;
            if (node.cut.empty()) {
                require(root_ == no_vertex_id(), ErrorCode::InvalidValue,
                        "disconnected input: several contraction roots");
                root_ = v;
                node.parent = no_vertex;
                continue;
            }
            VertexId best = node.cut[0];
            for (VertexId u : node.cut)
                if (nodes_[u].order < nodes_[best].order) best = u;
            node.parent = static_cast<int32_t>(best);
        }
        require(root_ != no_vertex_id(), ErrorCode::InvalidValue, "no contraction root");

        std::vector<std::vector<VertexId>> children(universe_);
        for (VertexId v = 0; v < universe_; ++v)
            if (nodes_[v].member && nodes_[v].parent >= 0)
                children[static_cast<size_t>(nodes_[v].parent)].push_back(v);
        for (auto& c : children) std::sort(c.begin(), c.end());

        bfs_order_.clear();
        std::vector<VertexId> queue{root_};
        nodes_[root_].depth = 0;
        for (size_t head = 0; head < queue.size(); ++head) {
            VertexId v = queue[head];
            bfs_order_.push_back(v);
            for (VertexId c : children[v]) {
                nodes_[c].depth = nodes_[v].depth + 1;
                nodes_[c].ancestors = nodes_[v].ancestors;
                nodes_[c].ancestors.push_back(v);
                queue.push_back(c);
            }
        }
    }

    void assign_labels(const BuildOptions& opt) {
        for (VertexId v : bfs_order_) {
            if (v == root_) {
                labels_.begin_vertex(v, 0);
                continue;
            }
            if (opt.skip_labels && (*opt.skip_labels)[v]) continue;
            const TreeNode& node = nodes_[v];
            labels_.begin_vertex(v, node.ancestors.size());
            for (size_t ai = 0; ai < node.ancestors.size(); ++ai) {
                VertexId a = node.ancestors[ai];
                std::vector<HopInput> hops;
                hops.reserve(node.cut.size());
                for (size_t k = 0; k < node.cut.size(); ++k) {
                    VertexId u = node.cut[k];
                    HopInput in;
                    in.hop = u;
                    in.left = node.cut_sets[k];
                    if (u == a)
                        in.identity = true;
                    else
                        in.right = pair_set(u, a);
                    hops.push_back(in);
                }
                labels_.push_set(v, ai, multi_hop_skyline(hops));
            }
        }
    }

    static constexpr VertexId no_vertex_id() { return static_cast<VertexId>(-1); }

    size_t universe_ = 0;
    int criteria_ = 0;
    VertexId root_ = static_cast<VertexId>(-1);
    std::vector<TreeNode> nodes_;
    std::vector<VertexId> contraction_order_;
    std::vector<VertexId> bfs_order_;
    LabelTable labels_;
    std::vector<ShortcutRecord> recorded_;
    ExternalPairFn opt_external_pair_;
};

}  // namespace mcsp
