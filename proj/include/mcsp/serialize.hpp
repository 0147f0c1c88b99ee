#pragma once

#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "mcsp/forest_index.hpp"
#include "mcsp/tree_index.hpp"

namespace mcsp {

constexpr char index_magic[8] = {'M', 'C', 'S', 'P', '2', 'H', 'O', 'P'};
constexpr uint32_t index_version = 1;

enum class IndexKind : uint8_t { Tree = 0, Forest = 1 };

namespace io {

inline void put_bytes(std::ostream& out, const void* p, size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}
inline void get_bytes(std::istream& in, void* p, size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    require(static_cast<size_t>(in.gcount()) == n, ErrorCode::BadIndexFormat, "truncated index file");
}

template <typename T>
void put_pod(std::ostream& out, T v) {
    put_bytes(out, &v, sizeof(T));
}
template <typename T>
T get_pod(std::istream& in) {
    T v;
    get_bytes(in, &v, sizeof(T));
    return v;
}

inline void put_cost(std::ostream& out, const CostVector& c) {
    put_pod<uint8_t>(out, static_cast<uint8_t>(c.size()));
    for (int i = 0; i < c.size(); ++i) put_pod<int32_t>(out, c[i]);
}
inline CostVector get_cost(std::istream& in) {
    uint8_t n = get_pod<uint8_t>(in);
    if (n == 0) return CostVector{};
    require(n <= CostVector::max_criteria, ErrorCode::BadIndexFormat, "bad cost arity");
    CostVector c(n);
    for (int i = 0; i < n; ++i) c[i] = get_pod<int32_t>(in);
    return c;
}

inline void put_summary(std::ostream& out, const PathSummary& p) {
    put_cost(out, p.cost);
    put_pod<uint8_t>(out, static_cast<uint8_t>(p.via.kind));
    put_pod<int32_t>(out, p.via.via);
    put_pod<int32_t>(out, p.via.left);
    put_pod<int32_t>(out, p.via.right);
}
inline PathSummary get_summary(std::istream& in) {
    PathSummary p;
    p.cost = get_cost(in);
    p.via.kind = static_cast<Via>(get_pod<uint8_t>(in));
    p.via.via = get_pod<int32_t>(in);
    p.via.left = get_pod<int32_t>(in);
    p.via.right = get_pod<int32_t>(in);
    return p;
}

inline void put_set(std::ostream& out, const SkylineSet& s) {
    put_pod<uint64_t>(out, s.size());
    for (const auto& p : s) put_summary(out, p);
}
inline SkylineSet get_set(std::istream& in) {
    uint64_t n = get_pod<uint64_t>(in);
    SkylineSet s;
    s.reserve(n);
    for (uint64_t i = 0; i < n; ++i) s.push_back(get_summary(in));
    return s;
}

template <typename T>
void put_vec(std::ostream& out, const std::vector<T>& v) {
    put_pod<uint64_t>(out, v.size());
    for (const T& x : v) put_pod<T>(out, x);
}
template <typename T>
std::vector<T> get_vec(std::istream& in) {
    uint64_t n = get_pod<uint64_t>(in);
    std::vector<T> v;
    v.reserve(n);
    for (uint64_t i = 0; i < n; ++i) v.push_back(get_pod<T>(in));
    return v;
}

inline void put_hit(std::ostream& out, const QueryHit& h) {
    put_cost(out, h.cost);
    put_pod<uint8_t>(out, static_cast<uint8_t>(h.kind));
    put_pod<uint32_t>(out, h.hop);
    put_pod<int32_t>(out, h.left);
    put_pod<int32_t>(out, h.right);
}
inline QueryHit get_hit(std::istream& in) {
    QueryHit h;
    h.cost = get_cost(in);
    h.kind = static_cast<QueryHit::Kind>(get_pod<uint8_t>(in));
    h.hop = get_pod<uint32_t>(in);
    h.left = get_pod<int32_t>(in);
    h.right = get_pod<int32_t>(in);
    return h;
}

}  // namespace io

inline void save_tree_payload(std::ostream& out, const SkylineTree& tree) {
    io::put_pod<int32_t>(out, tree.criteria());
    io::put_pod<uint64_t>(out, tree.universe());
    io::put_pod<uint32_t>(out, tree.root());
    io::put_vec<uint32_t>(out, tree.contraction_order());
    for (VertexId v = 0; v < tree.universe(); ++v) {
        const TreeNode& n = tree.node(v);
        io::put_pod<uint8_t>(out, n.member ? 1 : 0);
        if (!n.member) continue;
        io::put_pod<uint32_t>(out, n.order);
        io::put_pod<int32_t>(out, n.parent);
        io::put_pod<uint32_t>(out, n.depth);
        io::put_vec<uint32_t>(out, n.ancestors);
        io::put_vec<uint32_t>(out, n.cut);
        for (const auto& set : n.cut_sets) io::put_set(out, set);
        const auto& pool = tree.labels().raw_pool(v);
        io::put_pod<uint64_t>(out, pool.size());
        for (const auto& p : pool) io::put_summary(out, p);
        io::put_vec<uint32_t>(out, tree.labels().raw_offsets(v));
    }
}

inline void load_tree_payload(std::istream& in, SkylineTree& tree) {
    int32_t criteria = io::get_pod<int32_t>(in);
    uint64_t universe = io::get_pod<uint64_t>(in);
    uint32_t root = io::get_pod<uint32_t>(in);
    std::vector<uint32_t> order = io::get_vec<uint32_t>(in);
    tree.restore_shell(universe, root, criteria, std::move(order));
    for (VertexId v = 0; v < universe; ++v) {
        if (!io::get_pod<uint8_t>(in)) continue;
        TreeNode& n = tree.mutable_node(v);
        n.member = true;
        n.pivot = v;
        n.order = io::get_pod<uint32_t>(in);
        n.parent = io::get_pod<int32_t>(in);
        n.depth = io::get_pod<uint32_t>(in);
        n.ancestors = io::get_vec<uint32_t>(in);
        n.cut = io::get_vec<uint32_t>(in);
        n.cut_sets.resize(n.cut.size());
        for (auto& set : n.cut_sets) set = io::get_set(in);
        uint64_t pool_size = io::get_pod<uint64_t>(in);
        std::vector<PathSummary> pool;
        pool.reserve(pool_size);
        for (uint64_t i = 0; i < pool_size; ++i) pool.push_back(io::get_summary(in));
        std::vector<uint32_t> offsets = io::get_vec<uint32_t>(in);
        tree.mutable_labels().set_raw(v, std::move(pool), std::move(offsets));
    }
}

inline void save_index(std::ostream& out, const TreeIndex& idx) {
    io::put_bytes(out, index_magic, sizeof(index_magic));
    io::put_pod<uint32_t>(out, index_version);
    io::put_pod<uint8_t>(out, static_cast<uint8_t>(IndexKind::Tree));
    save_tree_payload(out, idx.tree());
}

inline IndexKind read_header(std::istream& in) {
    char magic[8];
    io::get_bytes(in, magic, sizeof(magic));
    require(std::memcmp(magic, index_magic, sizeof(magic)) == 0, ErrorCode::BadIndexFormat,
            "not an index file");
    uint32_t version = io::get_pod<uint32_t>(in);
    require(version == index_version, ErrorCode::VersionMismatch,
            "index version " + std::to_string(version) + ", expected " + std::to_string(index_version));
    return static_cast<IndexKind>(io::get_pod<uint8_t>(in));
}

inline void load_index(std::istream& in, TreeIndex& idx) {
    require(read_header(in) == IndexKind::Tree, ErrorCode::BadIndexFormat,
            "index file holds a forest index");
    load_tree_payload(in, idx.mutable_tree());
    idx.set_tag_and_criteria(next_index_tag(), idx.mutable_tree().criteria());
}

/// Forest section: partition table, cliques with stored paths, inner trees,
/// boundary tree, label mode, extended tables.
struct ForestSerde {
    static void save(std::ostream& out, const ForestIndex& f) {
        io::put_bytes(out, index_magic, sizeof(index_magic));
        io::put_pod<uint32_t>(out, index_version);
        io::put_pod<uint8_t>(out, static_cast<uint8_t>(IndexKind::Forest));
        io::put_pod<int32_t>(out, f.criteria_);
        io::put_pod<uint64_t>(out, f.v_count_);
        io::put_pod<uint8_t>(out, static_cast<uint8_t>(f.mode_));
        io::put_pod<uint64_t>(out, f.parts_.size());
        for (const auto& p : f.parts_) {
            io::put_pod<int32_t>(out, p.id);
            io::put_vec<uint32_t>(out, p.vertices);
            io::put_vec<uint32_t>(out, p.boundary);
        }
        io::put_pod<uint64_t>(out, f.clique_paths_.size());
        for (const auto& path : f.clique_paths_) io::put_vec<uint32_t>(out, path);
        for (const auto& clique : f.cliques_) {
            io::put_pod<uint64_t>(out, clique.sets.size());
            for (const auto& [key, set] : clique.sets) {
                io::put_pod<uint32_t>(out, key.first);
                io::put_pod<uint32_t>(out, key.second);
                io::put_set(out, set);
            }
        }
        for (const auto& tree : f.inner_) save_tree_payload(out, tree);
        io::put_pod<uint8_t>(out, f.has_btree_ ? 1 : 0);
        if (f.has_btree_) save_tree_payload(out, f.btree_);
        for (VertexId v = 0; v < f.v_count_; ++v) {
            io::put_vec<uint32_t>(out, f.ext_targets_[v]);
            io::put_pod<uint64_t>(out, f.ext_sets_[v].size());
            for (const auto& set : f.ext_sets_[v]) io::put_set(out, set);
            io::put_vec<uint32_t>(out, f.ext_hops_[v]);
        }
        io::put_pod<uint64_t>(out, f.middle_store_.size());
        for (const auto& [key, entry] : f.middle_store_) {
            io::put_pod<uint32_t>(out, key.first);
            io::put_pod<uint32_t>(out, key.second);
            io::put_pod<uint64_t>(out, entry.hits.size());
            for (const auto& h : entry.hits) io::put_hit(out, h);
            io::put_set(out, entry.set);
        }
    }

    static void load(std::istream& in, ForestIndex& f) {
        require(read_header(in) == IndexKind::Forest, ErrorCode::BadIndexFormat,
                "index file holds a tree index");
        f.criteria_ = io::get_pod<int32_t>(in);
        f.v_count_ = io::get_pod<uint64_t>(in);
        f.mode_ = static_cast<ForestIndex::LabelMode>(io::get_pod<uint8_t>(in));
        uint64_t pc = io::get_pod<uint64_t>(in);
        f.parts_.resize(pc);
        for (auto& p : f.parts_) {
            p.id = io::get_pod<int32_t>(in);
            p.vertices = io::get_vec<uint32_t>(in);
            p.boundary = io::get_vec<uint32_t>(in);
        }
        f.part_of_.assign(f.v_count_, -1);
        f.boundary_.assign(f.v_count_, 0);
        for (const auto& p : f.parts_) {
            for (VertexId v : p.vertices) f.part_of_[v] = p.id;
            for (VertexId v : p.boundary) f.boundary_[v] = 1;
        }
        uint64_t paths = io::get_pod<uint64_t>(in);
        f.clique_paths_.resize(paths);
        for (auto& path : f.clique_paths_) path = io::get_vec<uint32_t>(in);
        f.cliques_.clear();
        f.cliques_.resize(pc);
        for (auto& clique : f.cliques_) {
            uint64_t pairs = io::get_pod<uint64_t>(in);
            for (uint64_t i = 0; i < pairs; ++i) {
                uint32_t a = io::get_pod<uint32_t>(in);
                uint32_t b = io::get_pod<uint32_t>(in);
                clique.sets.emplace(std::make_pair(a, b), io::get_set(in));
            }
        }
        f.inner_.clear();
        f.inner_.resize(pc);
        for (size_t p = 0; p < pc; ++p) {
            load_tree_payload(in, f.inner_[p]);
            f.inner_[p].set_external_pair(f.make_clique_resolver(static_cast<int32_t>(p)));
        }
        f.has_btree_ = io::get_pod<uint8_t>(in) != 0;
        if (f.has_btree_) load_tree_payload(in, f.btree_);
        f.ext_targets_.assign(f.v_count_, {});
        f.ext_sets_.assign(f.v_count_, {});
        f.ext_hops_.assign(f.v_count_, {});
        for (VertexId v = 0; v < f.v_count_; ++v) {
            f.ext_targets_[v] = io::get_vec<uint32_t>(in);
            uint64_t sets = io::get_pod<uint64_t>(in);
            f.ext_sets_[v].resize(sets);
            for (auto& set : f.ext_sets_[v]) set = io::get_set(in);
            f.ext_hops_[v] = io::get_vec<uint32_t>(in);
        }
        f.middle_store_.clear();
        uint64_t mids = io::get_pod<uint64_t>(in);
        for (uint64_t i = 0; i < mids; ++i) {
            uint32_t a = io::get_pod<uint32_t>(in);
            uint32_t b = io::get_pod<uint32_t>(in);
            ForestIndex::MidEntry entry;
            uint64_t hits = io::get_pod<uint64_t>(in);
            entry.hits.reserve(hits);
            for (uint64_t h = 0; h < hits; ++h) entry.hits.push_back(io::get_hit(in));
            entry.set = io::get_set(in);
            f.middle_store_.emplace(std::make_pair(a, b), std::move(entry));
        }
        f.tag_ = next_index_tag();
    }
};

inline void save_index(std::ostream& out, const ForestIndex& idx) { ForestSerde::save(out, idx); }
inline void load_index(std::istream& in, ForestIndex& idx) { ForestSerde::load(in, idx); }

}  // namespace mcsp
