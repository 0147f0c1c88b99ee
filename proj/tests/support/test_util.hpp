#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mcsp/graph.hpp"
#include "mcsp/rng.hpp"
#include "mcsp/skyline.hpp"

namespace mcsp::test {

// definitional dominance, independent of the library implementation
inline bool naive_dominates(const CostVector& a, const CostVector& b) {
    bool all_leq = true, any_lt = false;
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) all_leq = false;
        if (a[i] < b[i]) any_lt = true;
    }
    return all_leq && any_lt;
}

// O(k^2) skyline filter straight from the definition
inline std::vector<CostVector> naive_skyline(std::vector<CostVector> in) {
    std::sort(in.begin(), in.end(), [](const CostVector& a, const CostVector& b) {
        return canonical_less(a, b);
    });
    in.erase(std::unique(in.begin(), in.end()), in.end());
    std::vector<CostVector> out;
    for (const auto& c : in) {
        bool dominated = false;
        for (const auto& d : in)
            if (naive_dominates(d, c)) dominated = true;
        if (!dominated) out.push_back(c);
    }
    return out;
}

inline std::vector<CostVector> naive_cross_product(const SkylineSet& a, const SkylineSet& b) {
    std::vector<CostVector> out;
    for (const auto& p : a)
        for (const auto& q : b) out.push_back(checked_add(p.cost, q.cost));
    return out;
}

inline SkylineSet make_set(std::initializer_list<CostVector> costs) {
    SkylineSet s;
    for (const auto& c : costs) s.push_back(PathSummary{c, Provenance{}});
    return s;
}

inline CostVector random_vector(Rng& rng, int n, Value lo, Value hi) {
    CostVector c(n);
    for (int i = 0; i < n; ++i) c[i] = static_cast<Value>(rng.next_int(lo, hi));
    return c;
}

// random canonical skyline set of at most `limit` entries
inline SkylineSet random_skyline(Rng& rng, int n, size_t limit, Value lo = 1, Value hi = 40) {
    std::vector<PathSummary> raw;
    for (size_t i = 0; i < limit * 3; ++i)
        raw.push_back(PathSummary{random_vector(rng, n, lo, hi), Provenance{}});
    SkylineSet s = skyline_of(std::move(raw));
    if (s.size() > limit) s.resize(limit);  // prefix of a canonical skyline stays canonical
    return s;
}

// connected random graph: spanning tree plus extra edges
inline Graph random_connected_graph(size_t vertices, int criteria, uint64_t seed, Value max_value = 50,
                                    double extra_edge_factor = 1.0) {
    Rng rng(seed);
    Graph g(vertices, criteria);
    for (VertexId v = 1; v < vertices; ++v) {
        VertexId u = static_cast<VertexId>(rng.next_below(v));
        g.set_edge(u, v, random_vector(rng, criteria, 1, max_value));
    }
    auto extra = static_cast<size_t>(static_cast<double>(vertices) * extra_edge_factor);
    for (size_t e = 0; e < extra; ++e) {
        VertexId a = static_cast<VertexId>(rng.next_below(vertices));
        VertexId b = static_cast<VertexId>(rng.next_below(vertices));
        if (a == b || g.edge_between(a, b)) continue;
        g.set_edge(a, b, random_vector(rng, criteria, 1, max_value));
    }
    return g;
}

inline Graph grid_graph(size_t rows, size_t cols, int criteria, uint64_t seed, Value max_value = 20) {
    Rng rng(seed);
    Graph g(rows * cols, criteria);
    auto id = [&](size_t r, size_t c) { return static_cast<VertexId>(r * cols + c); };
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.set_edge(id(r, c), id(r, c + 1), random_vector(rng, criteria, 1, max_value));
            if (r + 1 < rows) g.set_edge(id(r, c), id(r + 1, c), random_vector(rng, criteria, 1, max_value));
        }
    return g;
}

// re-walk a vertex path on the graph and sum the edge vectors
inline CostVector walk_cost(const Graph& g, const std::vector<VertexId>& path) {
    CostVector acc(g.criteria_count(), 0);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        auto e = g.edge_between(path[i], path[i + 1]);
        require(e.has_value(), ErrorCode::InvalidValue, "path uses a missing edge");
        acc = checked_add(acc, *e);
    }
    return acc;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<size_t> idx(v.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(rx.size());
    my /= static_cast<double>(ry.size());
    double num = 0, dx = 0, dy = 0;
    for (size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

}  // namespace mcsp::test
