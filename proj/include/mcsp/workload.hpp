#pragma once

#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <vector>

#include "mcsp/graph.hpp"
#include "mcsp/rng.hpp"
#include "mcsp/sky_dijkstra.hpp"

namespace mcsp {

/// Plain single-criterion shortest distances over the weight dimension.
inline std::vector<int64_t> dijkstra_weights(const Graph& g, VertexId s) {
    std::vector<int64_t> dist(g.vertex_count(), -1);
    using Entry = std::pair<int64_t, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    dist[s] = 0;
    heap.push({0, s});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d != dist[v]) continue;
        for (const auto& e : g.edges(v)) {
            int64_t nd = d + e.cost[0];
            if (dist[e.to] < 0 || nd < dist[e.to]) {
                dist[e.to] = nd;
                heap.push({nd, e.to});
            }
        }
    }
    return dist;
}

/// Farthest settled distance from a seeded random vertex; stands in for the
/// network diameter when bucketing OD pairs.
inline int64_t estimate_diameter(const Graph& g, uint64_t seed) {
    Rng rng(seed);
    VertexId s = static_cast<VertexId>(rng.next_below(g.vertex_count()));
    int64_t best = 0;
    for (int64_t d : dijkstra_weights(g, s)) best = std::max(best, d);
    return best;
}

struct WorkloadSpec {
    int bucket = 3;      // Q1..Q5
    double ratio = 0.5;  // constraint tightness r
    int count = 100;
    uint64_t seed = 1;
};

/// OD pairs whose shortest distance falls in the bucket's band, each with
/// constraints C_i = round(r*C_max_i + (1-r)*C_min_i) taken from the pair's
/// skyline set: C_min is the per-criterion minimum, C_max the cost of the
/// minimum-weight entry.
inline std::vector<QuerySpec> gen_workload(
    const Graph& g, const WorkloadSpec& spec,
    const std::function<SkylineSet(VertexId, VertexId)>& skyline_provider) {
    require(spec.bucket >= 1 && spec.bucket <= 5, ErrorCode::InvalidValue, "bucket must be Q1..Q5");
    require(spec.count >= 1, ErrorCode::InvalidValue, "query count must be positive");
    require(g.vertex_count() >= 2, ErrorCode::InvalidValue, "graph too small for workloads");
    const int n = g.criteria_count();
    int64_t d_max = estimate_diameter(g, spec.seed);
    require(d_max > 0, ErrorCode::BucketEmpty, "graph has zero diameter");
    double lo = static_cast<double>(d_max) / std::pow(2.0, 6 - spec.bucket);
    double hi = static_cast<double>(d_max) / std::pow(2.0, 5 - spec.bucket);

    Rng rng(spec.seed);
    std::map<VertexId, std::vector<int64_t>> dist_cache;
    auto dist_from = [&](VertexId s) -> const std::vector<int64_t>& {
        auto it = dist_cache.find(s);
        if (it == dist_cache.end()) it = dist_cache.emplace(s, dijkstra_weights(g, s)).first;
        return it->second;
    };

    std::vector<QuerySpec> out;
    uint64_t attempts = 0;
    const uint64_t max_attempts = std::max<uint64_t>(200000, static_cast<uint64_t>(spec.count) * 400);
    while (static_cast<int>(out.size()) < spec.count) {
        require(attempts++ < max_attempts, ErrorCode::BucketEmpty,
                "no OD pairs fall into the requested distance bucket");
        VertexId s = static_cast<VertexId>(rng.next_below(g.vertex_count()));
        VertexId t = static_cast<VertexId>(rng.next_below(g.vertex_count()));
        if (s == t) continue;
        int64_t d = dist_from(s)[t];
        if (d < 0 || static_cast<double>(d) < lo || static_cast<double>(d) >= hi) continue;
        SkylineSet sky = skyline_provider(s, t);
        if (sky.empty()) continue;
        QuerySpec q;
        q.s = s;
        q.t = t;
        q.constraints.resize(static_cast<size_t>(n - 1));
        for (int i = 1; i < n; ++i) {
            Value c_min = sky[0].cost[i];
            for (const auto& p : sky) c_min = std::min(c_min, p.cost[i]);
            Value c_max = sky[0].cost[i];  // minimum-weight entry is first
            double c = spec.ratio * c_max + (1.0 - spec.ratio) * c_min;
            q.constraints[static_cast<size_t>(i - 1)] = static_cast<Value>(std::llround(c));
        }
        out.push_back(std::move(q));
    }
    return out;
}

/// One query per line: `s t C_1 ... C_{n-1}`.
inline void write_workload(std::ostream& out, const std::vector<QuerySpec>& queries) {
    for (const auto& q : queries) {
        out << q.s << " " << q.t;
        for (Value c : q.constraints) out << " " << c;
        out << "\n";
    }
}

inline std::vector<QuerySpec> read_workload(std::istream& in) {
    std::vector<QuerySpec> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        QuerySpec q;
        require(static_cast<bool>(ls >> q.s >> q.t), ErrorCode::InvalidValue,
                "malformed workload line: " + line);
        Value c;
        while (ls >> c) q.constraints.push_back(c);
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace mcsp
