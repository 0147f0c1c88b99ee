#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mcsp/forest_index.hpp"
#include "mcsp/serialize.hpp"
#include "mcsp/tree_index.hpp"
#include "mcsp/workload.hpp"

namespace mcsp::cli {

struct GraphArgs {
    std::string graph;               // DIMACS weight file
    std::vector<std::string> costs;  // companion cost files
    std::string synth;               // mode:count:seed
};

inline Graph load_graph(const GraphArgs& args) {
    std::ifstream win(args.graph);
    require(win.good(), ErrorCode::InvalidValue, "cannot open graph file: " + args.graph);
    std::vector<std::ifstream> cost_files;
    std::vector<std::istream*> cost_ptrs;
    for (const auto& path : args.costs) {
        cost_files.emplace_back(path);
        require(cost_files.back().good(), ErrorCode::InvalidValue, "cannot open cost file: " + path);
    }
    for (auto& f : cost_files) cost_ptrs.push_back(&f);
    Graph g = load_dimacs(win, cost_ptrs);
    if (!args.synth.empty()) {
        std::istringstream ss(args.synth);
        std::string mode_s, count_s, seed_s;
        bool ok = static_cast<bool>(std::getline(ss, mode_s, ':')) &&
                  static_cast<bool>(std::getline(ss, count_s, ':')) &&
                  static_cast<bool>(std::getline(ss, seed_s));
        require(ok, ErrorCode::InvalidValue, "--synth expects mode:count:seed");
        g = synthesize_costs(g, synth_mode_from_string(mode_s), std::stoi(count_s),
                             std::stoull(seed_s));
    }
    return g;
}

struct BuildArgs {
    GraphArgs graph;
    std::string index_out;
    int forest_partitions = 0;  // 0 = single tree
    std::string labels = "boundary";
    uint64_t seed = 1;
};

/// Loaded index of either kind behind one query surface.
struct AnyIndex {
    IndexKind kind = IndexKind::Tree;
    TreeIndex tree;
    std::unique_ptr<ForestIndex> forest;

    int criteria() const { return kind == IndexKind::Tree ? tree.criteria() : forest->criteria(); }

    std::optional<std::pair<CostVector, std::vector<VertexId>>> query(
        VertexId s, VertexId t, const std::vector<Value>& constraints, bool want_path) const {
        if (kind == IndexKind::Tree) {
            auto r = tree.query_mcsp(s, t, constraints);
            if (!r) return std::nullopt;
            std::vector<VertexId> path;
            if (want_path) path = tree.retrieve_path(*r);
            return std::make_pair(r->hit.cost, std::move(path));
        }
        auto r = forest->query_mcsp(s, t, constraints);
        if (!r) return std::nullopt;
        std::vector<VertexId> path;
        if (want_path) path = forest->retrieve_path(*r);
        return std::make_pair(r->cost, std::move(path));
    }
};

inline ForestIndex::LabelMode label_mode_from_string(const std::string& s) {
    if (s == "boundary") return ForestIndex::LabelMode::Boundary;
    if (s == "extended") return ForestIndex::LabelMode::Extended;
    fail(ErrorCode::InvalidValue, "--labels expects boundary or extended");
}

inline int cmd_build(const BuildArgs& args, std::ostream& out) {
    Graph g = load_graph(args.graph);
    auto report = validate_graph(g);
    require(report.single_component(), ErrorCode::InvalidValue,
            "graph has " + std::to_string(report.components) + " components; need exactly one");
    auto t0 = std::chrono::steady_clock::now();
    std::ofstream file(args.index_out, std::ios::binary);
    require(file.good(), ErrorCode::InvalidValue, "cannot write index file: " + args.index_out);
    if (args.forest_partitions > 0) {
        ForestIndex idx;
        idx.build(g, args.forest_partitions, args.seed, label_mode_from_string(args.labels));
        save_index(file, idx);
        auto st = idx.stats();
        out << "forest index: " << st.partitions << " partitions, " << st.boundary_vertices
            << " boundary vertices, " << st.label_entries << " label entries\n";
    } else {
        TreeIndex idx;
        idx.build(g);
        save_index(file, idx);
        auto st = idx.stats();
        out << "tree index: height " << st.height << ", width " << st.width << ", "
            << st.label_entries << " label entries\n";
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    out << "built " << g.vertex_count() << " vertices, " << g.edge_count() << " edges, n="
        << g.criteria_count() << " in " << ms.count() << " ms -> " << args.index_out << "\n";
    return 0;
}

inline AnyIndex open_index(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    require(file.good(), ErrorCode::InvalidValue, "cannot open index file: " + path);
    AnyIndex idx;
    idx.kind = read_header(file);
    file.seekg(0);
    if (idx.kind == IndexKind::Tree) {
        load_index(file, idx.tree);
    } else {
        idx.forest = std::make_unique<ForestIndex>();
        load_index(file, *idx.forest);
    }
    return idx;
}

struct QueryArgs {
    std::string index;
    VertexId s = 0, t = 0;
    std::vector<Value> constraints;
    bool print_path = false;
};

inline int cmd_query(const QueryArgs& args, std::ostream& out) {
    AnyIndex idx = open_index(args.index);
    if (!args.constraints.empty())
        require(static_cast<int>(args.constraints.size()) == idx.criteria() - 1,
                ErrorCode::InvalidValue, "expected " + std::to_string(idx.criteria() - 1) +
                                             " constraint values");
    auto r = idx.query(args.s, args.t, args.constraints, args.print_path);
    if (!r) {
        out << "INFEASIBLE\n";
        return 0;
    }
    for (int i = 0; i < r->first.size(); ++i) out << (i ? " " : "") << r->first[i];
    if (args.print_path) {
        for (VertexId v : r->second) out << " " << v;
    }
    out << "\n";
    return 0;
}

struct WorkloadArgs {
    GraphArgs graph;
    std::string bucket = "Q3";
    double ratio = 0.5;
    int count = 100;
    uint64_t seed = 7;
    std::string out_path;
};

inline int cmd_gen_workload(const WorkloadArgs& args, std::ostream& out) {
    Graph g = load_graph(args.graph);
    require(args.bucket.size() == 2 && args.bucket[0] == 'Q', ErrorCode::InvalidValue,
            "--bucket expects Q1..Q5");
    WorkloadSpec spec;
    spec.bucket = args.bucket[1] - '0';
    spec.ratio = args.ratio;
    spec.count = args.count;
    spec.seed = args.seed;
    auto provider = [&](VertexId s, VertexId t) {
        std::vector<VertexId> targets{t};
        SkyDijkOptions opt;
        opt.targets = &targets;
        return sky_dijkstra(g, s, opt).sets[t];
    };
    auto queries = gen_workload(g, spec, provider);
    std::ofstream file(args.out_path);
    require(file.good(), ErrorCode::InvalidValue, "cannot write workload file: " + args.out_path);
    write_workload(file, queries);
    out << "wrote " << queries.size() << " queries to " << args.out_path << "\n";
    return 0;
}

struct VerifyArgs {
    GraphArgs graph;
    std::string workload;
    int forest_partitions = 2;
    uint64_t seed = 1;
};

/// Replays a workload through the forest (both label modes), the tree index,
/// and skyline Dijkstra; any disagreement is a defect.
inline int cmd_verify(const VerifyArgs& args, std::ostream& out) {
    Graph g = load_graph(args.graph);
    std::ifstream wf(args.workload);
    require(wf.good(), ErrorCode::InvalidValue, "cannot open workload file: " + args.workload);
    auto queries = read_workload(wf);

    TreeIndex tree;
    tree.build(g);
    ForestIndex forest_b, forest_e;
    forest_b.build(g, args.forest_partitions, args.seed, ForestIndex::LabelMode::Boundary);
    forest_e.build(g, args.forest_partitions, args.seed, ForestIndex::LabelMode::Extended);

    size_t mismatches = 0;
    for (const auto& q : queries) {
        auto want = mcsp_oracle(g, q);
        auto rt = tree.query_mcsp(q.s, q.t, q.constraints);
        auto rb = forest_b.query_mcsp(q.s, q.t, q.constraints);
        auto re = forest_e.query_mcsp(q.s, q.t, q.constraints);
        bool ok = want.has_value() == rt.has_value() && want.has_value() == rb.has_value() &&
                  want.has_value() == re.has_value();
        if (ok && want) {
            ok = want->cost == rt->hit.cost && want->cost == rb->cost && want->cost == re->cost;
        }
        if (!ok) {
            ++mismatches;
            out << "mismatch at query " << q.s << " -> " << q.t << "\n";
        }
    }
    out << "verify: " << queries.size() << " queries, " << mismatches << " mismatches\n";
    return mismatches == 0 ? 0 : 1;
}

struct BenchArgs {
    GraphArgs graph;
    std::string workload;
    std::vector<std::string> algos{"tree", "forest", "skydijk"};
    int forest_partitions = 2;
    std::string labels = "boundary";
    uint64_t seed = 1;
    int threads = 1;
};

struct BenchReport {
    struct Row {
        std::string algo;
        double build_ms = 0;
        size_t index_bytes = 0;
        double median_us = 0;
        double p95_us = 0;
    };
    std::vector<Row> rows;
    bool agreement = true;
};

inline double percentile(std::vector<double> xs, double q) {
    if (xs.empty()) return 0;
    std::sort(xs.begin(), xs.end());
    size_t i = static_cast<size_t>(q * static_cast<double>(xs.size() - 1));
    return xs[i];
}

inline BenchReport run_bench(const Graph& g, const std::vector<QuerySpec>& queries,
                             const BenchArgs& args) {
    BenchReport report;
    std::vector<std::vector<CostVector>> answers;  // per algo, per query (empty = infeasible)
    const CostVector infeasible_marker;

    auto run_queries = [&](auto&& fn) {
        std::vector<CostVector> ans(queries.size());
        std::vector<double> lat(queries.size());
        int workers = std::max(1, args.threads);
        std::vector<std::thread> pool;
        auto work = [&](int w) {
            for (size_t i = static_cast<size_t>(w); i < queries.size(); i += static_cast<size_t>(workers)) {
                auto t0 = std::chrono::steady_clock::now();
                auto r = fn(queries[i]);
                auto dt = std::chrono::steady_clock::now() - t0;
                lat[i] = std::chrono::duration<double, std::micro>(dt).count();
                ans[i] = r.value_or(infeasible_marker);
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& th : pool) th.join();
        }
        answers.push_back(std::move(ans));
        return lat;
    };

    for (const auto& algo : args.algos) {
        BenchReport::Row row;
        row.algo = algo;
        auto t0 = std::chrono::steady_clock::now();
        if (algo == "tree") {
            TreeIndex idx;
            idx.build(g);
            row.build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            std::ostringstream buf;
            save_index(buf, idx);
            row.index_bytes = buf.str().size();
            auto lat = run_queries([&](const QuerySpec& q) -> std::optional<CostVector> {
                auto r = idx.query_mcsp(q.s, q.t, q.constraints);
                if (!r) return std::nullopt;
                return r->hit.cost;
            });
            row.median_us = percentile(lat, 0.5);
            row.p95_us = percentile(lat, 0.95);
        } else if (algo == "forest") {
            ForestIndex idx;
            idx.build(g, args.forest_partitions, args.seed, label_mode_from_string(args.labels));
            row.build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            std::ostringstream buf;
            save_index(buf, idx);
            row.index_bytes = buf.str().size();
            auto lat = run_queries([&](const QuerySpec& q) -> std::optional<CostVector> {
                auto r = idx.query_mcsp(q.s, q.t, q.constraints);
                if (!r) return std::nullopt;
                return r->cost;
            });
            row.median_us = percentile(lat, 0.5);
            row.p95_us = percentile(lat, 0.95);
        } else if (algo == "skydijk") {
            row.build_ms = 0;
            row.index_bytes = 0;
            auto lat = run_queries([&](const QuerySpec& q) -> std::optional<CostVector> {
                auto r = mcsp_oracle(g, q);
                if (!r) return std::nullopt;
                return r->cost;
            });
            row.median_us = percentile(lat, 0.5);
            row.p95_us = percentile(lat, 0.95);
        } else {
            fail(ErrorCode::InvalidValue, "unknown algorithm: " + algo);
        }
        report.rows.push_back(row);
    }

    for (size_t a = 1; a < answers.size(); ++a)
        for (size_t i = 0; i < queries.size(); ++i)
            if (!(answers[a][i] == answers[0][i])) report.agreement = false;
    return report;
}

inline int cmd_bench(const BenchArgs& args, std::ostream& out) {
    Graph g = load_graph(args.graph);
    std::ifstream wf(args.workload);
    require(wf.good(), ErrorCode::InvalidValue, "cannot open workload file: " + args.workload);
    auto queries = read_workload(wf);
    BenchReport report = run_bench(g, queries, args);
    out << "algo        build_ms    index_bytes   median_us     p95_us\n";
    for (const auto& r : report.rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-10s %9.1f %14zu %11.2f %10.2f\n", r.algo.c_str(),
                      r.build_ms, r.index_bytes, r.median_us, r.p95_us);
        out << line;
    }
    out << "agreement: " << (report.agreement ? "yes" : "NO") << "\n";
    return report.agreement ? 0 : 1;
}

}  // namespace mcsp::cli
