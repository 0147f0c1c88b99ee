#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "mcsp/cli.hpp"

namespace {

void split_csv(const std::string& s, std::vector<std::string>& out) {
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
}

std::vector<mcsp::Value> parse_values(const std::string& s) {
    std::vector<mcsp::Value> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(static_cast<mcsp::Value>(std::stoll(item)));
    return out;
}

void add_graph_options(CLI::App* app, mcsp::cli::GraphArgs& args, std::string& costs_csv) {
    app->add_option("--graph", args.graph, "DIMACS .gr weight file")->required();
    app->add_option("--costs", costs_csv, "comma-separated cost companion files");
    app->add_option("--synth", args.synth, "synthesize costs, mode:count:seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact multi-constraint shortest path queries over 2-hop skyline labels"};
    app.require_subcommand(1);

    mcsp::cli::BuildArgs build;
    std::string build_costs;
    auto* cmd_build = app.add_subcommand("build", "build and save an index");
    add_graph_options(cmd_build, build.graph, build_costs);
    cmd_build->add_option("--index", build.index_out, "output index file")->required();
    cmd_build->add_option("--forest", build.forest_partitions, "partition count (0 = single tree)");
    cmd_build->add_option("--labels", build.labels, "boundary|extended (forest only)");
    cmd_build->add_option("--seed", build.seed, "partitioner seed");

    mcsp::cli::QueryArgs query;
    std::string query_constraints;
    auto* cmd_query = app.add_subcommand("query", "answer one query from a saved index");
    cmd_query->add_option("--index", query.index, "index file")->required();
    cmd_query->add_option("--s", query.s, "source vertex")->required();
    cmd_query->add_option("--t", query.t, "target vertex")->required();
    cmd_query->add_option("--c", query_constraints, "comma-separated cost bounds");
    cmd_query->add_flag("--path", query.print_path, "append the vertex sequence");

    mcsp::cli::WorkloadArgs workload;
    std::string workload_costs;
    auto* cmd_workload = app.add_subcommand("gen-workload", "generate a constrained query workload");
    add_graph_options(cmd_workload, workload.graph, workload_costs);
    cmd_workload->add_option("--bucket", workload.bucket, "distance band Q1..Q5");
    cmd_workload->add_option("--ratio", workload.ratio, "constraint ratio r in [0,1]");
    cmd_workload->add_option("--count", workload.count, "number of queries");
    cmd_workload->add_option("--seed", workload.seed, "sampling seed");
    cmd_workload->add_option("--out", workload.out_path, "output workload file")->required();

    mcsp::cli::VerifyArgs verify;
    std::string verify_costs;
    auto* cmd_verify = app.add_subcommand("verify", "replay a workload through every engine");
    add_graph_options(cmd_verify, verify.graph, verify_costs);
    cmd_verify->add_option("--workload", verify.workload, "workload file")->required();
    cmd_verify->add_option("--forest", verify.forest_partitions, "partition count");
    cmd_verify->add_option("--seed", verify.seed, "partitioner seed");

    mcsp::cli::BenchArgs bench;
    std::string bench_costs, bench_algos;
    auto* cmd_bench = app.add_subcommand("bench", "time a workload per algorithm");
    add_graph_options(cmd_bench, bench.graph, bench_costs);
    cmd_bench->add_option("--workload", bench.workload, "workload file")->required();
    cmd_bench->add_option("--algos", bench_algos, "comma-separated: tree,forest,skydijk");
    cmd_bench->add_option("--forest", bench.forest_partitions, "partition count");
    cmd_bench->add_option("--labels", bench.labels, "boundary|extended");
    cmd_bench->add_option("--seed", bench.seed, "partitioner seed");
    cmd_bench->add_option("--threads", bench.threads, "concurrent query workers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_build->parsed()) {
            split_csv(build_costs, build.graph.costs);
            return mcsp::cli::cmd_build(build, std::cout);
        }
        if (cmd_query->parsed()) {
            query.constraints = parse_values(query_constraints);
            return mcsp::cli::cmd_query(query, std::cout);
        }
        if (cmd_workload->parsed()) {
            split_csv(workload_costs, workload.graph.costs);
            return mcsp::cli::cmd_gen_workload(workload, std::cout);
        }
        if (cmd_verify->parsed()) {
            split_csv(verify_costs, verify.graph.costs);
            return mcsp::cli::cmd_verify(verify, std::cout);
        }
        if (cmd_bench->parsed()) {
            split_csv(bench_costs, bench.graph.costs);
            if (!bench_algos.empty()) {
                bench.algos.clear();
                split_csv(bench_algos, bench.algos);
            }
            return mcsp::cli::cmd_bench(bench, std::cout);
        }
    } catch (const mcsp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
