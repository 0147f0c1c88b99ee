#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "mcsp/graph.hpp"
#include "support/test_util.hpp"

using namespace mcsp;
using namespace mcsp::test;

namespace {

Graph load(const std::string& weights, const std::vector<std::string>& costs = {}) {
    std::istringstream win(weights);
    std::vector<std::istringstream> cost_streams;
    for (const auto& c : costs) cost_streams.emplace_back(c);
    std::vector<std::istream*> ptrs;
    for (auto& s : cost_streams) ptrs.push_back(&s);
    return load_dimacs(win, ptrs);
}

}  // namespace

TEST_CASE("dimacs loading", "[graph]") {
    SECTION("weight plus one cost source") {
        Graph g = load("p sp 2 2\na 1 2 803\na 2 1 803\n", {"a 1 2 120\na 2 1 120\n"});
        CHECK(g.vertex_count() == 2);
        CHECK(g.criteria_count() == 2);
        CHECK(g.edge_count() == 1);
        auto e = g.edge_between(0, 1);
        REQUIRE(e.has_value());
        CHECK(*e == CostVector{803, 120});
        CHECK(g.merge_warnings() == 0);
    }
    SECTION("cost source missing an edge") {
        CHECK_THROWS_MATCHES(load("p sp 3 2\na 1 2 5\na 2 3 5\n", {"a 1 2 7\n"}), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::MismatchedEdgeSet;
                             }));
    }
    SECTION("cost source with a foreign edge") {
        CHECK_THROWS_AS(load("p sp 2 1\na 1 2 5\n", {"a 1 2 7\na 2 2 1\n"}), Error);
    }
    SECTION("no edges") {
        CHECK_THROWS_MATCHES(load("p sp 2 0\n"), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::EmptyGraph;
                             }));
    }
    SECTION("negative value") {
        CHECK_THROWS_MATCHES(load("p sp 2 1\na 1 2 -4\n"), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::InvalidValue;
                             }));
    }
    SECTION("disagreeing directions keep the componentwise minimum") {
        Graph g = load("p sp 2 2\na 1 2 10\na 2 1 8\n", {"a 1 2 3\na 2 1 5\n"});
        auto e = g.edge_between(0, 1);
        REQUIRE(e.has_value());
        CHECK(*e == CostVector{8, 3});
        CHECK(g.merge_warnings() == 1);
    }
    SECTION("one-directional arc is kept with a warning") {
        Graph g = load("p sp 2 1\na 1 2 9\n");
        CHECK(g.edge_between(1, 0).has_value());
        CHECK(g.merge_warnings() == 1);
    }
    SECTION("parallel arcs collapse to the smallest-weight skyline head") {
        Graph g = load("p sp 2 3\na 1 2 9\na 1 2 4\na 2 1 4\n");
        auto e = g.edge_between(0, 1);
        REQUIRE(e.has_value());
        CHECK((*e)[0] == 4);
    }
}

TEST_CASE("dimacs round trip", "[graph]") {
    Rng rng(61);
    for (int iter = 0; iter < 20; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        Graph g = random_connected_graph(30, n, 1000 + static_cast<uint64_t>(iter));
        std::ostringstream wout;
        std::vector<std::ostringstream> couts(static_cast<size_t>(n - 1));
        std::vector<std::ostream*> cptrs;
        for (auto& c : couts) cptrs.push_back(&c);
        write_dimacs(g, wout, cptrs);

        std::vector<std::string> cost_strings;
        for (auto& c : couts) cost_strings.push_back(c.str());
        Graph back = load(wout.str(), cost_strings);
        REQUIRE(back.vertex_count() == g.vertex_count());
        REQUIRE(back.criteria_count() == g.criteria_count());
        REQUIRE(back.edge_count() == g.edge_count());
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            REQUIRE(back.edges(v).size() == g.edges(v).size());
            for (size_t i = 0; i < g.edges(v).size(); ++i) {
                CHECK(back.edges(v)[i].to == g.edges(v)[i].to);
                CHECK(back.edges(v)[i].cost == g.edges(v)[i].cost);
            }
        }
    }
}

TEST_CASE("cost synthesis", "[graph]") {
    Graph g = random_connected_graph(80, 1, 999, 1000, 2.0);

    auto weight_and_cost = [](const Graph& gg, int k) {
        std::vector<double> w, c;
        for (VertexId u = 0; u < gg.vertex_count(); ++u)
            for (const auto& e : gg.edges(u))
                if (u < e.to) {
                    w.push_back(e.cost[0]);
                    c.push_back(e.cost[k]);
                }
        return std::make_pair(w, c);
    };

    SECTION("positive correlation") {
        Graph s = synthesize_costs(g, SynthMode::Positive, 1, 5);
        auto [w, c] = weight_and_cost(s, 1);
        CHECK(spearman(w, c) > 0.5);
    }
    SECTION("negative correlation") {
        Graph s = synthesize_costs(g, SynthMode::Negative, 1, 5);
        auto [w, c] = weight_and_cost(s, 1);
        CHECK(spearman(w, c) < -0.5);
    }
    SECTION("determinism and bounds") {
        Graph a = synthesize_costs(g, SynthMode::Random, 2, 77);
        Graph b = synthesize_costs(g, SynthMode::Random, 2, 77);
        Value w_max = 0;
        for (VertexId u = 0; u < g.vertex_count(); ++u)
            for (const auto& e : g.edges(u)) w_max = std::max(w_max, e.cost[0]);
        for (VertexId u = 0; u < a.vertex_count(); ++u) {
            REQUIRE(a.edges(u).size() == b.edges(u).size());
            for (size_t i = 0; i < a.edges(u).size(); ++i) {
                CHECK(a.edges(u)[i].cost == b.edges(u)[i].cost);
                for (int k = 1; k < a.criteria_count(); ++k) {
                    CHECK(a.edges(u)[i].cost[k] >= 1);
                    CHECK(static_cast<double>(a.edges(u)[i].cost[k]) <= (w_max + 1) * 1.2);
                }
            }
        }
        CHECK(validate_graph(a).symmetric);
    }
    SECTION("zero criteria to add is invalid") {
        CHECK_THROWS_AS(synthesize_costs(g, SynthMode::Positive, 0, 1), Error);
    }
    SECTION("criteria budget is enforced") {
        CHECK_THROWS_AS(synthesize_costs(g, SynthMode::Positive, CostVector::max_criteria, 1), Error);
    }
}

TEST_CASE("graph validation", "[graph]") {
    SECTION("cycle is one symmetric component") {
        Graph g(3, 2);
        g.set_edge(0, 1, {1, 1});
        g.set_edge(1, 2, {1, 1});
        g.set_edge(0, 2, {1, 1});
        auto r = validate_graph(g);
        CHECK(r.components == 1);
        CHECK(r.symmetric);
        CHECK(r.criteria_count == 2);
    }
    SECTION("two disjoint edges form two components") {
        Graph g(4, 2);
        g.set_edge(0, 1, {1, 1});
        g.set_edge(2, 3, {1, 1});
        CHECK(validate_graph(g).components == 2);
    }
    SECTION("asymmetric adjacency is reported") {
        Graph g(2, 2);
        g.add_arc_unchecked(0, 1, {1, 1});
        auto r = validate_graph(g);
        CHECK_FALSE(r.symmetric);
        CHECK(r.symmetry_violations == 1);
    }
}
