#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "mcsp/serialize.hpp"
#include "support/test_util.hpp"

using namespace mcsp;
using namespace mcsp::test;

TEST_CASE("tree index round trip", "[serialize]") {
    Graph g = random_connected_graph(40, 3, 4100);
    TreeIndex built;
    built.build(g);
    std::ostringstream buf;
    save_index(buf, built);
    std::string bytes = buf.str();

    std::istringstream in(bytes);
    TreeIndex loaded;
    load_index(in, loaded);
    CHECK(loaded.criteria() == built.criteria());

    Rng rng(139);
    for (int q = 0; q < 150; ++q) {
        VertexId s = static_cast<VertexId>(rng.next_below(g.vertex_count()));
        VertexId t = static_cast<VertexId>(rng.next_below(g.vertex_count()));
        std::vector<Value> c{static_cast<Value>(rng.next_int(20, 200)),
                             static_cast<Value>(rng.next_int(20, 200))};
        CHECK(costs_of(loaded.query_skyline(s, t)) == costs_of(built.query_skyline(s, t)));
        auto a = built.query_mcsp(s, t, c);
        auto b = loaded.query_mcsp(s, t, c);
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
            CHECK(a->hit.cost == b->hit.cost);
            CHECK(built.retrieve_path(*a) == loaded.retrieve_path(*b));
        }
    }

    // saving the loaded index reproduces the bytes exactly
    std::ostringstream buf2;
    save_index(buf2, loaded);
    CHECK(buf2.str() == bytes);
}

TEST_CASE("forest index round trip, both modes", "[serialize]") {
    Graph g = random_connected_graph(40, 2, 4200);
    for (auto mode : {ForestIndex::LabelMode::Boundary, ForestIndex::LabelMode::Extended}) {
        ForestIndex built;
        built.build(g, 3, 5, mode);
        std::ostringstream buf;
        save_index(buf, built);
        std::string bytes = buf.str();

        std::istringstream in(bytes);
        ForestIndex loaded;
        load_index(in, loaded);
        CHECK(loaded.mode() == built.mode());

        Rng rng(149);
        for (int q = 0; q < 120; ++q) {
            VertexId s = static_cast<VertexId>(rng.next_below(g.vertex_count()));
            VertexId t = static_cast<VertexId>(rng.next_below(g.vertex_count()));
            std::vector<Value> c{static_cast<Value>(rng.next_int(20, 200))};
            CHECK(costs_of(loaded.query_skyline(s, t)) == costs_of(built.query_skyline(s, t)));
            auto a = built.query_mcsp(s, t, c);
            auto b = loaded.query_mcsp(s, t, c);
            REQUIRE(a.has_value() == b.has_value());
            if (a) {
                CHECK(a->cost == b->cost);
                CHECK(built.retrieve_path(*a) == loaded.retrieve_path(*b));
            }
        }

        std::ostringstream buf2;
        save_index(buf2, loaded);
        CHECK(buf2.str() == bytes);
    }
}

TEST_CASE("corrupt and mismatched files are rejected", "[serialize]") {
    Graph g = random_connected_graph(15, 2, 4300);
    TreeIndex built;
    built.build(g);
    std::ostringstream buf;
    save_index(buf, built);
    std::string bytes = buf.str();

    SECTION("magic mismatch") {
        std::string corrupt = bytes;
        corrupt[0] = 'X';
        std::istringstream in(corrupt);
        TreeIndex loaded;
        CHECK_THROWS_MATCHES(load_index(in, loaded), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::BadIndexFormat;
                             }));
    }
    SECTION("version mismatch") {
        std::string corrupt = bytes;
        corrupt[8] = static_cast<char>(index_version + 1);
        std::istringstream in(corrupt);
        TreeIndex loaded;
        CHECK_THROWS_MATCHES(load_index(in, loaded), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::VersionMismatch;
                             }));
    }
    SECTION("truncated payload") {
        std::string corrupt = bytes.substr(0, bytes.size() / 2);
        std::istringstream in(corrupt);
        TreeIndex loaded;
        CHECK_THROWS_AS(load_index(in, loaded), Error);
    }
    SECTION("kind mismatch") {
        std::istringstream in(bytes);
        ForestIndex loaded;
        CHECK_THROWS_MATCHES(load_index(in, loaded), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::BadIndexFormat;
                             }));
    }
}
