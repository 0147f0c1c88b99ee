#include <catch2/catch_amalgamated.hpp>

#include "mcsp/hop_pruning.hpp"
#include "support/test_util.hpp"

using namespace mcsp;
using namespace mcsp::test;

TEST_CASE("hop rectangle fixtures", "[pruning]") {
    auto r1 = hop_rectangle(make_set({{2, 4}, {4, 3}}), make_set({{4, 7}, {6, 2}}), 1);
    CHECK(r1.top_left.cost == CostVector{6, 11});
    CHECK(r1.bottom_right.cost == CostVector{10, 5});

    auto r5 = hop_rectangle(make_set({{1, 2}}), make_set({{3, 5}, {4, 4}, {5, 3}}), 5);
    CHECK(r5.top_left.cost == CostVector{4, 7});
    CHECK(r5.bottom_right.cost == CostVector{6, 5});

    auto r8 = hop_rectangle(make_set({{1, 2}}), make_set({{1, 1}}), 8);
    CHECK(r8.top_left.cost == CostVector{2, 3});
    CHECK(r8.bottom_right.cost == CostVector{2, 3});

    CHECK_THROWS_AS(hop_rectangle({}, make_set({{1, 1}}), 0), Error);
}

TEST_CASE("rectangle pruning keeps only the dominating hop", "[pruning]") {
    std::vector<HopRectangle> rects;
    rects.push_back(hop_rectangle(make_set({{2, 4}, {4, 3}}), make_set({{4, 7}, {6, 2}}), 1));
    rects.push_back(hop_rectangle(make_set({{1, 2}}), make_set({{3, 5}, {4, 4}, {5, 3}}), 5));
    rects.push_back(hop_rectangle(make_set({{1, 2}}), make_set({{1, 1}}), 8));
    CHECK(prune_hops_rectangle(rects) == std::vector<VertexId>{8});

    CHECK(prune_hops_rectangle({rects[0]}) == std::vector<VertexId>{1});
    CHECK(prune_hops_rectangle({}).empty());
}

TEST_CASE("incomparable rectangles are both kept and both contribute", "[pruning]") {
    SkylineSet l1 = make_set({{1, 9}}), r1 = make_set({{1, 9}});
    SkylineSet l2 = make_set({{9, 1}}), r2 = make_set({{9, 1}});
    std::vector<HopRectangle> rects{hop_rectangle(l1, r1, 0), hop_rectangle(l2, r2, 1)};
    CHECK(prune_hops_rectangle(rects) == std::vector<VertexId>{0, 1});
    std::vector<HopInput> hops{HopInput{0, l1, r1, false}, HopInput{1, l2, r2, false}};
    auto full = multi_hop_skyline(hops);
    CHECK(costs_of(full) == std::vector<CostVector>{{2, 18}, {18, 2}});
}

TEST_CASE("ncube fixtures", "[pruning]") {
    auto rows = make_set({{2, 4, 10, 2}, {2, 4, 9, 3}, {3, 7, 7, 10}, {5, 3, 9, 3}, {6, 6, 8, 4}});
    NCube c = ncube_of_set(rows, 0);
    CHECK(c.inf == CostVector{2, 3, 7, 2});
    CHECK(c.sup == CostVector{6, 7, 10, 10});

    NCube point = hop_ncube(make_set({{1, 2, 3}}), make_set({{2, 3, 4}}), 0);
    CHECK(point.inf == CostVector{3, 5, 7});
    CHECK(point.sup == point.inf);
    CHECK_FALSE(point.sup_fixed);

    NCube flat = hop_ncube(make_set({{1, 2}}), make_set({{2, 3}}), 0);
    CHECK(flat.sup_fixed);

    CHECK_THROWS_AS(hop_ncube({}, make_set({{1, 1}}), 0), Error);
}

TEST_CASE("every concatenated skyline path lies inside the hop cube", "[pruning]") {
    Rng rng(37);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        SkylineSet a = random_skyline(rng, n, 12);
        SkylineSet b = random_skyline(rng, n, 12);
        NCube cube = hop_ncube(a, b, 0);
        for (const auto& c : naive_skyline(naive_cross_product(a, b))) {
            CHECK(leq_all(cube.inf, c));
            CHECK(leq_all(c, cube.sup));
        }
    }
}

TEST_CASE("ncube dominance fixtures", "[pruning]") {
    auto cube = [](std::initializer_list<Value> inf, std::initializer_list<Value> sup, VertexId hop) {
        NCube c;
        c.inf = CostVector(inf);
        c.sup = CostVector(sup);
        c.hop = hop;
        return c;
    };
    // intervals transcribed per dimension: first values are inf, second sup
    NCube g1 = cube({4, 5, 5, 1}, {7, 7, 8, 9}, 1);
    NCube g2 = cube({3, 4, 4, 3}, {6, 6, 7, 10}, 2);
    NCube g3 = cube({8, 8, 9, 10}, {12, 10, 12, 13}, 3);
    NCube g4 = cube({7, 8, 9, 12}, {12, 10, 14, 14}, 4);
    CHECK(ncube_dominates(g2, g3));
    CHECK(ncube_dominates(g2, g4));
    CHECK_FALSE(ncube_dominates(g1, g2));
    CHECK_FALSE(ncube_dominates(g2, g1));
    CHECK_FALSE(ncube_dominates(g1, g1));  // nondegenerate cube never dominates itself

    // survivors' envelope and composition with the next stage
    NCube env = ncube_envelope({g1, g2});
    CHECK(env.inf == CostVector{3, 4, 4, 1});
    CHECK(env.sup == CostVector{7, 7, 8, 10});
    NCube g1p = cube({3, 2, 5, 1}, {5, 6, 9, 4}, 5);
    NCube total = ncube_add(env, g1p);
    CHECK(total.inf == CostVector{6, 6, 9, 2});
    CHECK(total.sup == CostVector{12, 13, 17, 14});
}

TEST_CASE("2D cube dominance matches rectangle dominance", "[pruning]") {
    Rng rng(41);
    for (int iter = 0; iter < 300; ++iter) {
        SkylineSet a1 = random_skyline(rng, 2, 6), b1 = random_skyline(rng, 2, 6);
        SkylineSet a2 = random_skyline(rng, 2, 6), b2 = random_skyline(rng, 2, 6);
        NCube c1 = hop_ncube(a1, b1, 0), c2 = hop_ncube(a2, b2, 1);
        HopRectangle r1 = hop_rectangle(a1, b1, 0), r2 = hop_rectangle(a2, b2, 1);
        // a rectangle is dominated when some point covers its best corners
        bool rect_dom = r1.bottom_right.cost[0] <= r2.top_left.cost[0] &&
                        r1.top_left.cost[1] <= r2.bottom_right.cost[1] &&
                        (r1.bottom_right.cost[0] < r2.top_left.cost[0] ||
                         r1.top_left.cost[1] < r2.bottom_right.cost[1]);
        CHECK(ncube_dominates(c1, c2) == rect_dom);
    }
}

TEST_CASE("ncube priority order", "[pruning]") {
    auto cube = [](std::initializer_list<Value> inf, std::initializer_list<Value> sup, VertexId hop) {
        NCube c;
        c.inf = CostVector(inf);
        c.sup = CostVector(sup);
        c.hop = hop;
        return c;
    };
    // g1 wins two infimum dimensions; g3 and g2 tie on one each, so the
    // supremum wins decide; the result mirrors the three-cube walkthrough
    NCube g1 = cube({1, 9, 9, 1}, {20, 12, 20, 12}, 1);
    NCube g2 = cube({9, 1, 9, 9}, {20, 20, 20, 20}, 2);
    NCube g3 = cube({8, 8, 1, 8}, {12, 19, 12, 19}, 3);
    auto ordered = ncube_order({g2, g1, g3});
    REQUIRE(ordered.size() == 3);
    CHECK(ordered[0].hop == 1);
    CHECK(ordered[1].hop == 3);
    CHECK(ordered[2].hop == 2);

    // order is a property of the set, not of the input permutation
    auto ordered2 = ncube_order({g3, g2, g1});
    for (size_t i = 0; i < 3; ++i) CHECK(ordered[i].hop == ordered2[i].hop);

    auto single = ncube_order({g2});
    CHECK(single[0].hop == 2);
}

TEST_CASE("multi-hop skyline fixtures", "[pruning]") {
    SkylineSet l1 = make_set({{2, 4}, {4, 3}}), r1 = make_set({{4, 7}, {6, 2}});
    SkylineSet l5 = make_set({{1, 2}}), r5 = make_set({{3, 5}, {4, 4}, {5, 3}});
    SkylineSet l8 = make_set({{1, 2}}), r8 = make_set({{1, 1}});
    std::vector<HopInput> hops{HopInput{1, l1, r1, false}, HopInput{5, l5, r5, false},
                               HopInput{8, l8, r8, false}};
    auto result = multi_hop_skyline(hops);
    CHECK(costs_of(result) == std::vector<CostVector>{{2, 3}});

    auto one = multi_hop_skyline({HopInput{1, l1, r1, false}});
    CHECK(costs_of(one) == costs_of(concat_hop_2d(l1, r1, 1)));
}

TEST_CASE("multi-hop skyline equals the unpruned union, all configurations", "[pruning]") {
    Rng rng(43);
    for (int iter = 0; iter < 150; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        size_t hop_count = 1 + rng.next_below(5);
        std::vector<SkylineSet> lefts, rights;
        std::vector<HopInput> hops;
        for (size_t h = 0; h < hop_count; ++h) {
            lefts.push_back(random_skyline(rng, n, 8));
            rights.push_back(random_skyline(rng, n, 8));
        }
        std::vector<CostVector> all;
        for (size_t h = 0; h < hop_count; ++h) {
            hops.push_back(HopInput{static_cast<VertexId>(h), lefts[h], rights[h], false});
            for (const auto& c : naive_cross_product(lefts[h], rights[h])) all.push_back(c);
        }
        auto want = naive_skyline(all);
        for (bool rect : {true, false})
            for (bool cube : {true, false}) {
                ConcatConfig cfg;
                cfg.rectangle_pruning = rect;
                cfg.cube_pruning = cube;
                CHECK(costs_of(multi_hop_skyline(hops, cfg)) == want);
            }
    }
}

TEST_CASE("pruned runs generate no more candidates than unpruned runs", "[pruning]") {
    Rng rng(47);
    for (int iter = 0; iter < 100; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        std::vector<SkylineSet> lefts, rights;
        std::vector<HopInput> hops;
        for (size_t h = 0; h < 4; ++h) {
            lefts.push_back(random_skyline(rng, n, 8));
            rights.push_back(random_skyline(rng, n, 8));
            hops.push_back(HopInput{static_cast<VertexId>(h), lefts[h], rights[h], false});
        }
        ConcatConfig off;
        off.rectangle_pruning = off.cube_pruning = off.constraint_pruning = off.rank_threshold = false;
        ConcatStats base;
        multi_hop_skyline(hops, off, &base);
        for (int layer = 0; layer < 4; ++layer) {
            ConcatConfig cfg = off;
            if (layer == 0) cfg.rectangle_pruning = true;
            if (layer == 1) cfg.cube_pruning = true;
            if (layer == 2) cfg.constraint_pruning = true;
            if (layer == 3) cfg.rank_threshold = true;
            ConcatStats st;
            multi_hop_skyline(hops, cfg, &st);
            CHECK(st.pairs_generated <= base.pairs_generated);
        }
    }
}

TEST_CASE("constrained search over hops", "[pruning]") {
    // label rows of the worked 2D query
    SkylineSet s_v1 = make_set({{3, 7}, {5, 5}}), t_v1 = make_set({{3, 5}, {4, 0}});
    SkylineSet s_v5 = make_set({{3, 6}, {4, 3}}), t_v5 = make_set({{1, 3}, {3, 1}});
    SkylineSet s_v8 = make_set({{1, 2}}), t_v8 = make_set({{3, 3}});
    SkylineSet s_v12 = make_set({{2, 3}}), t_v12 = make_set({{2, 2}});
    std::vector<HopInput> hops{HopInput{1, s_v1, t_v1, false}, HopInput{5, s_v5, t_v5, false},
                               HopInput{8, s_v8, t_v8, false}, HopInput{12, s_v12, t_v12, false}};

    SECTION("tight constraint") {
        auto best = best_under_constraints(hops, {6});
        REQUIRE(best.has_value());
        CHECK(best->cost == CostVector{4, 5});
    }
    SECTION("reference mode reproduces the full candidate walkthrough") {
        ConcatConfig off;
        off.constraint_pruning = false;
        std::vector<HopTrace> trace;
        auto best = best_under_constraints(hops, {6}, off, nullptr, &trace);
        REQUIRE(best.has_value());
        CHECK(best->cost == CostVector{4, 5});
        REQUIRE(trace.size() == 4);
        auto sorted = [](std::vector<CostVector> v) {
            std::sort(v.begin(), v.end(), [](const CostVector& a, const CostVector& b) {
                return canonical_less(a, b);
            });
            return v;
        };
        CHECK(sorted(trace[0].candidates) ==
              std::vector<CostVector>{{6, 12}, {7, 7}, {8, 10}, {9, 5}});
        CHECK(sorted(trace[1].candidates) == std::vector<CostVector>{{4, 9}, {5, 6}, {6, 7}, {7, 4}});
        CHECK(sorted(trace[2].candidates) == std::vector<CostVector>{{4, 5}});
        CHECK(sorted(trace[3].candidates) == std::vector<CostVector>{{4, 5}});
        size_t total = 0;
        for (const auto& t : trace) total += t.candidates.size();
        CHECK(total == 10);
    }
    SECTION("constraint below every cost is infeasible") {
        CHECK_FALSE(best_under_constraints(hops, {0}).has_value());
    }
    SECTION("loose constraint returns the global minimum weight") {
        auto best = best_under_constraints(hops, {1000});
        REQUIRE(best.has_value());
        CHECK(best->cost == CostVector{4, 5});  // (4,5) is also the weight minimum here
    }
}

TEST_CASE("constrained search agrees with filter-then-argmin on random hops", "[pruning]") {
    Rng rng(53);
    for (int iter = 0; iter < 250; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        size_t hop_count = 1 + rng.next_below(4);
        std::vector<SkylineSet> lefts, rights;
        std::vector<HopInput> hops;
        std::vector<CostVector> all;
        for (size_t h = 0; h < hop_count; ++h) {
            lefts.push_back(random_skyline(rng, n, 8));
            rights.push_back(random_skyline(rng, n, 8));
            hops.push_back(HopInput{static_cast<VertexId>(h), lefts[h], rights[h], false});
            for (const auto& c : naive_cross_product(lefts[h], rights[h])) all.push_back(c);
        }
        std::vector<Value> constraints(static_cast<size_t>(n - 1));
        for (auto& c : constraints) c = static_cast<Value>(rng.next_int(5, 80));
        std::optional<CostVector> want;
        std::sort(all.begin(), all.end(),
                  [](const CostVector& a, const CostVector& b) { return canonical_less(a, b); });
        for (const auto& c : all) {
            bool ok = true;
            for (int i = 1; i < n; ++i)
                if (c[i] > constraints[static_cast<size_t>(i - 1)]) ok = false;
            if (ok) {
                want = c;
                break;
            }
        }
        for (bool pruning : {true, false}) {
            ConcatConfig cfg;
            cfg.constraint_pruning = pruning;
            auto got = best_under_constraints(hops, constraints, cfg);
            CHECK(got.has_value() == want.has_value());
            if (got) CHECK(got->cost == *want);
        }
    }
}
