#include <catch2/catch_amalgamated.hpp>

#include "mcsp/skyline.hpp"
#include "support/test_util.hpp"

using namespace mcsp;
using namespace mcsp::test;

TEST_CASE("dominance fixtures", "[skyline]") {
    CHECK(dominates({4, 3}, {4, 5}));
    CHECK_FALSE(dominates({4, 3}, {3, 6}));
    CHECK_FALSE(dominates({3, 6}, {4, 3}));
    CHECK_FALSE(dominates({2, 2}, {2, 2}));
    CHECK_THROWS_AS(dominates({1, 2}, {1, 2, 3}), Error);
}

TEST_CASE("dominance is a strict partial order", "[skyline]") {
    Rng rng(42);
    for (int iter = 0; iter < 4000; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        CostVector a = random_vector(rng, n, 0, 6);
        CostVector b = random_vector(rng, n, 0, 6);
        CostVector c = random_vector(rng, n, 0, 6);
        CHECK_FALSE(dominates(a, a));
        if (dominates(a, b)) CHECK_FALSE(dominates(b, a));
        if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
        CHECK(dominates(a, b) == naive_dominates(a, b));
    }
}

TEST_CASE("skyline_of fixtures", "[skyline]") {
    auto r = skyline_of({{{4, 3}, {}}, {{4, 5}, {}}, {{3, 6}, {}}, {{7, 6}, {}}});
    REQUIRE(costs_of(r) == std::vector<CostVector>{{3, 6}, {4, 3}});

    // all five 4D rows survive
    auto rows = make_set({{2, 4, 10, 2}, {2, 4, 9, 3}, {3, 7, 7, 10}, {5, 3, 9, 3}, {6, 6, 8, 4}});
    auto kept = skyline_of(std::vector<PathSummary>(rows.begin(), rows.end()));
    CHECK(kept.size() == 5);

    auto single = skyline_of({{{1, 2, 3}, {}}});
    CHECK(costs_of(single) == std::vector<CostVector>{{1, 2, 3}});
    CHECK(skyline_of({}).empty());
}

TEST_CASE("skyline_of matches the definition on random input", "[skyline]") {
    Rng rng(7);
    for (int iter = 0; iter < 300; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        std::vector<PathSummary> raw;
        std::vector<CostVector> costs;
        size_t count = 1 + rng.next_below(40);
        for (size_t i = 0; i < count; ++i) {
            CostVector c = random_vector(rng, n, 0, 12);
            raw.push_back(PathSummary{c, Provenance{}});
            costs.push_back(c);
        }
        CHECK(costs_of(skyline_of(raw)) == naive_skyline(costs));
        CHECK(is_canonical(skyline_of(raw)));
    }
}

TEST_CASE("skyline_merge fixtures", "[skyline]") {
    auto a = make_set({{2, 3}});
    auto b = make_set({{3, 2}});
    CHECK(costs_of(skyline_merge(a, b)) == std::vector<CostVector>{{2, 3}, {3, 2}});
    CHECK(costs_of(skyline_merge(a, a)) == costs_of(a));
    CHECK(costs_of(skyline_merge(make_set({{1, 1}}), make_set({{2, 2}}))) ==
          std::vector<CostVector>{{1, 1}});
}

TEST_CASE("skyline_merge equals skyline of the union", "[skyline]") {
    Rng rng(11);
    for (int iter = 0; iter < 300; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        SkylineSet a = random_skyline(rng, n, 10);
        SkylineSet b = random_skyline(rng, n, 10);
        std::vector<CostVector> both = costs_of(a);
        for (const auto& p : b) both.push_back(p.cost);
        CHECK(costs_of(skyline_merge(a, b)) == naive_skyline(both));
    }
}

TEST_CASE("concat_pair", "[skyline]") {
    PathSummary p{{3, 7}, {}}, q{{3, 5}, {}};
    CHECK(concat_pair(p, q, 1).cost == CostVector{6, 12});
    CHECK(concat_pair(PathSummary{{1, 2, 3}, {}}, PathSummary{{4, 5, 6}, {}}, 0).cost ==
          CostVector{5, 7, 9});
    PathSummary zero{{0, 0}, {}};
    CHECK(concat_pair(p, zero, 2).cost == p.cost);
    PathSummary big{{INT32_MAX, 1}, {}};
    CHECK_THROWS_AS(concat_pair(big, p, 0), Error);
}

TEST_CASE("2D concatenation fixtures", "[skyline]") {
    auto r1 = concat_hop_2d(make_set({{2, 4}, {4, 3}}), make_set({{4, 7}, {6, 2}}), 1);
    CHECK(costs_of(r1) == std::vector<CostVector>{{6, 11}, {8, 6}, {10, 5}});

    auto r2 = concat_hop_2d(make_set({{1, 2}}), make_set({{3, 5}, {4, 4}, {5, 3}}), 5);
    CHECK(costs_of(r2) == std::vector<CostVector>{{4, 7}, {5, 6}, {6, 5}});

    auto r3 = concat_hop_2d(make_set({{1, 2}}), make_set({{1, 1}}), 8);
    CHECK(costs_of(r3) == std::vector<CostVector>{{2, 3}});

    CHECK(concat_hop_2d({}, make_set({{1, 1}}), 0).empty());
}

TEST_CASE("2D concatenation equals the brute-force cross product", "[skyline]") {
    Rng rng(13);
    for (int iter = 0; iter < 400; ++iter) {
        SkylineSet a = random_skyline(rng, 2, 1 + rng.next_below(20));
        SkylineSet b = random_skyline(rng, 2, 1 + rng.next_below(20));
        auto got = concat_hop_2d(a, b, 3);
        CHECK(costs_of(got) == naive_skyline(naive_cross_product(a, b)));
        CHECK(is_canonical(got));
        // provenance indices reproduce each entry
        for (const auto& p : got)
            CHECK(p.cost == checked_add(a[static_cast<size_t>(p.via.left)].cost,
                                        b[static_cast<size_t>(p.via.right)].cost));
    }
}

TEST_CASE("endpoint and single-factor properties", "[skyline]") {
    Rng rng(17);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + static_cast<int>(rng.next_below(3));
        SkylineSet a = random_skyline(rng, n, 12);
        SkylineSet b = random_skyline(rng, n, 12);
        SkylineSet single{a[rng.next_below(a.size())]};

        // one fixed path concatenated with a skyline set keeps its size
        auto mapped = concat_hop(single, b, 0);
        CHECK(mapped.size() == b.size());

        // minimum-weight output is the concatenation of the two first entries
        auto full = concat_hop(a, b, 0);
        CHECK(full.front().cost == checked_add(a.front().cost, b.front().cost));
        if (n == 2)  // minimum-cost output pairs the two last entries
            CHECK(full.back().cost == checked_add(a.back().cost, b.back().cost));
    }
}

TEST_CASE("2D rejections are witnessed from the cross regions", "[skyline]") {
    Rng rng(19);
    for (int iter = 0; iter < 200; ++iter) {
        SkylineSet a = random_skyline(rng, 2, 2 + rng.next_below(15));
        SkylineSet b = random_skyline(rng, 2, 2 + rng.next_below(15));
        std::vector<RejectionWitness> witnesses;
        concat_hop_2d(a, b, 0, nullptr, &witnesses);
        for (const auto& w : witnesses) {
            bool cross_a = w.wit_left < w.cand_left && w.wit_right > w.cand_right;
            bool cross_b = w.wit_left > w.cand_left && w.wit_right < w.cand_right;
            CHECK((cross_a || cross_b));
        }
    }
}

TEST_CASE("rank index respects the tie rule", "[skyline]") {
    RankIndex idx(3);
    idx.insert({1, 5, 9});
    idx.insert({2, 5, 8});
    idx.insert({3, 5, 7});
    // a candidate equal to existing values ranks after all of them
    CHECK(idx.count_leq(1, 5) == 3);
    CHECK(idx.count_leq(1, 4) == 0);
    CHECK(idx.count_leq(2, 8) == 2);
}

TEST_CASE("multi-dimensional validation fixtures", "[skyline]") {
    RankIndex idx(4);
    for (const auto& c :
         {CostVector{2, 4, 10, 2}, {2, 4, 9, 3}, {3, 7, 7, 10}, {5, 3, 9, 3}, {6, 6, 8, 4}})
        idx.insert(c);

    SECTION("accepted candidate checks only the distinct criterion prefix") {
        auto dc = idx.find_distinct({8, 5, 8, 9});
        CHECK(dc.criterion == 2);
        CHECK(dc.rank == 3);
        ConcatStats stats;
        CHECK(validate_candidate_nd(idx, {8, 5, 8, 9}, default_concat_config(), &stats));
        CHECK(stats.dominance_checks <= 2);
    }
    SECTION("dominated candidate is rejected") {
        CHECK_FALSE(validate_candidate_nd(idx, {9, 8, 9, 5}));
    }
    SECTION("duplicate of an accepted path is rejected") {
        CHECK_FALSE(validate_candidate_nd(idx, {6, 6, 8, 4}));
    }
    SECTION("weight below the accepted maximum is a precondition violation") {
        CHECK_THROWS_AS(validate_candidate_nd(idx, {5, 9, 9, 9}), Error);
    }
}

TEST_CASE("rank threshold rejects without pairwise checks", "[skyline]") {
    // 10000 anti-correlated paths; the candidate ranks 7000 in every cost
    const int k = 10000;
    RankIndex idx(4);
    for (int i = 1; i <= k; ++i)
        idx.insert({i, 20000 - i, 20000 - i, 20000 - i});
    // rank 7000 needs exactly 6999 smaller-or-equal values
    Value q = 20000 - k + 6999 - 1;
    CostVector cand{k + 1, q, q, q};
    auto dc = idx.find_distinct(cand);
    CHECK(dc.rank == 7000);
    ConcatStats stats;
    CHECK_FALSE(validate_candidate_nd(idx, cand, default_concat_config(), &stats));
    CHECK(stats.early_rejects == 1);
    CHECK(stats.dominance_checks == 0);
}

TEST_CASE("validation strategies agree", "[skyline]") {
    Rng rng(23);
    ConcatConfig by_value;
    by_value.rank_threshold = false;
    ConcatConfig by_intersection = by_value;
    by_intersection.validate_by_intersection = true;
    for (int iter = 0; iter < 300; ++iter) {
        int n = 3 + static_cast<int>(rng.next_below(2));
        SkylineSet base = random_skyline(rng, n, 20);
        RankIndex idx(n);
        Value max_w = 0;
        for (const auto& p : base) {
            idx.insert(p.cost);
            max_w = std::max(max_w, p.cost.weight());
        }
        for (int c = 0; c < 10; ++c) {
            CostVector cand = random_vector(rng, n, 1, 40);
            cand[0] = max_w + static_cast<Value>(rng.next_below(5));
            CHECK(validate_candidate_nd(idx, cand, by_value) ==
                  validate_candidate_nd(idx, cand, by_intersection));
        }
    }
}

TEST_CASE("nD concatenation fixtures", "[skyline]") {
    auto r = concat_hop_nd(make_set({{1, 1, 1}}), make_set({{2, 2, 2}}), 0);
    CHECK(costs_of(r) == std::vector<CostVector>{{3, 3, 3}});

    Rng rng(29);
    SkylineSet right = random_skyline(rng, 3, 10);
    auto mapped = concat_hop_nd(make_set({{2, 5, 1}}), right, 0);
    CHECK(mapped.size() == right.size());
    CHECK(is_canonical(mapped));
}

TEST_CASE("nD concatenation equals the brute-force cross product", "[skyline]") {
    Rng rng(31);
    for (int iter = 0; iter < 250; ++iter) {
        int n = 3 + static_cast<int>(rng.next_below(2));
        SkylineSet a = random_skyline(rng, n, 1 + rng.next_below(15));
        SkylineSet b = random_skyline(rng, n, 1 + rng.next_below(15));
        for (bool threshold : {false, true}) {
            ConcatConfig cfg;
            cfg.rank_threshold = threshold;
            auto got = concat_hop_nd(a, b, 2, cfg);
            CHECK(costs_of(got) == naive_skyline(naive_cross_product(a, b)));
            CHECK(is_canonical(got));
        }
    }
}

TEST_CASE("equal-weight candidates are collapsed and mutually filtered", "[skyline]") {
    // both factors hold equal-weight entries, so the frontier pops ties
    auto a = make_set({{2, 1, 6}, {2, 6, 1}});
    auto b = make_set({{3, 1, 6}, {3, 6, 1}});
    auto got = concat_hop_nd(a, b, 0);
    CHECK(costs_of(got) == naive_skyline(naive_cross_product(a, b)));

    // duplicate sums collapse to one entry
    auto c = make_set({{1, 2, 3}, {1, 3, 2}});
    auto d = make_set({{1, 3, 2}, {1, 2, 3}});
    auto got2 = concat_hop_nd(c, d, 0);
    CHECK(costs_of(got2) == naive_skyline(naive_cross_product(c, d)));
}
