#include <doctest.h>

#include <chrono>

#include "prefplan/oracle.hpp"
#include "prefplan/reachability.hpp"
#include "prefplan/scenarios.hpp"
#include "prefplan/simulate.hpp"
#include "support.hpp"

using namespace prefplan;

namespace {

Bitset states(int n, std::initializer_list<int> elems) {
    Bitset b(n);
    for (int e : elems) b.set(e);
    return b;
}

} // namespace

TEST_CASE("toy positive regions") {
    auto toy = build_toy_example();
    CHECK(positive_reach_region(toy.mdp, toy.objectives[1].target) == states(6, {0, 2, 4}));
    CHECK(positive_reach_region(toy.mdp, toy.objectives[0].target) == states(6, {0, 1, 5}));
    CHECK(positive_reach_region(toy.mdp, Bitset::full(6)) == Bitset::full(6));
    CHECK_THROWS_WITH_AS(positive_reach_region(toy.mdp, Bitset(6)), "empty objective",
                         std::invalid_argument);
}

TEST_CASE("toy positive winning strategy uses progress layers") {
    auto toy = build_toy_example();
    Strategy pi = positive_winning_strategy(toy.mdp, toy.objectives[1].target);
    CHECK(pi.at(0).test(1)); // b
    CHECK(pi.at(0).test(2)); // c
    CHECK_FALSE(pi.at(0).test(0));
    CHECK(pi.at(2) == toy.mdp.enabled_actions(2)); // already in the target
    CHECK(pi.at(1).none());                        // outside the region
}

TEST_CASE("toy almost-sure regions") {
    auto toy = build_toy_example();
    auto f1 = almost_sure_reach_region(toy.mdp, toy.objectives[0].target);
    CHECK(f1.region == states(6, {0, 1, 5}));
    CHECK(f1.strategy.at(0) == states(3, {0})); // only action a
    auto f2 = almost_sure_reach_region(toy.mdp, toy.objectives[1].target);
    CHECK(f2.region == states(6, {2, 4}));
    auto f3 = almost_sure_reach_region(toy.mdp, toy.objectives[2].target);
    CHECK(f3.region == states(6, {3}));
    auto all = almost_sure_reach_region(toy.mdp, Bitset::full(6));
    CHECK(all.region == Bitset::full(6));
    for (int s = 0; s < 6; ++s) CHECK(all.strategy.at(s) == toy.mdp.enabled_actions(s));
    CHECK_THROWS_AS(almost_sure_reach_region(toy.mdp, Bitset(6)), std::invalid_argument);
}

TEST_CASE("almost-sure implies positive, and regions are monotone") {
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        Mdp m = testsupport::random_mdp(6, 3, seed);
        Rng rng(seed * 31);
        Bitset small = testsupport::random_nonempty_subset(6, rng);
        Bitset big = small;
        big.set(rng.uniform(6));
        CHECK(almost_sure_reach_region(m, small).region.is_subset_of(positive_reach_region(m, small)));
        CHECK(positive_reach_region(m, small).is_subset_of(positive_reach_region(m, big)));
        CHECK(almost_sure_reach_region(m, small)
                  .region.is_subset_of(almost_sure_reach_region(m, big).region));
    }
}

TEST_CASE("region algorithms agree with the exhaustive oracle on small models") {
    for (uint64_t seed = 100; seed < 150; ++seed) {
        Mdp m = testsupport::random_mdp(5 + static_cast<int>(seed % 4), 2 + seed % 2, seed);
        Rng rng(seed * 7919);
        Bitset target = testsupport::random_nonempty_subset(m.num_states, rng);
        auto grades = oracle_reach_qualitative(m, target);
        Bitset pos = positive_reach_region(m, target);
        Bitset as = almost_sure_reach_region(m, target).region;
        for (int s = 0; s < m.num_states; ++s) {
            CHECK(pos.test(s) == (grades[s] != ReachGrade::Zero));
            CHECK(as.test(s) == (grades[s] == ReachGrade::AlmostSure));
        }
    }
}

TEST_CASE("almost-sure strategy keeps runs inside the region and reaches the target") {
    auto toy = build_toy_example();
    auto res = almost_sure_reach_region(toy.mdp, toy.objectives[0].target);
    const Bitset& target = toy.objectives[0].target;

    // plain-MDP rollout: stop when the target is hit
    int hits = 0;
    const int runs = 2000;
    for (int r = 0; r < runs; ++r) {
        Rng rng(static_cast<uint64_t>(r) * 977 + 5);
        int s = 0;
        bool hit = false;
        for (int step = 0; step < 60 && !hit; ++step) {
            if (target.test(s)) {
                hit = true;
                break;
            }
            REQUIRE(res.region.test(s));
            auto opts = res.strategy.at(s).to_vector();
            REQUIRE(!opts.empty());
            int a = opts[static_cast<size_t>(rng.uniform(static_cast<int>(opts.size())))];
            const auto& br = toy.mdp.branches(s, a);
            s = br[static_cast<size_t>(rng.uniform(static_cast<int>(br.size())))].dst;
        }
        if (hit) ++hits;
    }
    CHECK(hits == runs);
}

TEST_CASE("regions scale to large sparse models") {
    const int n = 100000;
    Mdp m(n, {"a", "b", "c"});
    Rng rng(424242);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < 3; ++a) {
            int deg = 1 + rng.uniform(3);
            std::set<int> succs;
            while (static_cast<int>(succs.size()) < deg) succs.insert(rng.uniform(n));
            for (int dst : succs)
                m.add_transition(s, a, dst, Rational(1, static_cast<long long>(succs.size())));
        }
    Bitset target(n);
    for (int i = 0; i < 50; ++i) target.set(rng.uniform(n));

    auto t0 = std::chrono::steady_clock::now();
    Bitset pos = positive_reach_region(m, target);
    auto res = almost_sure_reach_region(m, target);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                  .count();
    CHECK(res.region.is_subset_of(pos));
    CHECK(ms < 30000);
    MESSAGE("regions on 1e5 states computed in ", ms, " ms");
}
