#include <doctest.h>

#include "prefplan/scenarios.hpp"
#include "prefplan/simulate.hpp"
#include "prefplan/synthesis.hpp"
#include "support.hpp"

using namespace prefplan;

namespace {

Bitset acts(std::initializer_list<int> elems) {
    Bitset b(3);
    for (int e : elems) b.set(e);
    return b;
}

/// Improvement-cycle instance: three hub states, each able to bank one of
/// two private objectives or to gamble onward. Each hop along the cycle
/// gains value against the previous hub, and a shared spoiler sink keeps the
/// hubs' guaranteed sets apart. Positive-probability improvements never run
/// out here.
testsupport::RandomInstance cycle_instance() {
    testsupport::RandomInstance inst;
    // states: 0=x 1=y 2=z hubs; 3..8 = t1..t6 sinks; 9 = u spoiler sink
    inst.mdp = Mdp(10, {"go", "bank1", "bank2"});
    auto& m = inst.mdp;
    auto sink = [&](int s) { m.add_transition(s, 0, s, Rational(1)); };
    Rational half(1, 2);
    m.add_transition(0, 0, 1, half);
    m.add_transition(0, 0, 9, half);
    m.add_transition(1, 0, 2, half);
    m.add_transition(1, 0, 9, half);
    m.add_transition(2, 0, 0, half);
    m.add_transition(2, 0, 9, half);
    m.add_transition(0, 1, 3, Rational(1));
    m.add_transition(0, 2, 4, Rational(1));
    m.add_transition(1, 1, 5, Rational(1));
    m.add_transition(1, 2, 6, Rational(1));
    m.add_transition(2, 1, 7, Rational(1));
    m.add_transition(2, 2, 8, Rational(1));
    for (int s = 3; s <= 9; ++s) sink(s);
    m.initial = 0;

    for (int i = 0; i < 6; ++i) {
        Bitset t(10);
        t.set(3 + i);
        inst.objectives.push_back({"F" + std::to_string(i + 1), t});
    }
    Bitset u(10);
    u.set(9);
    inst.objectives.push_back({"F7", u});
    // cross-hub gains: F3 over F1, F5 over F4, F2 over F6
    inst.prefs = PreferenceModel::close_preorder({{2, 0}, {4, 3}, {1, 5}}, 7, true);
    return inst;
}

} // namespace

TEST_CASE("toy strategies gamble for the better targets") {
    auto toy = build_toy_example();
    ImprovementMdp imdp = build_improvement_mdp(toy.mdp, toy.objectives, toy.prefs);

    Strategy spi = spi_strategy(imdp);
    CHECK(spi.at(ImprovementMdp::vid(0, 0)) == acts({1, 2}));
    CHECK(spi.at(ImprovementMdp::vid(1, 0)).none()); // value already settled

    Strategy sasi = sasi_strategy(imdp);
    CHECK(sasi.at(ImprovementMdp::vid(0, 0)) == acts({1, 2}));
    CHECK(sasi.at(ImprovementMdp::vid(0, 1)) == acts({1, 2}));
    CHECK(sasi.at(ImprovementMdp::vid(1, 0)).none());
    CHECK(sasi.at(ImprovementMdp::vid(2, 1)).none()); // flagged sink, nothing more to gain
}

TEST_CASE("toy level sets and ranks") {
    auto toy = build_toy_example();
    ImprovementMdp imdp = build_improvement_mdp(toy.mdp, toy.objectives, toy.prefs);
    LevelSets ls = sasi_level_sets(imdp);

    CHECK(ls.bounded);
    REQUIRE(ls.levels.size() == 2);
    // W_1 = finals plus the initial state's plain copy
    Bitset w1 = imdp.finals;
    w1.set(ImprovementMdp::vid(0, 0));
    CHECK(ls.levels[0] == w1);
    CHECK(ls.targets[1].count() == 1);
    CHECK(ls.targets[1].test(ImprovementMdp::vid(0, 1)));
    // W_2 contains only the flagged copy of the initial state
    CHECK(ls.levels[1].count() == 1);
    CHECK(ls.levels[1].test(ImprovementMdp::vid(0, 1)));
    CHECK(ls.level0 == Bitset::full(12) - ls.levels[0]);

    CHECK(rank_of(imdp, ls, ImprovementMdp::vid(0, 0)).value == 1);
    CHECK(rank_of(imdp, ls, ImprovementMdp::vid(0, 1)).value == 1);
    CHECK(rank_of(imdp, ls, ImprovementMdp::vid(2, 1)).value == 0);

    RankTable rt = rank_table(imdp, ls);
    CHECK(rt.max_rank() == 1);
    CHECK(rt.count_at_least(1) == 1);

    LevelSets pos = spi_level_sets(imdp);
    CHECK(pos.bounded);
    CHECK(rank_of(imdp, pos, ImprovementMdp::vid(0, 0)).value == 1);
}

TEST_CASE("nesting and almost-sure-in-positive dominance") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto inst = testsupport::random_instance(6, 2, seed);
        ImprovementMdp imdp = build_improvement_mdp(inst.mdp, inst.objectives, inst.prefs);
        LevelSets as = sasi_level_sets(imdp);
        LevelSets pos = spi_level_sets(imdp);
        for (size_t i = 1; i < as.levels.size(); ++i)
            CHECK(as.levels[i].is_subset_of(as.levels[i - 1]));
        for (size_t i = 1; i < as.targets.size(); ++i)
            CHECK(as.targets[i].is_subset_of(as.targets[i - 1]));
        CHECK(as.levels.size() <= static_cast<size_t>(imdp.num_product_states()));
        if (as.bounded && pos.bounded)
            for (size_t i = 0; i < as.levels.size(); ++i) {
                REQUIRE(i < pos.levels.size());
                CHECK(as.levels[i].is_subset_of(pos.levels[i]));
            }
    }
}

TEST_CASE("flag copies can re-reach the finals equally") {
    auto check_twins = [](const ImprovementMdp& imdp) {
        auto w1 = almost_sure_reach_region(imdp.product, imdp.finals).region;
        for (int s = 0; s < imdp.base_states; ++s) {
            int plain = ImprovementMdp::vid(s, 0);
            // the flagged copy re-reaches the finals iff the plain copy does:
            // both copies share supports, and only the plain copy is no target
            int improvements =
                testsupport::layered_max_almost_sure_improvements(imdp, ImprovementMdp::vid(s, 1), 1);
            CHECK((improvements >= 1) == w1.test(plain));
        }
    };
    auto toy = build_toy_example();
    check_twins(build_improvement_mdp(toy.mdp, toy.objectives, toy.prefs));
    for (uint64_t seed = 40; seed < 48; ++seed) {
        auto inst = testsupport::random_instance(5, 2, seed);
        check_twins(build_improvement_mdp(inst.mdp, inst.objectives, inst.prefs));
    }
}

TEST_CASE("positive-mode level iteration can hit a nonempty fixpoint") {
    auto inst = cycle_instance();
    ImprovementMdp imdp = build_improvement_mdp(inst.mdp, inst.objectives, inst.prefs);

    // hub transitions stay enabled and flag the hop as a gain
    const auto& hop = imdp.product.branches(ImprovementMdp::vid(0, 0), 0);
    REQUIRE(hop.size() == 2);
    CHECK(hop[0].dst == ImprovementMdp::vid(1, 1));

    LevelSets pos = spi_level_sets(imdp);
    CHECK_FALSE(pos.bounded);
    CHECK(rank_of(imdp, pos, imdp.v0).unbounded);
    CHECK_THROWS_WITH_AS(composed_sasi_strategy(imdp, pos),
                         "rank unbounded; composed strategy undefined", std::invalid_argument);

    // with probability one the spoiler sink is eventually hit, so the
    // almost-sure ladder still terminates
    LevelSets as = sasi_level_sets(imdp);
    CHECK(as.bounded);
    CHECK_FALSE(rank_of(imdp, as, imdp.v0).unbounded);
}

TEST_CASE("a model with no improving transition has rank zero everywhere") {
    // one objective containing every state: nothing can ever improve, so the
    // flagged copies are vacuous targets and every plain state has rank 0
    Mdp m(2, {"a"});
    m.add_transition(0, 0, 1, Rational(1));
    m.add_transition(1, 0, 1, Rational(1));
    std::vector<ReachabilityObjective> objectives = {{"F1", Bitset::full(2)}};
    auto prefs = PreferenceModel::close_preorder({}, 1);
    ImprovementMdp imdp = build_improvement_mdp(m, objectives, prefs);
    CHECK(imdp.product.branches(0, 0)[0].dst == ImprovementMdp::vid(1, 0));

    LevelSets ls = sasi_level_sets(imdp);
    CHECK(ls.bounded);
    REQUIRE(ls.levels.size() == 1);
    CHECK(ls.levels[0] == imdp.finals);
    RankTable rt = rank_table(imdp, ls);
    CHECK(rt.max_rank() == 0);
    CHECK(rt.count_at_least(1) == 0);
    CHECK(rank_of(imdp, ls, imdp.v0).value == 0);
}

TEST_CASE("level ranks match the layered oracle and cannot be exceeded") {
    auto check_instance = [](const Mdp& m, const std::vector<ReachabilityObjective>& objectives,
                             const PreferenceModel& prefs) {
        ImprovementMdp imdp = build_improvement_mdp(m, objectives, prefs);
        LevelSets ls = sasi_level_sets(imdp);
        if (!ls.bounded) return;
        int cap = static_cast<int>(ls.levels.size()) + 1;
        for (int v = 0; v < imdp.num_product_states(); ++v) {
            if (imdp.dead.test(v)) continue;
            int rank = rank_of(imdp, ls, v).value;
            int oracle = testsupport::layered_max_almost_sure_improvements(imdp, v, cap);
            CHECK(rank == oracle);
        }
    };
    auto toy = build_toy_example();
    check_instance(toy.mdp, toy.objectives, toy.prefs);
    for (uint64_t seed = 60; seed < 75; ++seed) {
        auto inst = testsupport::random_instance(6, 2, seed);
        check_instance(inst.mdp, inst.objectives, inst.prefs);
    }
}

TEST_CASE("composed strategy phases and decrements") {
    auto toy = build_toy_example();
    ImprovementMdp imdp = build_improvement_mdp(toy.mdp, toy.objectives, toy.prefs);
    LevelSets ls = sasi_level_sets(imdp);
    CounterStrategy cs = composed_sasi_strategy(imdp, ls);

    CHECK(cs.max_counter == 2);
    CHECK(cs.allowed(imdp.v0, 1) == acts({1, 2}));
    // after the last improvement any safe action goes
    CHECK(cs.allowed(ImprovementMdp::vid(2, 1), 0) == acts({0}));
    CHECK(cs.next_counter(1, ImprovementMdp::vid(3, 1)) == 0);
    CHECK(cs.next_counter(1, ImprovementMdp::vid(3, 0)) == 1);
    CHECK(cs.next_counter(0, ImprovementMdp::vid(3, 1)) == 0);
}
