#pragma once

#include <stdexcept>
#include <vector>

#include "prefplan/improvement.hpp"
#include "prefplan/reachability.hpp"

namespace prefplan {

enum class RegionMode { AlmostSure, Positive };

/// Strategy that improves with positive probability: the layered positive
/// winning strategy toward the final states of the improvement product.
inline Strategy spi_strategy(const ImprovementMdp& imdp) {
    return positive_winning_strategy(imdp.product, imdp.finals);
}

/// Strategy that improves with probability one: the permissive almost-sure
/// winning strategy toward the final states.
inline Strategy sasi_strategy(const ImprovementMdp& imdp) {
    return almost_sure_reach_region(imdp.product, imdp.finals).strategy;
}

/// Nested winning levels: W_{i+1} is the winning region (almost-sure or
/// positive, per mode) for the target R_i, where R_0 is the final set and
/// R_{i+1} keeps the flagged copies of states whose plain copy sits in
/// W_{i+1}. A state in W_k can collect k improvements in sequence.
struct LevelSets {
    RegionMode mode = RegionMode::AlmostSure;
    std::vector<Bitset> levels;            // levels[k-1] = W_k
    std::vector<Bitset> targets;           // targets[i] = R_i, targets[0] = finals
    std::vector<Strategy> level_strategies; // permissive strategy toward R_{k-1}
    Bitset level0;                          // V minus W_1
    bool bounded = true;                    // false when R stabilizes nonempty
};

namespace detail {

inline RegionResult winning(const Mdp& m, const Bitset& target, RegionMode mode) {
    if (mode == RegionMode::AlmostSure) return almost_sure_reach_region(m, target);
    RegionResult r;
    r.region = positive_reach_region(m, target);
    r.strategy = positive_winning_strategy(m, target);
    return r;
}

inline LevelSets level_sets(const ImprovementMdp& imdp, RegionMode mode) {
    LevelSets ls;
    ls.mode = mode;
    ls.level0 = Bitset(imdp.num_product_states());
    ls.targets.push_back(imdp.finals);

    Bitset r = imdp.finals;
    int iterations = 0;
    const int max_iterations = imdp.num_product_states() + 1;
    while (r.any()) {
        if (++iterations > max_iterations) {
            ls.bounded = false;
            break;
        }
        RegionResult win = detail::winning(imdp.product, r, mode);
        Bitset next_r(imdp.num_product_states());
        for (int s = 0; s < imdp.base_states; ++s)
            if (win.region.test(ImprovementMdp::vid(s, 0)))
                next_r.set(ImprovementMdp::vid(s, 1));
        if (ls.levels.empty()) ls.level0 = Bitset::full(imdp.num_product_states()) - win.region;
        ls.levels.push_back(win.region);
        ls.level_strategies.push_back(std::move(win.strategy));
        if (next_r == r) {
            // nonempty fixpoint: improvements can be repeated forever
            ls.bounded = false;
            break;
        }
        ls.targets.push_back(next_r);
        r = next_r;
    }
    if (ls.levels.empty()) ls.level0 = Bitset::full(imdp.num_product_states());
    return ls;
}

} // namespace detail

inline LevelSets sasi_level_sets(const ImprovementMdp& imdp) {
    return detail::level_sets(imdp, RegionMode::AlmostSure);
}

inline LevelSets spi_level_sets(const ImprovementMdp& imdp) {
    return detail::level_sets(imdp, RegionMode::Positive);
}

struct Rank {
    int value = 0;
    bool unbounded = false;
};

/// Rank of a product state: the deepest level containing its plain copy.
/// Both flag copies of a state share the rank.
inline Rank rank_of(const ImprovementMdp& imdp, const LevelSets& ls, int v) {
    if (v < 0 || v >= imdp.num_product_states())
        throw std::invalid_argument("product state out of range");
    int plain = ImprovementMdp::vid(ImprovementMdp::base_of(v), 0);
    int k = 0;
    for (size_t i = 0; i < ls.levels.size(); ++i)
        if (ls.levels[i].test(plain)) k = static_cast<int>(i) + 1;
    bool unbounded = false;
    if (!ls.bounded && !ls.levels.empty() && ls.levels.back().test(plain)) unbounded = true;
    return {k, unbounded};
}

struct RankTable {
    std::vector<Rank> ranks; // per base state
    bool bounded = true;

    int max_rank() const {
        int m = 0;
        for (const Rank& r : ranks)
            if (!r.unbounded && r.value > m) m = r.value;
        return m;
    }
    /// Number of base states of rank at least k.
    int count_at_least(int k) const {
        int c = 0;
        for (const Rank& r : ranks)
            if (r.unbounded || r.value >= k) ++c;
        return c;
    }
};

inline RankTable rank_table(const ImprovementMdp& imdp, const LevelSets& ls) {
    RankTable t;
    t.bounded = ls.bounded;
    t.ranks.reserve(imdp.base_states);
    for (int s = 0; s < imdp.base_states; ++s)
        t.ranks.push_back(rank_of(imdp, ls, ImprovementMdp::vid(s, 0)));
    return t;
}

/// Counter-backed strategy that realizes rank-many improvements: with k
/// improvements still owed it follows the winning strategy toward R_{k-1},
/// decrements on entering R_{k-1}, and after the last improvement allows any
/// product-safe action.
///
/// At flagged target states the phase strategy mirrors the plain copy's
/// action set (both copies share supports), so a fresh visit to the target
/// can always be forced again.
struct CounterStrategy {
    int max_counter = 0;
    std::vector<Strategy> phases;     // phases[k-1] = strategy while k owed
    std::vector<Bitset> decrements;   // decrements[k-1] = R_{k-1}
    Strategy safe;                    // all product-enabled actions

    Bitset allowed(int v, int counter) const {
        if (counter > 0 && counter <= max_counter) {
            int plain = ImprovementMdp::vid(ImprovementMdp::base_of(v), 0);
            const Bitset& set = phases[counter - 1].at(plain);
            if (set.any()) return set;
        }
        return safe.at(v);
    }

    /// Counter update after a transition into v.
    int next_counter(int counter, int v) const {
        if (counter > 0 && counter <= max_counter && decrements[counter - 1].test(v))
            return counter - 1;
        return counter;
    }
};

inline CounterStrategy composed_sasi_strategy(const ImprovementMdp& imdp, const LevelSets& ls) {
    if (!ls.bounded)
        throw std::invalid_argument("rank unbounded; composed strategy undefined");
    CounterStrategy cs;
    cs.max_counter = static_cast<int>(ls.levels.size());
    cs.phases = ls.level_strategies;
    cs.decrements.assign(ls.targets.begin(),
                         ls.targets.begin() + static_cast<long>(ls.levels.size()));
    cs.safe = Strategy(imdp.num_product_states(), imdp.product.num_actions());
    for (int v = 0; v < imdp.num_product_states(); ++v)
        cs.safe.allowed[v] = imdp.safe_actions(v);
    return cs;
}

} // namespace prefplan
