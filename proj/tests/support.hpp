#pragma once

// Shared helpers for the test suite: random instance generators and the
// layered improvement-count oracle. Test-only code; the generators favor
// structure variety over realism.

#include <set>
#include <vector>

#include "prefplan/improvement.hpp"
#include "prefplan/mdp.hpp"
#include "prefplan/preference.hpp"
#include "prefplan/reachability.hpp"
#include "prefplan/scenarios.hpp"
#include "prefplan/simulate.hpp"

namespace testsupport {

using namespace prefplan;

inline Mdp random_mdp(int num_states, int num_actions, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> names;
    for (int a = 0; a < num_actions; ++a) names.push_back(std::string(1, char('a' + a)));
    Mdp m(num_states, names);
    m.initial = 0;
    for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
            bool enabled = a == 0 || rng.uniform(10) < 8;
            if (!enabled) continue;
            int support = 1 + rng.uniform(std::min(3, num_states));
            std::set<int> succs;
            while (static_cast<int>(succs.size()) < support) succs.insert(rng.uniform(num_states));
            for (int dst : succs)
                m.add_transition(s, a, dst, Rational(1, static_cast<long long>(succs.size())));
        }
    }
    return m;
}

inline Bitset random_nonempty_subset(int num_states, Rng& rng) {
    Bitset b(num_states);
    for (int s = 0; s < num_states; ++s)
        if (rng.uniform(4) == 0) b.set(s);
    if (b.none()) b.set(rng.uniform(num_states));
    return b;
}

struct RandomInstance {
    Mdp mdp;
    std::vector<ReachabilityObjective> objectives;
    PreferenceModel prefs;
};

inline RandomInstance random_instance(int num_states, int num_actions, uint64_t seed) {
    RandomInstance inst;
    inst.mdp = random_mdp(num_states, num_actions, seed);
    Rng rng(seed ^ 0xabcdef12345ULL);
    int n_obj = 2 + rng.uniform(2);
    for (int i = 0; i < n_obj; ++i)
        inst.objectives.push_back(
            {"F" + std::to_string(i + 1), random_nonempty_subset(num_states, rng)});
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n_obj; ++i)
        for (int j = 0; j < n_obj; ++j)
            if (i != j && rng.uniform(10) < 3) edges.push_back({i, j});
    inst.prefs = PreferenceModel::close_preorder(edges, n_obj, true);
    return inst;
}

/// Exact maximum number of improvements guaranteed almost surely from a
/// product state, for any strategy. Computed on a layered copy of the
/// product where the layer index counts improving steps; the layer supplies
/// the only memory an optimal strategy needs, so a plain winning-region
/// computation on the layered model quantifies over all strategies.
inline int layered_max_almost_sure_improvements(const ImprovementMdp& imdp, int start, int cap) {
    const int n = imdp.num_product_states();
    const int layers = cap + 1;
    Mdp layered(n * layers, imdp.product.action_names);
    auto lid = [&](int v, int k) { return k * n + v; };
    for (int k = 0; k < layers; ++k)
        for (int v = 0; v < n; ++v)
            for (int a = 0; a < imdp.product.num_actions(); ++a)
                for (const Transition& t : imdp.product.branches(v, a)) {
                    int nk = k;
                    if (ImprovementMdp::flag_of(t.dst) == 1 && k < cap) nk = k + 1;
                    layered.add_transition(lid(v, k), a, lid(t.dst, nk), t.prob);
                }
    // states with no action at all must still carry a loop for region code
    for (int s = 0; s < layered.num_states; ++s)
        if (layered.enabled_actions(s).none()) layered.add_transition(s, 0, s, Rational(1));

    int best = 0;
    for (int k = 1; k <= cap; ++k) {
        Bitset target(layered.num_states);
        for (int layer = k; layer < layers; ++layer)
            for (int v = 0; v < n; ++v) target.set(lid(v, layer));
        auto result = almost_sure_reach_region(layered, target);
        if (result.region.test(lid(start, 0)))
            best = k;
        else
            break;
    }
    return best;
}

} // namespace testsupport
