#pragma once

#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "prefplan/mdp.hpp"

namespace prefplan {

namespace detail {

/// BFS distance-to-target over the support graph (probabilities ignored).
/// dist[s] = 0 for target states; INT_MAX when the target is unreachable.
inline std::vector<int> support_distance(const Mdp& m, const Bitset& target) {
    constexpr int INF = std::numeric_limits<int>::max();
    // reversed support edges
    std::vector<std::vector<int>> pred(m.num_states);
    for (int s = 0; s < m.num_states; ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            for (const Transition& t : m.branches(s, a)) pred[t.dst].push_back(s);

    std::vector<int> dist(m.num_states, INF);
    std::deque<int> queue;
    target.for_each([&](int s) {
        dist[s] = 0;
        queue.push_back(s);
    });
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int p : pred[v])
            if (dist[p] == INF) {
                dist[p] = dist[v] + 1;
                queue.push_back(p);
            }
    }
    return dist;
}

} // namespace detail

/// States from which the target is reachable with positive probability under
/// some strategy. Backward reachability over transition supports.
inline Bitset positive_reach_region(const Mdp& m, const Bitset& target) {
    if (target.none()) throw std::invalid_argument("empty objective");
    auto dist = detail::support_distance(m, target);
    Bitset region(m.num_states);
    for (int s = 0; s < m.num_states; ++s)
        if (dist[s] != std::numeric_limits<int>::max()) region.set(s);
    return region;
}

/// Permissive positive-winning strategy: inside the region an action is
/// allowed iff one of its successors is strictly closer to the target in the
/// support graph; target states allow every enabled action. The layer
/// structure makes progress checkable step by step.
inline Strategy positive_winning_strategy(const Mdp& m, const Bitset& target) {
    if (target.none()) throw std::invalid_argument("empty objective");
    auto dist = detail::support_distance(m, target);
    constexpr int INF = std::numeric_limits<int>::max();

    Strategy pi(m.num_states, m.num_actions());
    for (int s = 0; s < m.num_states; ++s) {
        if (dist[s] == INF) continue;
        if (target.test(s)) {
            pi.allowed[s] = m.enabled_actions(s);
            continue;
        }
        for (int a = 0; a < m.num_actions(); ++a)
            for (const Transition& t : m.branches(s, a))
                if (dist[t.dst] != INF && dist[t.dst] == dist[s] - 1) {
                    pi.allowed[s].set(a);
                    break;
                }
    }
    return pi;
}

struct RegionResult {
    Bitset region;
    Strategy strategy;
};

/// Almost-sure winning region and its permissive certifying strategy.
///
/// Alternating fixpoint: keep a candidate set C (initially all states),
/// (a) disable every action with a successor outside C, (b) shrink C to the
/// states that can still reach target-within-C through surviving actions,
/// repeat until stable. At the fixpoint no surviving action leaves C and the
/// target stays positively reachable from every state of C, which certifies
/// probability-one reachability under uniform play of the surviving actions.
/// Target states keep only their surviving actions; the set may be empty
/// there (the objective is already met).
inline RegionResult almost_sure_reach_region(const Mdp& m, const Bitset& target) {
    if (target.none()) throw std::invalid_argument("empty objective");

    const int n = m.num_states;
    const int na = m.num_actions();
    Bitset candidate = Bitset::full(n);
    std::vector<Bitset> alive(n);
    for (int s = 0; s < n; ++s) alive[s] = m.enabled_actions(s);

    // reversed support edges annotated with the action
    struct Rev {
        int src;
        int action;
    };
    std::vector<std::vector<Rev>> pred(n);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < na; ++a)
            for (const Transition& t : m.branches(s, a)) pred[t.dst].push_back({s, a});

    while (true) {
        // (a) kill actions whose support leaves the candidate set
        for (int s = 0; s < n; ++s) {
            if (!candidate.test(s)) continue;
            alive[s].for_each([&](int a) {
                for (const Transition& t : m.branches(s, a))
                    if (!candidate.test(t.dst)) {
                        alive[s].reset(a);
                        return;
                    }
            });
        }
        // (b) backward reachability to target ∩ C through alive actions
        Bitset reach(n);
        std::deque<int> queue;
        target.for_each([&](int s) {
            if (candidate.test(s)) {
                reach.set(s);
                queue.push_back(s);
            }
        });
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (const Rev& r : pred[v]) {
                if (reach.test(r.src) || !candidate.test(r.src)) continue;
                if (!alive[r.src].test(r.action)) continue;
                reach.set(r.src);
                queue.push_back(r.src);
            }
        }
        // (c) shrink or stop
        if (reach == candidate) break;
        candidate = reach;
    }

    Strategy pi(n, na);
    candidate.for_each([&](int s) { pi.allowed[s] = alive[s]; });
    return {candidate, pi};
}

} // namespace prefplan
