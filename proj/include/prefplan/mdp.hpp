#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "prefplan/rational.hpp"
#include "prefplan/util.hpp"

namespace prefplan {

struct Transition {
    int dst = 0;
    Rational prob;
};

/// Explicit finite MDP. Actions form a global alphabet; an action is enabled
/// at a state iff it has at least one outgoing branch there.
struct Mdp {
    int num_states = 0;
    int initial = 0;
    std::vector<std::string> action_names;
    std::vector<std::string> state_names; // optional; empty means "s{i}"
    // delta[state][action] -> probability branches (empty = disabled)
    std::vector<std::vector<std::vector<Transition>>> delta;

    Mdp() = default;
    Mdp(int states, std::vector<std::string> actions) { resize(states, std::move(actions)); }

    void resize(int states, std::vector<std::string> actions) {
        num_states = states;
        action_names = std::move(actions);
        delta.assign(states, std::vector<std::vector<Transition>>(action_names.size()));
    }

    int num_actions() const { return static_cast<int>(action_names.size()); }

    void add_transition(int s, int a, int dst, Rational p) {
        delta[s][a].push_back({dst, p});
    }

    bool enabled(int s, int a) const { return !delta[s][a].empty(); }

    Bitset enabled_actions(int s) const {
        Bitset m(num_actions());
        for (int a = 0; a < num_actions(); ++a)
            if (enabled(s, a)) m.set(a);
        return m;
    }

    const std::vector<Transition>& branches(int s, int a) const { return delta[s][a]; }

    std::string state_name(int s) const {
        if (s >= 0 && s < static_cast<int>(state_names.size()) && !state_names[s].empty())
            return state_names[s];
        return "s" + std::to_string(s);
    }

    int action_index(const std::string& name) const {
        for (int a = 0; a < num_actions(); ++a)
            if (action_names[a] == name) return a;
        return -1;
    }

    /// True iff consecutive states are connected by some enabled action with
    /// positive probability.
    bool valid_play(const std::vector<int>& seq) const {
        for (int s : seq)
            if (s < 0 || s >= num_states) return false;
        for (size_t i = 0; i + 1 < seq.size(); ++i) {
            bool ok = false;
            for (int a = 0; a < num_actions() && !ok; ++a)
                for (const Transition& t : delta[seq[i]][a])
                    if (t.dst == seq[i + 1] && t.prob.positive()) {
                        ok = true;
                        break;
                    }
            if (!ok) return false;
        }
        return true;
    }
};

struct ValidationIssue {
    int state = -1;
    int action = -1;
    std::string message;
};

/// Checks the model invariants and returns all violations (empty = valid).
inline std::vector<ValidationIssue> validate_mdp(const Mdp& m) {
    std::vector<ValidationIssue> issues;
    auto add = [&](int s, int a, std::string msg) { issues.push_back({s, a, std::move(msg)}); };

    if (m.num_states <= 0) add(-1, -1, "model has no states");
    if (m.initial < 0 || m.initial >= m.num_states)
        add(-1, -1, "initial state index out of range");
    if (static_cast<int>(m.delta.size()) != m.num_states)
        add(-1, -1, "transition table size does not match state count");

    for (int s = 0; s < m.num_states && s < static_cast<int>(m.delta.size()); ++s) {
        bool any_enabled = false;
        for (int a = 0; a < m.num_actions(); ++a) {
            const auto& br = m.delta[s][a];
            if (br.empty()) continue;
            any_enabled = true;
            Rational sum(0);
            std::vector<int> seen;
            for (const Transition& t : br) {
                if (t.dst < 0 || t.dst >= m.num_states)
                    add(s, a, "successor index " + std::to_string(t.dst) + " out of range");
                if (!t.prob.positive() || Rational(1) < t.prob)
                    add(s, a, "branch probability " + t.prob.str() + " outside (0,1]");
                for (int d : seen)
                    if (d == t.dst) {
                        add(s, a, "duplicate successor " + std::to_string(t.dst));
                        break;
                    }
                seen.push_back(t.dst);
                sum = sum + t.prob;
            }
            if (!sum.is_one())
                add(s, a, "probabilities sum to " + sum.str() + ", expected 1");
        }
        if (!any_enabled) add(s, -1, "state has no enabled action");
    }
    return issues;
}

/// A reachability objective: the plays that ever visit `target`.
struct ReachabilityObjective {
    std::string name;
    Bitset target;
};

/// Nondeterministic memoryless strategy: a set of allowed actions per state.
/// Empty sets are legal (outside a winning region the strategy is silent).
struct Strategy {
    std::vector<Bitset> allowed;

    Strategy() = default;
    Strategy(int states, int actions) : allowed(states, Bitset(actions)) {}

    int num_states() const { return static_cast<int>(allowed.size()); }
    const Bitset& at(int s) const { return allowed[s]; }
};

} // namespace prefplan
