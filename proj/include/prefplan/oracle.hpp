#pragma once

#include <stdexcept>
#include <vector>

#include "prefplan/mdp.hpp"

namespace prefplan {

enum class ReachGrade { Zero, Positive, AlmostSure };

/// Exhaustive reachability oracle for small instances. Enumerates every
/// memoryless deterministic strategy, builds the induced chain with the
/// target made absorbing, and grades each state:
///   almost-sure  — every reachable bottom SCC lies inside the target,
///   positive     — the target is graph-reachable,
/// taking the best grade over all strategies. Pure graph analysis.
inline std::vector<ReachGrade> oracle_reach_qualitative(const Mdp& m, const Bitset& target) {
    if (target.none()) throw std::invalid_argument("empty objective");
    if (m.num_states > 10 || m.num_actions() > 3)
        throw std::invalid_argument("oracle scale exceeded");

    const int n = m.num_states;
    std::vector<std::vector<int>> choices(n);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < m.num_actions(); ++a)
            if (m.enabled(s, a)) choices[s].push_back(a);
        if (choices[s].empty()) throw std::invalid_argument("state with no enabled action");
    }

    std::vector<ReachGrade> best(n, ReachGrade::Zero);
    std::vector<int> pick(n, 0);

    std::vector<std::vector<int>> succ(n);
    std::vector<int> color(n), low(n), order(n), comp(n), stack;
    std::vector<bool> on_stack(n);

    while (true) {
        // induced chain, target absorbing
        for (int s = 0; s < n; ++s) {
            succ[s].clear();
            if (target.test(s)) {
                succ[s].push_back(s);
                continue;
            }
            for (const Transition& t : m.branches(s, choices[s][pick[s]])) succ[s].push_back(t.dst);
        }

        // Tarjan SCCs (iterative)
        int timer = 0, ncomp = 0;
        std::fill(color.begin(), color.end(), -1);
        std::fill(comp.begin(), comp.end(), -1);
        stack.clear();
        std::fill(on_stack.begin(), on_stack.end(), false);
        std::vector<std::pair<int, size_t>> dfs;
        for (int root = 0; root < n; ++root) {
            if (color[root] != -1) continue;
            dfs.push_back({root, 0});
            color[root] = low[root] = timer++;
            stack.push_back(root);
            on_stack[root] = true;
            while (!dfs.empty()) {
                auto& [v, ei] = dfs.back();
                if (ei < succ[v].size()) {
                    int w = succ[v][ei++];
                    if (color[w] == -1) {
                        color[w] = low[w] = timer++;
                        stack.push_back(w);
                        on_stack[w] = true;
                        dfs.push_back({w, 0});
                    } else if (on_stack[w]) {
                        if (color[w] < low[v]) low[v] = color[w];
                    }
                } else {
                    if (low[v] == color[v]) {
                        while (true) {
                            int w = stack.back();
                            stack.pop_back();
                            on_stack[w] = false;
                            comp[w] = ncomp;
                            if (w == v) break;
                        }
                        ++ncomp;
                    }
                    int vv = v;
                    dfs.pop_back();
                    if (!dfs.empty() && low[vv] < low[dfs.back().first]) low[dfs.back().first] = low[vv];
                }
            }
        }

        // A component is bottom iff no edge leaves it. Mark bad bottoms
        // (bottom SCCs containing a non-target state).
        std::vector<bool> leaves(ncomp, false), has_nontarget(ncomp, false);
        for (int s = 0; s < n; ++s) {
            if (!target.test(s)) has_nontarget[comp[s]] = true;
            for (int w : succ[s])
                if (comp[w] != comp[s]) leaves[comp[s]] = true;
        }

        // forward reachability per state (n is tiny)
        for (int s = 0; s < n; ++s) {
            std::vector<bool> seen(n, false);
            std::vector<int> q{s};
            seen[s] = true;
            bool hit_target = target.test(s);
            bool hit_bad_bottom = false;
            for (size_t qi = 0; qi < q.size(); ++qi) {
                int v = q[qi];
                if (target.test(v)) hit_target = true;
                if (!leaves[comp[v]] && has_nontarget[comp[v]]) hit_bad_bottom = true;
                for (int w : succ[v])
                    if (!seen[w]) {
                        seen[w] = true;
                        q.push_back(w);
                    }
            }
            if (hit_target) {
                if (!hit_bad_bottom)
                    best[s] = ReachGrade::AlmostSure;
                else if (best[s] == ReachGrade::Zero)
                    best[s] = ReachGrade::Positive;
            }
        }

        // next strategy (odometer)
        int i = 0;
        for (; i < n; ++i) {
            if (++pick[i] < static_cast<int>(choices[i].size())) break;
            pick[i] = 0;
        }
        if (i == n) break;
    }
    return best;
}

} // namespace prefplan
