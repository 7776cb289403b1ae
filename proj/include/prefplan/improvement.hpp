#pragma once

#include <string>
#include <vector>

#include "prefplan/mdp.hpp"
#include "prefplan/preference.hpp"
#include "prefplan/reachability.hpp"

namespace prefplan {

/// Per-state most-preferred sets over the almost-surely achievable
/// objectives. Memoryless by construction: achievability depends only on the
/// current state, so the table is computed once and shared.
struct MpTable {
    std::vector<MpSet> mp;

    const MpSet& at(int s) const { return mp[s]; }
};

inline MpTable compute_mp_table(const Mdp& m, const std::vector<ReachabilityObjective>& objectives,
                                const PreferenceModel& prefs) {
    const int n_obj = static_cast<int>(objectives.size());
    std::vector<Bitset> regions;
    regions.reserve(objectives.size());
    for (const auto& obj : objectives)
        regions.push_back(almost_sure_reach_region(m, obj.target).region);

    MpTable table;
    table.mp.reserve(m.num_states);
    for (int s = 0; s < m.num_states; ++s) {
        Bitset achievable(n_obj);
        for (int i = 0; i < n_obj; ++i)
            if (regions[i].test(s)) achievable.set(i);
        table.mp.push_back(maximal_elements(prefs, achievable));
    }
    return table;
}

/// Product of the MDP with a 1-bit improvement flag.
///
/// An action survives at a product state iff none of its successors loses
/// preference value against the current state (whole-action filtering: a
/// partially unsafe action would otherwise leave a sub-distribution). The
/// flag on a successor records whether that particular step gains value.
/// Product states where every action got filtered are kept but marked dead.
struct ImprovementMdp {
    Mdp product;           // 2*|S| states; state 2s+m is (s, flag m)
    int base_states = 0;
    int v0 = 0;
    Bitset finals;         // every (s,1)
    Bitset dead;           // product states with no surviving action
    MpTable mp;            // per base state
    PreferenceModel prefs;
    std::vector<ReachabilityObjective> objectives;

    static int vid(int s, int flag) { return 2 * s + flag; }
    static int base_of(int v) { return v / 2; }
    static int flag_of(int v) { return v & 1; }

    int num_product_states() const { return product.num_states; }
    const MpSet& mp_of(int v) const { return mp.at(base_of(v)); }

    /// Product-enabled actions at v (safety already baked in).
    Bitset safe_actions(int v) const { return product.enabled_actions(v); }
};

inline ImprovementMdp build_improvement_mdp(const Mdp& m,
                                            const std::vector<ReachabilityObjective>& objectives,
                                            const PreferenceModel& prefs) {
    ImprovementMdp imdp;
    imdp.base_states = m.num_states;
    imdp.mp = compute_mp_table(m, objectives, prefs);
    imdp.prefs = prefs;
    imdp.objectives = objectives;

    imdp.product.resize(2 * m.num_states, m.action_names);
    imdp.product.initial = ImprovementMdp::vid(m.initial, 0);
    imdp.v0 = imdp.product.initial;
    imdp.product.state_names.resize(2 * m.num_states);
    for (int s = 0; s < m.num_states; ++s)
        for (int f = 0; f < 2; ++f)
            imdp.product.state_names[ImprovementMdp::vid(s, f)] =
                m.state_name(s) + "|m" + std::to_string(f);

    imdp.finals = Bitset(2 * m.num_states);
    for (int s = 0; s < m.num_states; ++s) imdp.finals.set(ImprovementMdp::vid(s, 1));

    for (int s = 0; s < m.num_states; ++s) {
        const MpSet& here = imdp.mp.at(s);
        for (int a = 0; a < m.num_actions(); ++a) {
            if (!m.enabled(s, a)) continue;
            bool safe = true;
            for (const Transition& t : m.branches(s, a))
                if (classify_mp_transition(prefs, here, imdp.mp.at(t.dst)).weakening) {
                    safe = false;
                    break;
                }
            if (!safe) continue;
            for (int f = 0; f < 2; ++f) {
                int v = ImprovementMdp::vid(s, f);
                for (const Transition& t : m.branches(s, a)) {
                    bool improving =
                        classify_mp_transition(prefs, here, imdp.mp.at(t.dst)).improving;
                    imdp.product.add_transition(v, a, ImprovementMdp::vid(t.dst, improving ? 1 : 0),
                                                t.prob);
                }
            }
        }
    }

    imdp.dead = Bitset(2 * m.num_states);
    for (int v = 0; v < imdp.product.num_states; ++v)
        if (imdp.product.enabled_actions(v).none()) imdp.dead.set(v);
    return imdp;
}

/// Construction self-test: both flag copies of a state must offer the same
/// action supports.
inline bool check_support_symmetry(const ImprovementMdp& imdp) {
    for (int s = 0; s < imdp.base_states; ++s) {
        int v0 = ImprovementMdp::vid(s, 0), v1 = ImprovementMdp::vid(s, 1);
        for (int a = 0; a < imdp.product.num_actions(); ++a) {
            const auto& b0 = imdp.product.branches(v0, a);
            const auto& b1 = imdp.product.branches(v1, a);
            if (b0.size() != b1.size()) return false;
            for (size_t i = 0; i < b0.size(); ++i)
                if (b0[i].dst != b1[i].dst) return false;
        }
    }
    return true;
}

} // namespace prefplan
