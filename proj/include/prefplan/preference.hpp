#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prefplan/mdp.hpp"
#include "prefplan/util.hpp"

namespace prefplan {

enum class Comparison { StrictlyPreferred, StrictlyWorse, Indifferent, Incomparable };

/// Preorder over objective indices: the reflexive-transitive closure of the
/// user's preference statements. Incomparability and indifference cycles are
/// both legal. `bottom_element` switches on the convention that "nothing
/// achievable" sits strictly below every objective.
class PreferenceModel {
public:
    PreferenceModel() = default;

    static PreferenceModel close_preorder(const std::vector<std::pair<int, int>>& weak_edges,
                                          int n, bool bottom_element = true) {
        PreferenceModel pm;
        pm.n_ = n;
        pm.bottom_ = bottom_element;
        pm.weak_.assign(n, Bitset(n));
        for (int i = 0; i < n; ++i) pm.weak_[i].set(i);
        for (auto [i, j] : weak_edges) {
            if (i < 0 || i >= n || j < 0 || j >= n)
                throw std::invalid_argument("preference edge index out of range");
            pm.weak_[i].set(j);
        }
        // transitive closure
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                if (pm.weak_[i].test(k)) pm.weak_[i] |= pm.weak_[k];
        return pm;
    }

    int size() const { return n_; }
    bool has_bottom() const { return bottom_; }
    void set_bottom(bool b) { bottom_ = b; }

    bool weakly_preferred(int i, int j) const { return weak_[i].test(j); }
    bool strictly_preferred(int i, int j) const {
        return weak_[i].test(j) && !weak_[j].test(i);
    }

    Comparison compare(int i, int j) const {
        bool ij = weak_[i].test(j), ji = weak_[j].test(i);
        if (ij && ji) return Comparison::Indifferent;
        if (ij) return Comparison::StrictlyPreferred;
        if (ji) return Comparison::StrictlyWorse;
        return Comparison::Incomparable;
    }

    /// Input edges that the closure collapsed into indifference (the user
    /// asked for strictness that does not survive transitivity).
    std::vector<std::pair<int, int>> collapsed_strict_edges(
        const std::vector<std::pair<int, int>>& edges) const {
        std::vector<std::pair<int, int>> out;
        for (auto [i, j] : edges)
            if (weak_[j].test(i)) out.push_back({i, j});
        return out;
    }

private:
    int n_ = 0;
    bool bottom_ = true;
    std::vector<Bitset> weak_;
};

/// A set of pairwise non-dominated objectives. The empty set doubles as the
/// bottom element ("no objective in scope") when the convention is on.
struct MpSet {
    Bitset elems;

    MpSet() = default;
    explicit MpSet(Bitset e) : elems(std::move(e)) {}

    bool is_bottom() const { return elems.none(); }
    bool operator==(const MpSet& o) const { return elems == o.elems; }
    bool operator!=(const MpSet& o) const { return elems != o.elems; }
};

/// Elements of `subset` with no strictly better element inside `subset`.
inline MpSet maximal_elements(const PreferenceModel& prefs, const Bitset& subset) {
    Bitset out(subset.size());
    subset.for_each([&](int i) {
        bool dominated = false;
        subset.for_each([&](int j) {
            if (!dominated && j != i && prefs.strictly_preferred(j, i)) dominated = true;
        });
        if (!dominated) out.set(i);
    });
    return MpSet(out);
}

struct MpTransitionFlags {
    bool improving = false;
    bool weakening = false;
};

/// Pairwise comparison of two most-preferred sets. With the bottom
/// convention, leaving bottom counts as improving and falling to bottom
/// counts as weakening.
inline MpTransitionFlags classify_mp_transition(const PreferenceModel& prefs, const MpSet& from,
                                                const MpSet& to) {
    MpTransitionFlags f;
    if (prefs.has_bottom()) {
        if (from.is_bottom() && !to.is_bottom()) return {true, false};
        if (!from.is_bottom() && to.is_bottom()) return {false, true};
        if (from.is_bottom() && to.is_bottom()) return {false, false};
    }
    from.elems.for_each([&](int r_old) {
        to.elems.for_each([&](int r_new) {
            if (prefs.strictly_preferred(r_new, r_old)) f.improving = true;
            if (prefs.strictly_preferred(r_old, r_new)) f.weakening = true;
        });
    });
    return f;
}

enum class PlayOrder { Better, Worse, Equivalent, Incomparable };

/// Induced order on plays via their most-preferred sets: strictly better iff
/// a one-directional strict pair exists, equivalent iff the sets coincide.
inline PlayOrder compare_plays(const PreferenceModel& prefs, const MpSet& a, const MpSet& b) {
    if (a == b) return PlayOrder::Equivalent;
    MpTransitionFlags f = classify_mp_transition(prefs, b, a); // improving = a over b
    if (f.improving && !f.weakening) return PlayOrder::Better;
    if (f.weakening && !f.improving) return PlayOrder::Worse;
    return PlayOrder::Incomparable;
}

/// Most-preferred set of the objectives satisfied along a state sequence.
inline MpSet mp_of_play(const Mdp& m, const std::vector<ReachabilityObjective>& objectives,
                        const PreferenceModel& prefs, const std::vector<int>& seq) {
    if (!m.valid_play(seq)) throw std::invalid_argument("invalid transition in state sequence");
    Bitset satisfied(static_cast<int>(objectives.size()));
    for (size_t i = 0; i < objectives.size(); ++i)
        for (int s : seq)
            if (objectives[i].target.test(s)) {
                satisfied.set(static_cast<int>(i));
                break;
            }
    return maximal_elements(prefs, satisfied);
}

} // namespace prefplan
