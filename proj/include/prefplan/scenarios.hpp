#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "prefplan/mdp.hpp"
#include "prefplan/preference.hpp"

namespace prefplan {

struct Scenario {
    Mdp mdp;
    std::vector<ReachabilityObjective> objectives;
    PreferenceModel prefs;
    std::vector<std::pair<int, int>> pref_edges; // strict statements before closure
};

/// Six-state model with one almost-surely reachable low-value objective and
/// two higher-valued objectives reachable only with positive probability.
/// Action a keeps the play inside F1; actions b and c gamble between the
/// better targets. Sinks carry explicit self-loops.
inline Scenario build_toy_example() {
    Scenario sc;
    sc.mdp.resize(6, {"a", "b", "c"});
    sc.mdp.initial = 0;
    Rational half(1, 2), one(1);
    sc.mdp.add_transition(0, 0, 1, half);
    sc.mdp.add_transition(0, 0, 5, half);
    sc.mdp.add_transition(0, 1, 2, half);
    sc.mdp.add_transition(0, 1, 3, half);
    sc.mdp.add_transition(0, 2, 3, half);
    sc.mdp.add_transition(0, 2, 4, half);
    sc.mdp.add_transition(1, 0, 1, one);
    sc.mdp.add_transition(2, 0, 2, one);
    sc.mdp.add_transition(3, 0, 3, one);
    sc.mdp.add_transition(4, 0, 4, one);
    sc.mdp.add_transition(5, 0, 1, one);

    Bitset f1(6), f2(6), f3(6);
    f1.set(1);
    f1.set(5);
    f2.set(2);
    f2.set(4);
    f3.set(3);
    sc.objectives = {{"F1", f1}, {"F2", f2}, {"F3", f3}};

    sc.pref_edges = {{1, 0}, {2, 0}}; // F2 over F1, F3 over F1
    sc.prefs = PreferenceModel::close_preorder(sc.pref_edges, 3, true);
    return sc;
}

struct Cell {
    int row = 0;
    int col = 0;
    bool operator==(const Cell& o) const { return row == o.row && col == o.col; }
    bool operator<(const Cell& o) const { return row < o.row || (row == o.row && col < o.col); }
};

/// Availability update applied when an item is picked up.
struct PickupEffect {
    std::vector<std::string> disable;
    std::vector<std::string> enable;
};

struct GridworldConfig {
    int rows = 5;
    int cols = 5;
    std::map<std::string, Cell> regions;      // item name -> cell
    Cell charging{4, 2};
    Cell initial_cell{2, 2};
    int battery_capacity = 8;
    int initial_battery = 8;
    std::vector<Cell> slippery;
    // slip outcome weights when moving into a slippery cell
    Rational slip_stay{1, 3};
    Rational slip_north{1, 3};
    Rational slip_south{1, 3};
    std::map<Cell, std::vector<std::string>> disabled_actions;
    std::vector<std::string> initial_available; // item names, "station" allowed
    std::map<std::string, PickupEffect> pickup_effects;
    std::vector<std::pair<std::string, std::string>> prefers; // strict, first over second
    bool bottom_element = true;
};

/// The configuration the repository ships for the 5x5 robot example. See
/// DEVIATIONS.md for how it was reconstructed and where it deviates from the
/// published description.
inline GridworldConfig default_gridworld_config() {
    GridworldConfig cfg;
    cfg.regions = {{"A", {0, 0}}, {"B", {2, 0}}, {"C", {4, 0}},
                   {"D", {2, 4}}, {"E", {4, 4}}, {"F", {0, 4}}};
    cfg.charging = {4, 2};
    cfg.initial_cell = {2, 2};
    cfg.battery_capacity = 8;
    cfg.initial_battery = 8;
    cfg.slippery = {{1, 1}, {3, 1}, {1, 3}, {3, 3}};
    // middle column is a vertical corridor; the east pocket (columns 3-4) is
    // entered at row 3 only and is one-way: W blocked on column 3, the item
    // ladder on column 4 runs south only, and the E chute is sealed off from
    // the ladder
    cfg.disabled_actions = {
        {{0, 2}, {"E", "W"}}, {{2, 2}, {"E", "W"}}, {{4, 2}, {"E", "W"}}, {{1, 2}, {"E"}},
        {{0, 3}, {"W"}},      {{1, 3}, {"W"}},      {{2, 3}, {"W"}},      {{3, 3}, {"W"}},
        {{4, 3}, {"W"}},      {{0, 4}, {"N"}},      {{1, 4}, {"N"}},      {{2, 4}, {"N"}},
        {{3, 4}, {"S"}},      {{4, 4}, {"S"}}};
    cfg.initial_available = {"A", "B", "C"};
    cfg.pickup_effects = {
        {"A", {{"A", "B", "C"}, {"D", "E", "station"}}},
        {"B", {{"A", "B", "C"}, {"D", "E", "station"}}},
        {"C", {{"A", "B", "C"}, {"E", "F", "station"}}},
        {"D", {{"D"}, {}}},
        {"E", {{"E"}, {}}},
        {"F", {{"F"}, {}}},
    };
    cfg.prefers = {{"D", "A"}, {"E", "A"}, {"D", "B"}, {"E", "B"}, {"E", "C"}, {"F", "C"}};
    cfg.bottom_element = true;
    return cfg;
}

inline std::vector<std::string> validate_gridworld_config(const GridworldConfig& cfg) {
    std::vector<std::string> errors;
    auto in_grid = [&](const Cell& c) {
        return c.row >= 0 && c.row < cfg.rows && c.col >= 0 && c.col < cfg.cols;
    };
    if (cfg.rows < 1 || cfg.cols < 1) errors.push_back("grid must be at least 1x1");
    if (cfg.battery_capacity < 1) errors.push_back("battery capacity must be at least 1");
    if (cfg.initial_battery < 1 || cfg.initial_battery > cfg.battery_capacity)
        errors.push_back("initial battery must be in [1, capacity]");
    if (!in_grid(cfg.initial_cell)) errors.push_back("initial cell outside grid");
    if (!in_grid(cfg.charging)) errors.push_back("charging cell outside grid");
    for (const auto& [name, cell] : cfg.regions)
        if (!in_grid(cell)) errors.push_back("region " + name + " outside grid");
    for (const Cell& c : cfg.slippery)
        if (!in_grid(c)) errors.push_back("slippery cell outside grid");
    for (const auto& [cell, acts] : cfg.disabled_actions) {
        if (!in_grid(cell)) errors.push_back("disabled-action cell outside grid");
        for (const std::string& a : acts)
            if (a != "N" && a != "S" && a != "E" && a != "W")
                errors.push_back("unknown action '" + a + "' in disabled set");
    }
    Rational slip_sum = cfg.slip_stay + cfg.slip_north + cfg.slip_south;
    if (!slip_sum.is_one()) errors.push_back("slip distribution must sum to 1");
    for (const std::string& item : cfg.initial_available)
        if (item != "station" && !cfg.regions.count(item))
            errors.push_back("initially available item '" + item + "' has no region");
    for (const auto& [name, eff] : cfg.pickup_effects) {
        if (!cfg.regions.count(name)) errors.push_back("pickup effect for unknown item " + name);
        for (const auto& lists : {eff.disable, eff.enable})
            for (const std::string& x : lists)
                if (x != "station" && !cfg.regions.count(x))
                    errors.push_back("pickup effect of " + name + " names unknown item " + x);
    }
    std::set<std::string> pickable;
    for (const std::string& x : cfg.initial_available)
        if (x != "station") pickable.insert(x);
    for (const auto& [name, eff] : cfg.pickup_effects)
        for (const std::string& x : eff.enable)
            if (x != "station") pickable.insert(x);
    if (pickable.empty()) errors.push_back("no pickable item; every objective would be empty");
    for (const auto& [a, b] : cfg.prefers) {
        if (!cfg.regions.count(a) || !cfg.regions.count(b))
            errors.push_back("preference over unknown items " + a + "," + b);
    }
    return errors;
}

/// Gridworld compiled to an explicit model. A state is (row, col, battery,
/// availability-node); the availability automaton is explored from the
/// initial availability through the pickup effects, so each node knows both
/// the set of items picked so far and the set currently available.
struct GridworldModel {
    Scenario scenario;
    GridworldConfig config;

    std::vector<std::string> item_names; // objective order
    struct AvailNode {
        std::set<std::string> picked;
        std::set<std::string> available;
    };
    std::vector<AvailNode> nodes;
    int num_cells = 0;

    int state_of(int row, int col, int battery, int node) const {
        int cell = row * config.cols + col;
        return (node * (config.battery_capacity + 1) + battery) * num_cells + cell;
    }
    int initial_state() const { return scenario.mdp.initial; }
};

namespace detail {

inline std::string picked_label(const std::set<std::string>& picked) {
    if (picked.empty()) return "-";
    std::string s;
    for (const auto& x : picked) s += x;
    return s;
}

} // namespace detail

inline GridworldModel build_gridworld(const GridworldConfig& cfg) {
    auto errors = validate_gridworld_config(cfg);
    if (!errors.empty()) {
        std::string msg = "invalid gridworld config:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw std::invalid_argument(msg);
    }

    GridworldModel gm;
    gm.config = cfg;
    gm.num_cells = cfg.rows * cfg.cols;

    // availability automaton: BFS over (picked, available) pairs
    using Node = GridworldModel::AvailNode;
    auto node_key = [](const Node& n) {
        std::string k;
        for (const auto& x : n.picked) k += x + ",";
        k += "|";
        for (const auto& x : n.available) k += x + ",";
        return k;
    };
    std::map<std::string, int> node_index;
    Node init;
    for (const auto& x : cfg.initial_available) init.available.insert(x);
    gm.nodes.push_back(init);
    node_index[node_key(init)] = 0;
    for (size_t qi = 0; qi < gm.nodes.size(); ++qi) {
        Node cur = gm.nodes[qi];
        for (const auto& [item, cell] : cfg.regions) {
            (void)cell;
            if (!cur.available.count(item)) continue;
            Node next = cur;
            next.picked.insert(item);
            next.available.erase(item);
            auto eff = cfg.pickup_effects.find(item);
            if (eff != cfg.pickup_effects.end()) {
                for (const auto& x : eff->second.disable) next.available.erase(x);
                for (const auto& x : eff->second.enable)
                    if (!next.picked.count(x)) next.available.insert(x);
            }
            std::string key = node_key(next);
            if (!node_index.count(key)) {
                node_index[key] = static_cast<int>(gm.nodes.size());
                gm.nodes.push_back(next);
            }
        }
    }

    // items that can ever be picked, in region-map order
    for (const auto& [item, cell] : cfg.regions) {
        (void)cell;
        for (const auto& node : gm.nodes)
            if (node.available.count(item) || node.picked.count(item)) {
                gm.item_names.push_back(item);
                break;
            }
    }

    const int levels = cfg.battery_capacity + 1;
    const int num_states = static_cast<int>(gm.nodes.size()) * levels * gm.num_cells;
    Mdp& m = gm.scenario.mdp;
    m.resize(num_states, {"N", "S", "E", "W"});
    m.state_names.resize(num_states);

    std::map<Cell, std::string> item_at;
    for (const auto& [item, cell] : cfg.regions) item_at[cell] = item;
    std::set<Cell> slippery(cfg.slippery.begin(), cfg.slippery.end());

    auto clip = [&](int r, int c, const Cell& fallback) -> Cell {
        if (r < 0 || r >= cfg.rows || c < 0 || c >= cfg.cols) return fallback;
        return {r, c};
    };

    // resolves entry into a cell: pickup, then recharge, then death check
    auto successor = [&](const Cell& dest, int battery_after_move, int node) -> int {
        int nd = node;
        auto it = item_at.find(dest);
        if (it != item_at.end() && gm.nodes[nd].available.count(it->second)) {
            Node next = gm.nodes[nd];
            next.picked.insert(it->second);
            next.available.erase(it->second);
            auto eff = cfg.pickup_effects.find(it->second);
            if (eff != cfg.pickup_effects.end()) {
                for (const auto& x : eff->second.disable) next.available.erase(x);
                for (const auto& x : eff->second.enable)
                    if (!next.picked.count(x)) next.available.insert(x);
            }
            nd = node_index.at(node_key(next));
        }
        int b = battery_after_move;
        if (dest == cfg.charging && gm.nodes[nd].available.count("station"))
            b = cfg.battery_capacity;
        return gm.state_of(dest.row, dest.col, b, nd);
    };

    const char* action_names[4] = {"N", "S", "E", "W"};
    const int drow[4] = {1, -1, 0, 0};
    const int dcol[4] = {0, 0, 1, -1};

    for (int node = 0; node < static_cast<int>(gm.nodes.size()); ++node) {
        for (int b = 0; b < levels; ++b) {
            for (int r = 0; r < cfg.rows; ++r) {
                for (int c = 0; c < cfg.cols; ++c) {
                    int s = gm.state_of(r, c, b, node);
                    m.state_names[s] = "(" + std::to_string(r) + "," + std::to_string(c) + "," +
                                       std::to_string(b) + "," +
                                       detail::picked_label(gm.nodes[node].picked) + ")";
                    if (b == 0) {
                        // dead: the robot cannot act; a single absorbing loop
                        m.add_transition(s, 0, s, Rational(1));
                        continue;
                    }
                    auto disabled = cfg.disabled_actions.find({r, c});
                    for (int a = 0; a < 4; ++a) {
                        if (disabled != cfg.disabled_actions.end()) {
                            bool off = false;
                            for (const auto& d : disabled->second)
                                if (d == action_names[a]) off = true;
                            if (off) continue;
                        }
                        Cell dest = clip(r + drow[a], c + dcol[a], {r, c});
                        bool moved = !(dest == Cell{r, c});
                        std::map<int, Rational> outs;
                        auto add_out = [&](const Cell& target_cell, const Rational& p) {
                            if (!p.positive()) return;
                            int v = successor(target_cell, b - 1, node);
                            auto it = outs.find(v);
                            if (it == outs.end())
                                outs.emplace(v, p);
                            else
                                it->second = it->second + p;
                        };
                        if (moved && slippery.count(dest)) {
                            add_out(dest, cfg.slip_stay);
                            add_out(clip(dest.row + 1, dest.col, dest), cfg.slip_north);
                            add_out(clip(dest.row - 1, dest.col, dest), cfg.slip_south);
                        } else {
                            add_out(dest, Rational(1));
                        }
                        for (const auto& [dst, p] : outs) m.add_transition(s, a, dst, p);
                    }
                }
            }
        }
    }

    m.initial = gm.state_of(cfg.initial_cell.row, cfg.initial_cell.col, cfg.initial_battery, 0);

    // objectives: item picked and still alive
    for (const std::string& item : gm.item_names) {
        Bitset target(num_states);
        for (int node = 0; node < static_cast<int>(gm.nodes.size()); ++node) {
            if (!gm.nodes[node].picked.count(item)) continue;
            for (int b = 1; b < levels; ++b)
                for (int cell = 0; cell < gm.num_cells; ++cell)
                    target.set(gm.state_of(cell / cfg.cols, cell % cfg.cols, b, node));
        }
        if (target.none())
            throw std::invalid_argument("objective " + item + " is empty (item never pickable)");
        gm.scenario.objectives.push_back({item, target});
    }

    auto obj_index = [&](const std::string& name) {
        for (size_t i = 0; i < gm.item_names.size(); ++i)
            if (gm.item_names[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("preference over item without objective: " + name);
    };
    for (const auto& [hi, lo] : cfg.prefers)
        gm.scenario.pref_edges.push_back({obj_index(hi), obj_index(lo)});
    gm.scenario.prefs =
        PreferenceModel::close_preorder(gm.scenario.pref_edges,
                                        static_cast<int>(gm.item_names.size()), cfg.bottom_element);
    return gm;
}

/// Total number of probability branches, a size measure for reporting.
inline long long count_transitions(const Mdp& m) {
    long long n = 0;
    for (int s = 0; s < m.num_states; ++s)
        for (int a = 0; a < m.num_actions(); ++a) n += static_cast<long long>(m.branches(s, a).size());
    return n;
}

} // namespace prefplan
