#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "prefplan/mdp.hpp"
#include "prefplan/preference.hpp"
#include "prefplan/scenarios.hpp"
#include "prefplan/simulate.hpp"
#include "prefplan/synthesis.hpp"

namespace prefplan {

/// Malformed input files (as opposed to well-formed but invalid models).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

namespace detail {

inline Json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON in " + path);
    return j;
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace detail

// ---- MDP files -----------------------------------------------------------
// {"states": N, "actions": [...], "initial": i,
//  "transitions": [[src, actionIndex, dst, "p/q"], ...]}

inline std::string mdp_to_json(const Mdp& m) {
    Json j;
    j["states"] = m.num_states;
    j["actions"] = m.action_names;
    j["initial"] = m.initial;
    Json trans = Json::array();
    for (int s = 0; s < m.num_states; ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            for (const Transition& t : m.branches(s, a))
                trans.push_back(Json::array({s, a, t.dst, t.prob.str()}));
    j["transitions"] = std::move(trans);
    return j.dump(2) + "\n";
}

inline Mdp mdp_from_json(const Json& j) {
    try {
        Mdp m;
        m.resize(j.at("states").get<int>(), j.at("actions").get<std::vector<std::string>>());
        m.initial = j.at("initial").get<int>();
        for (const auto& row : j.at("transitions")) {
            if (!row.is_array() || row.size() != 4)
                throw ParseError("transition rows must be [src, action, dst, prob]");
            int s = row[0].get<int>(), a = row[1].get<int>(), d = row[2].get<int>();
            if (s < 0 || s >= m.num_states || a < 0 || a >= m.num_actions() || d < 0 ||
                d >= m.num_states)
                throw ParseError("transition indices out of range");
            m.add_transition(s, a, d, Rational::parse(row[3].get<std::string>()));
        }
        return m;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad MDP file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("bad MDP file: ") + e.what());
    }
}

inline Mdp load_mdp(const std::string& path) { return mdp_from_json(detail::parse_file(path)); }
inline void save_mdp(const std::string& path, const Mdp& m) {
    detail::write_file(path, mdp_to_json(m));
}

// ---- Objective files -------------------------------------------------------
// {"objectives": [{"name": "F1", "states": [..]}, ...]}

inline std::string objectives_to_json(const std::vector<ReachabilityObjective>& objectives) {
    Json j;
    Json arr = Json::array();
    for (const auto& o : objectives) {
        Json e;
        e["name"] = o.name;
        e["states"] = o.target.to_vector();
        arr.push_back(std::move(e));
    }
    j["objectives"] = std::move(arr);
    return j.dump(2) + "\n";
}

inline std::vector<ReachabilityObjective> objectives_from_json(const Json& j, int num_states) {
    try {
        std::vector<ReachabilityObjective> out;
        for (const auto& e : j.at("objectives")) {
            ReachabilityObjective o;
            o.name = e.at("name").get<std::string>();
            o.target = Bitset(num_states);
            for (int s : e.at("states").get<std::vector<int>>()) {
                if (s < 0 || s >= num_states)
                    throw ParseError("objective state index out of range");
                o.target.set(s);
            }
            if (o.target.none()) throw ParseError("objective " + o.name + " has no states");
            out.push_back(std::move(o));
        }
        return out;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad objectives file: ") + e.what());
    }
}

inline std::vector<ReachabilityObjective> load_objectives(const std::string& path,
                                                          int num_states) {
    return objectives_from_json(detail::parse_file(path), num_states);
}
inline void save_objectives(const std::string& path,
                            const std::vector<ReachabilityObjective>& objectives) {
    detail::write_file(path, objectives_to_json(objectives));
}

// ---- Preference files ------------------------------------------------------
// {"objectives": ["A",...], "prefers": [["D","A"],...], "bottom_element": true}
// Each pair states the first objective is strictly preferred to the second.

struct PreferenceFile {
    PreferenceModel model;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> warnings; // user-strict edges collapsed by closure
};

inline std::string preferences_to_json(const std::vector<ReachabilityObjective>& objectives,
                                       const std::vector<std::pair<int, int>>& edges,
                                       bool bottom_element) {
    Json j;
    Json names = Json::array();
    for (const auto& o : objectives) names.push_back(o.name);
    j["objectives"] = std::move(names);
    Json prefers = Json::array();
    for (auto [hi, lo] : edges)
        prefers.push_back(Json::array({objectives[static_cast<size_t>(hi)].name,
                                       objectives[static_cast<size_t>(lo)].name}));
    j["prefers"] = std::move(prefers);
    j["bottom_element"] = bottom_element;
    return j.dump(2) + "\n";
}

inline PreferenceFile preferences_from_json(const Json& j,
                                            const std::vector<ReachabilityObjective>& objectives) {
    try {
        auto names = j.at("objectives").get<std::vector<std::string>>();
        if (names.size() != objectives.size())
            throw ParseError("preference file lists a different objective count");
        auto index_of = [&](const std::string& n) {
            for (size_t i = 0; i < names.size(); ++i)
                if (names[i] == n) return static_cast<int>(i);
            throw ParseError("preference over unknown objective " + n);
        };
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] != objectives[i].name)
                throw ParseError("objective order mismatch between files");

        PreferenceFile pf;
        for (const auto& pair : j.at("prefers")) {
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("prefers entries must be pairs");
            pf.edges.push_back(
                {index_of(pair[0].get<std::string>()), index_of(pair[1].get<std::string>())});
        }
        bool bottom = j.value("bottom_element", true);
        pf.model = PreferenceModel::close_preorder(pf.edges, static_cast<int>(names.size()), bottom);
        for (auto [i, k] : pf.model.collapsed_strict_edges(pf.edges))
            pf.warnings.push_back("preference " + names[static_cast<size_t>(i)] + " over " +
                                  names[static_cast<size_t>(k)] +
                                  " collapsed to indifference by transitive closure");
        return pf;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad preference file: ") + e.what());
    }
}

inline PreferenceFile load_preferences(const std::string& path,
                                       const std::vector<ReachabilityObjective>& objectives) {
    return preferences_from_json(detail::parse_file(path), objectives);
}

// ---- Strategy export -------------------------------------------------------

inline std::string product_state_label(int v) {
    return "s" + std::to_string(ImprovementMdp::base_of(v)) + "|m" +
           std::to_string(ImprovementMdp::flag_of(v));
}

inline std::string strategy_to_json(const ImprovementMdp& imdp, const Strategy& strategy,
                                    const std::string& mode) {
    Json j;
    j["mode"] = mode;
    j["bottom_element"] = imdp.prefs.has_bottom();
    Json choices = Json::array();
    for (int v = 0; v < imdp.num_product_states(); ++v) {
        if (strategy.at(v).none()) continue;
        Json e;
        e["state"] = product_state_label(v);
        Json acts = Json::array();
        strategy.at(v).for_each([&](int a) { acts.push_back(imdp.product.action_names[a]); });
        e["actions"] = std::move(acts);
        choices.push_back(std::move(e));
    }
    j["choices"] = std::move(choices);
    return j.dump(2) + "\n";
}

inline std::string counter_strategy_to_json(const ImprovementMdp& imdp,
                                            const CounterStrategy& cs, int counter_init) {
    Json j;
    j["mode"] = "sasi";
    j["bottom_element"] = imdp.prefs.has_bottom();
    j["counter_init"] = counter_init;
    Json choices = Json::array();
    for (int c = cs.max_counter; c >= 1; --c) {
        for (int v = 0; v < imdp.num_product_states(); ++v) {
            int plain = ImprovementMdp::vid(ImprovementMdp::base_of(v), 0);
            const Bitset& set = cs.phases[static_cast<size_t>(c - 1)].at(plain);
            if (set.none()) continue;
            Json e;
            e["state"] = product_state_label(v);
            e["counter"] = c;
            Json acts = Json::array();
            set.for_each([&](int a) { acts.push_back(imdp.product.action_names[a]); });
            e["actions"] = std::move(acts);
            choices.push_back(std::move(e));
        }
    }
    j["choices"] = std::move(choices);
    return j.dump(2) + "\n";
}

// ---- Rank table ------------------------------------------------------------
// CSV: state,rank_sasi,rank_spi  (one row per base state; flag copies share
// their rank). Unbounded ranks print as "inf".

inline std::string ranks_to_csv(const ImprovementMdp& imdp, const RankTable& sasi,
                                const RankTable& spi) {
    std::ostringstream out;
    out << "state,rank_sasi,rank_spi\n";
    auto cell = [](const Rank& r) {
        return r.unbounded ? std::string("inf") : std::to_string(r.value);
    };
    for (int s = 0; s < imdp.base_states; ++s)
        out << "s" << s << "," << cell(sasi.ranks[static_cast<size_t>(s)]) << ","
            << cell(spi.ranks[static_cast<size_t>(s)]) << "\n";
    return out.str();
}

// ---- Run summaries ---------------------------------------------------------

inline std::string summary_to_csv(const RunSummary& rs) {
    std::ostringstream out;
    out << "run_index,improvements\n";
    for (size_t i = 0; i < rs.improvements.size(); ++i)
        out << i << "," << rs.improvements[i] << "\n";
    return out.str();
}

inline std::string summary_to_json(const RunSummary& rs, const std::string& mode,
                                   bool bottom_element) {
    Json j;
    j["mode"] = mode;
    j["runs"] = rs.runs;
    j["horizon"] = rs.horizon;
    j["seed"] = rs.seed;
    j["bottom_element"] = bottom_element;
    Json fr;
    int top = rs.max_improvements();
    for (int k = 1; k <= std::max(top, 1); ++k)
        fr["at_least_" + std::to_string(k)] = rs.fraction_at_least(k);
    j["fractions"] = std::move(fr);
    j["dead_end_runs"] = rs.dead_end_runs;
    return j.dump(2) + "\n";
}

// ---- Improvement product export (debug) -------------------------------------

inline std::string product_to_json(const ImprovementMdp& imdp) {
    Json j;
    j["states"] = imdp.num_product_states();
    j["actions"] = imdp.product.action_names;
    j["initial"] = imdp.v0;
    Json trans = Json::array();
    for (int v = 0; v < imdp.num_product_states(); ++v)
        for (int a = 0; a < imdp.product.num_actions(); ++a)
            for (const Transition& t : imdp.product.branches(v, a))
                trans.push_back(Json::array({v, a, t.dst, t.prob.str()}));
    j["transitions"] = std::move(trans);
    Json names = Json::array();
    for (int v = 0; v < imdp.num_product_states(); ++v) names.push_back(product_state_label(v));
    j["state_names"] = std::move(names);
    j["final_states"] = imdp.finals.to_vector();
    return j.dump(2) + "\n";
}

// ---- Gridworld config ------------------------------------------------------

inline std::string gridworld_config_to_json(const GridworldConfig& cfg) {
    Json j;
    j["rows"] = cfg.rows;
    j["cols"] = cfg.cols;
    Json regions;
    for (const auto& [name, cell] : cfg.regions) regions[name] = Json::array({cell.row, cell.col});
    j["regions"] = std::move(regions);
    j["charging"] = Json::array({cfg.charging.row, cfg.charging.col});
    j["initial_cell"] = Json::array({cfg.initial_cell.row, cfg.initial_cell.col});
    j["battery_capacity"] = cfg.battery_capacity;
    j["initial_battery"] = cfg.initial_battery;
    Json slippery = Json::array();
    for (const Cell& c : cfg.slippery) slippery.push_back(Json::array({c.row, c.col}));
    j["slippery"] = std::move(slippery);
    j["slip_distribution"] = {
        {"stay", cfg.slip_stay.str()}, {"north", cfg.slip_north.str()}, {"south", cfg.slip_south.str()}};
    Json disabled = Json::array();
    for (const auto& [cell, acts] : cfg.disabled_actions) {
        Json e;
        e["cell"] = Json::array({cell.row, cell.col});
        e["actions"] = acts;
        disabled.push_back(std::move(e));
    }
    j["disabled_actions"] = std::move(disabled);
    j["initial_available"] = cfg.initial_available;
    Json effects;
    for (const auto& [item, eff] : cfg.pickup_effects) {
        Json e;
        e["disable"] = eff.disable;
        e["enable"] = eff.enable;
        effects[item] = std::move(e);
    }
    j["pickup_effects"] = std::move(effects);
    Json prefers = Json::array();
    for (const auto& [hi, lo] : cfg.prefers) prefers.push_back(Json::array({hi, lo}));
    j["prefers"] = std::move(prefers);
    j["bottom_element"] = cfg.bottom_element;
    return j.dump(2) + "\n";
}

inline GridworldConfig gridworld_config_from_json(const Json& j) {
    try {
        GridworldConfig cfg;
        cfg.rows = j.at("rows").get<int>();
        cfg.cols = j.at("cols").get<int>();
        auto cell_of = [](const Json& a) -> Cell {
            if (!a.is_array() || a.size() != 2) throw ParseError("cells must be [row, col]");
            return {a[0].get<int>(), a[1].get<int>()};
        };
        for (const auto& [name, cell] : j.at("regions").items())
            cfg.regions[name] = cell_of(cell);
        cfg.charging = cell_of(j.at("charging"));
        cfg.initial_cell = cell_of(j.at("initial_cell"));
        cfg.battery_capacity = j.at("battery_capacity").get<int>();
        cfg.initial_battery = j.at("initial_battery").get<int>();
        cfg.slippery.clear();
        for (const auto& c : j.at("slippery")) cfg.slippery.push_back(cell_of(c));
        if (j.contains("slip_distribution")) {
            const auto& sd = j.at("slip_distribution");
            cfg.slip_stay = Rational::parse(sd.at("stay").get<std::string>());
            cfg.slip_north = Rational::parse(sd.at("north").get<std::string>());
            cfg.slip_south = Rational::parse(sd.at("south").get<std::string>());
        }
        cfg.disabled_actions.clear();
        for (const auto& e : j.at("disabled_actions"))
            cfg.disabled_actions[cell_of(e.at("cell"))] =
                e.at("actions").get<std::vector<std::string>>();
        cfg.initial_available = j.at("initial_available").get<std::vector<std::string>>();
        cfg.pickup_effects.clear();
        for (const auto& [item, e] : j.at("pickup_effects").items())
            cfg.pickup_effects[item] = {e.at("disable").get<std::vector<std::string>>(),
                                        e.at("enable").get<std::vector<std::string>>()};
        cfg.prefers.clear();
        for (const auto& p : j.at("prefers"))
            cfg.prefers.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
        cfg.bottom_element = j.value("bottom_element", true);
        return cfg;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("bad gridworld config: ") + e.what());
    }
}

inline GridworldConfig load_gridworld_config(const std::string& path) {
    return gridworld_config_from_json(detail::parse_file(path));
}

} // namespace prefplan
