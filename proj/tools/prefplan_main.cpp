// prefplan: synthesis of safe improving strategies for MDPs under
// incomplete preferences over reachability objectives.
//
// Subcommands: validate, solve, rank, simulate, scenario.
// Exit codes: 0 success, 1 domain failure, 2 usage or parse failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "prefplan/io.hpp"
#include "prefplan/oracle.hpp"
#include "prefplan/scenarios.hpp"
#include "prefplan/simulate.hpp"
#include "prefplan/synthesis.hpp"

namespace fs = std::filesystem;
using namespace prefplan;

namespace {

uint64_t default_seed() {
    if (const char* env = std::getenv("PREFPLAN_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring unparsable PREFPLAN_SEED\n";
        }
    }
    return 0;
}

struct LoadedProblem {
    Mdp mdp;
    std::vector<ReachabilityObjective> objectives;
    PreferenceModel prefs;
};

LoadedProblem load_problem(const std::string& mdp_path, const std::string& objectives_path,
                           const std::string& prefs_path) {
    LoadedProblem p;
    p.mdp = load_mdp(mdp_path);
    auto issues = validate_mdp(p.mdp);
    if (!issues.empty()) {
        std::cerr << "model invalid:\n";
        for (const auto& i : issues) std::cerr << "  - " << i.message << "\n";
        throw std::invalid_argument("invalid model " + mdp_path);
    }
    p.objectives = load_objectives(objectives_path, p.mdp.num_states);
    PreferenceFile pf = load_preferences(prefs_path, p.objectives);
    for (const auto& w : pf.warnings) std::cerr << "warning: " << w << "\n";
    p.prefs = pf.model;
    return p;
}

int cmd_validate(const std::string& mdp_path) {
    Mdp m = load_mdp(mdp_path);
    auto issues = validate_mdp(m);
    if (issues.empty()) {
        std::cout << "ok: " << m.num_states << " states, " << count_transitions(m)
                  << " transitions\n";
        return 0;
    }
    std::cout << issues.size() << " violation(s):\n";
    for (const auto& i : issues) {
        std::cout << "  - ";
        if (i.state >= 0) std::cout << "state " << i.state << " ";
        if (i.action >= 0) std::cout << "action " << i.action << " ";
        std::cout << i.message << "\n";
    }
    return 1;
}

int cmd_solve(const std::string& mdp_path, const std::string& objectives_path,
              const std::string& prefs_path, const std::string& mode, const std::string& out,
              bool composed, const std::string& dump_product) {
    LoadedProblem p = load_problem(mdp_path, objectives_path, prefs_path);
    ImprovementMdp imdp = build_improvement_mdp(p.mdp, p.objectives, p.prefs);
    if (!dump_product.empty()) detail::write_file(dump_product, product_to_json(imdp));

    Bitset region(imdp.num_product_states());
    std::string payload;
    if (composed) {
        if (mode != "sasi") throw std::invalid_argument("--composed requires --mode sasi");
        LevelSets ls = sasi_level_sets(imdp);
        CounterStrategy cs = composed_sasi_strategy(imdp, ls);
        Rank r0 = rank_of(imdp, ls, imdp.v0);
        payload = counter_strategy_to_json(imdp, cs, r0.value);
        if (!ls.levels.empty()) region = ls.levels[0];
    } else if (mode == "sasi") {
        auto res = almost_sure_reach_region(imdp.product, imdp.finals);
        region = res.region;
        payload = strategy_to_json(imdp, res.strategy, mode);
    } else {
        region = positive_reach_region(imdp.product, imdp.finals);
        payload = strategy_to_json(imdp, spi_strategy(imdp), mode);
    }
    if (!out.empty()) detail::write_file(out, payload);

    bool initial_winning = region.test(imdp.v0);
    std::cout << "mode " << mode << (composed ? " (composed)" : "") << ": region "
              << region.count() << " of " << imdp.num_product_states()
              << " product states; initial state " << (initial_winning ? "winning" : "not winning")
              << "\n";
    return initial_winning ? 0 : 1;
}

int cmd_rank(const std::string& mdp_path, const std::string& objectives_path,
             const std::string& prefs_path, const std::string& mode, const std::string& out) {
    LoadedProblem p = load_problem(mdp_path, objectives_path, prefs_path);
    ImprovementMdp imdp = build_improvement_mdp(p.mdp, p.objectives, p.prefs);
    LevelSets as = sasi_level_sets(imdp);
    LevelSets pos = spi_level_sets(imdp);
    RankTable rt_as = rank_table(imdp, as);
    RankTable rt_pos = rank_table(imdp, pos);
    if (!out.empty()) detail::write_file(out, ranks_to_csv(imdp, rt_as, rt_pos));

    auto histogram = [&](const char* label, const RankTable& rt) {
        if (!rt.bounded)
            std::cout << label << ": UNBOUNDED ranks (improvement ladder hit a nonempty fixpoint)\n";
        int top = rt.max_rank();
        for (int k = 1; k <= top; ++k)
            std::cout << label << " states with rank >= " << k << ": " << rt.count_at_least(k)
                      << "\n";
        if (top == 0) std::cout << label << ": no state has a guaranteed improvement\n";
    };
    const RankTable& selected = (mode == "sasi") ? rt_as : rt_pos;
    histogram("sasi", rt_as);
    histogram("spi", rt_pos);
    std::cout << "max rank (" << mode << "): " << selected.max_rank() << "\n";
    return 0;
}

int cmd_simulate(const std::string& mdp_path, const std::string& objectives_path,
                 const std::string& prefs_path, const std::string& mode, int runs, int horizon,
                 uint64_t seed, bool composed, const std::string& out_prefix) {
    LoadedProblem p = load_problem(mdp_path, objectives_path, prefs_path);
    ImprovementMdp imdp = build_improvement_mdp(p.mdp, p.objectives, p.prefs);
    if (horizon <= 0) horizon = 10 * imdp.num_product_states();

    RunSummary rs;
    if (composed) {
        if (mode != "sasi") throw std::invalid_argument("--composed requires --mode sasi");
        LevelSets ls = sasi_level_sets(imdp);
        CounterStrategy cs = composed_sasi_strategy(imdp, ls);
        int counter = rank_of(imdp, ls, imdp.v0).value;
        rs = improvement_statistics(imdp, cs, counter, imdp.v0, runs, horizon, seed);
    } else {
        Strategy strategy = (mode == "sasi") ? sasi_strategy(imdp) : spi_strategy(imdp);
        rs = improvement_statistics(imdp, strategy, imdp.v0, runs, horizon, seed);
    }

    if (!out_prefix.empty()) {
        detail::write_file(out_prefix + ".csv", summary_to_csv(rs));
        detail::write_file(out_prefix + ".json",
                           summary_to_json(rs, mode, imdp.prefs.has_bottom()));
    }
    std::cout << "runs " << rs.runs << ", horizon " << rs.horizon << ", seed " << rs.seed << "\n";
    for (int k = 1; k <= std::max(rs.max_improvements(), 1); ++k)
        std::cout << "fraction with >= " << k << " improvements: " << rs.fraction_at_least(k)
                  << "\n";
    if (rs.dead_end_runs > 0)
        std::cout << "runs stopped at a dead product state: " << rs.dead_end_runs << "\n";
    return 0;
}

int cmd_scenario(const std::string& which, const std::string& config_path,
                 const std::string& out_dir) {
    Scenario sc;
    if (which == "toy") {
        sc = build_toy_example();
    } else if (which == "gridworld") {
        GridworldConfig cfg =
            config_path.empty() ? default_gridworld_config() : load_gridworld_config(config_path);
        GridworldModel gm = build_gridworld(cfg);
        sc = std::move(gm.scenario);
    } else {
        throw std::invalid_argument("unknown scenario " + which);
    }
    fs::create_directories(out_dir);
    save_mdp(out_dir + "/mdp.json", sc.mdp);
    save_objectives(out_dir + "/objectives.json", sc.objectives);
    detail::write_file(out_dir + "/preferences.json",
                       preferences_to_json(sc.objectives, sc.pref_edges, sc.prefs.has_bottom()));
    if (!sc.mdp.state_names.empty()) {
        Json names = Json::array();
        for (int s = 0; s < sc.mdp.num_states; ++s) names.push_back(sc.mdp.state_name(s));
        Json j;
        j["state_names"] = std::move(names);
        detail::write_file(out_dir + "/state_names.json", j.dump(2) + "\n");
    }
    std::cout << "scenario " << which << ": " << sc.mdp.num_states << " states, "
              << count_transitions(sc.mdp) << " transitions, " << sc.objectives.size()
              << " objectives -> " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Safe improving strategy synthesis for MDPs with incomplete preferences"};
    app.require_subcommand(1);

    std::string mdp_path, objectives_path, prefs_path, out, mode = "sasi";
    std::string scenario_name, config_path, out_dir = ".", dump_product, out_prefix;
    int runs = 10000, horizon = 0;
    uint64_t seed = default_seed();
    bool composed = false;

    auto add_problem_args = [&](CLI::App* cmd) {
        cmd->add_option("mdp", mdp_path, "model file")->required();
        cmd->add_option("objectives", objectives_path, "objectives file")->required();
        cmd->add_option("preferences", prefs_path, "preference file")->required();
        cmd->add_option("--mode", mode, "spi or sasi")
            ->check(CLI::IsMember({"spi", "sasi"}));
    };

    CLI::App* validate = app.add_subcommand("validate", "check a model file");
    validate->add_option("mdp", mdp_path, "model file")->required();

    CLI::App* solve = app.add_subcommand("solve", "synthesize an improving strategy");
    add_problem_args(solve);
    solve->add_option("--out", out, "strategy output file");
    solve->add_flag("--composed", composed, "rank-matched counter strategy (sasi only)");
    solve->add_option("--dump-product", dump_product, "write the improvement product as JSON");

    CLI::App* rank = app.add_subcommand("rank", "improvement ranks per state");
    add_problem_args(rank);
    rank->add_option("--out", out, "rank table CSV");

    CLI::App* simulate = app.add_subcommand("simulate", "sample runs and count improvements");
    add_problem_args(simulate);
    simulate->add_option("--runs", runs, "number of runs");
    simulate->add_option("--horizon", horizon, "steps per run (default 10x product size)");
    simulate->add_option("--seed", seed, "random seed (default from PREFPLAN_SEED)");
    simulate->add_flag("--composed", composed, "simulate the counter strategy");
    simulate->add_option("--out", out_prefix, "output prefix for CSV and JSON summaries");

    CLI::App* scenario = app.add_subcommand("scenario", "emit a bundled example model");
    scenario->add_option("name", scenario_name, "toy or gridworld")->required();
    scenario->add_option("--config", config_path, "gridworld config JSON");
    scenario->add_option("--out-dir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(mdp_path);
        if (solve->parsed())
            return cmd_solve(mdp_path, objectives_path, prefs_path, mode, out, composed,
                             dump_product);
        if (rank->parsed()) return cmd_rank(mdp_path, objectives_path, prefs_path, mode, out);
        if (simulate->parsed()) {
            if (runs < 1) {
                std::cerr << "error: --runs must be at least 1\n";
                return 2;
            }
            return cmd_simulate(mdp_path, objectives_path, prefs_path, mode, runs, horizon, seed,
                                composed, out_prefix);
        }
        if (scenario->parsed()) return cmd_scenario(scenario_name, config_path, out_dir);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
