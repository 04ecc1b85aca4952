#include <cstdio>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "owc/agents.hpp"
#include "owc/baselines.hpp"
#include "owc/env.hpp"
#include "owc/errors.hpp"
#include "owc/experiment.hpp"
#include "owc/scenario.hpp"

using namespace owc;

namespace {

struct CommonOpts {
    std::string scenario;
    std::string algo = "qlearning";
    int episodes = 0;  // 0 keeps the built-in default
    std::vector<std::uint64_t> seeds;
    std::string out;
    std::uint64_t oracle_budget = 10'000'000;
    bool serial = false;
    bool force = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scenario", o.scenario, "scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--algo", o.algo, "qlearning or sarsa");
    cmd->add_option("--episodes", o.episodes, "training episodes");
    cmd->add_option("--seeds", o.seeds, "comma-separated seeds")->delimiter(',');
    cmd->add_option("--out", o.out, "output CSV (default: stdout)");
    cmd->add_option("--oracle-budget", o.oracle_budget, "evaluation budget for the search reference");
    cmd->add_flag("--serial", o.serial, "single-threaded execution");
    cmd->add_flag("--force", o.force, "overwrite an existing output file");
}

RunOptions make_run_options(const CommonOpts& o) {
    RunOptions r;
    r.seeds = o.seeds;
    r.algo = algo_from_name(o.algo);
    if (o.episodes > 0) r.train.episodes = o.episodes;
    r.oracle_budget = o.oracle_budget;
    r.exec = o.serial ? ExecMode::Serial : ExecMode::Parallel;
    return r;
}

void emit(const ExperimentResult& res, const CommonOpts& o) {
    if (o.out.empty()) {
        std::cout << csv_string(res);
    } else {
        export_csv(res, o.out, o.force);
        std::printf("wrote %s (%zu rows)\n", o.out.c_str(), res.rows.size());
    }
}

int run(int argc, char** argv) {
    CLI::App app{"indoor optical wireless downlink with a steerable mirror array"};
    app.require_subcommand(1);

    CommonOpts vo, po, wo, bo, to, eo;
    std::vector<double> powers{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    std::vector<int> blocker_counts{0, 2, 3};
    std::vector<int> array_counts;
    std::string qtable_path;

    auto* validate = app.add_subcommand("validate", "parse and realize a scenario");
    validate->add_option("--scenario", vo.scenario, "scenario file")
        ->required()
        ->check(CLI::ExistingFile);

    auto* per_user =
        app.add_subcommand("per-user", "per-user rates for both learners and a search reference");
    add_common(per_user, po);

    auto* power_sweep = app.add_subcommand("power-sweep", "sum rate versus transmit power");
    add_common(power_sweep, wo);
    power_sweep->add_option("--powers", powers, "powers in watts")->delimiter(',');

    auto* blockage =
        app.add_subcommand("blockage-sweep", "sum rate versus blocker and array counts");
    add_common(blockage, bo);
    blockage->add_option("--blockers", blocker_counts, "blocker counts")->delimiter(',');
    blockage->add_option("--arrays", array_counts, "mirror-array counts")->delimiter(',');

    auto* train_cmd = app.add_subcommand("train", "train one policy and save its table");
    add_common(train_cmd, to);
    train_cmd->add_option("--qtable", qtable_path, "table output path")->required();

    auto* eval_cmd = app.add_subcommand("eval", "greedy rollout of a saved table");
    add_common(eval_cmd, eo);
    eval_cmd->add_option("--qtable", qtable_path, "table input path")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (*validate) {
        const ScenarioConfig cfg = load_scenario(vo.scenario);
        const Scene scene = realize_scene(cfg, cfg.seed);
        std::printf("scenario OK: users=%zu aps=%zu mirrors=%zu blockers=%zu seed=%llu\n",
                    scene.users.size(), scene.aps.size(), scene.mirrors.size(),
                    scene.blockers.size(), (unsigned long long)cfg.seed);
        return 0;
    }

    if (*per_user) {
        const ScenarioConfig cfg = load_scenario(po.scenario);
        emit(run_per_user(cfg, make_run_options(po)), po);
        return 0;
    }

    if (*power_sweep) {
        const ScenarioConfig cfg = load_scenario(wo.scenario);
        emit(run_power_sweep(cfg, powers, make_run_options(wo)), wo);
        return 0;
    }

    if (*blockage) {
        const ScenarioConfig cfg = load_scenario(bo.scenario);
        if (array_counts.empty()) {
            if (cfg.arrays.empty()) array_counts = {0};
            for (int a = 1; a <= (int)cfg.arrays.size(); ++a) array_counts.push_back(a);
        }
        emit(run_blockage_sweep(cfg, blocker_counts, array_counts, make_run_options(bo)), bo);
        return 0;
    }

    const CommonOpts& o = *train_cmd ? to : eo;
    const ScenarioConfig cfg = load_scenario(o.scenario);
    const std::uint64_t seed = o.seeds.empty() ? cfg.seed : o.seeds.front();
    EnvOptions env_opts;
    env_opts.exec = o.serial ? ExecMode::Serial : ExecMode::Parallel;
    Env env(realize_scene(cfg, seed), env_opts);

    if (*train_cmd) {
        const Algo algo = algo_from_name(o.algo);
        TrainConfig tc;
        if (o.episodes > 0) tc.episodes = o.episodes;
        std::mt19937_64 rng(derive_seed(seed, algo == Algo::QLearning ? 1 : 2));
        const TrainResult tr = train(env, algo, tc, rng);
        save_qtable(tr.q, qtable_path);
        const Allocation alloc = greedy_allocation(tr.q, env);
        const auto rates = env.rates(alloc);
        std::printf("trained %s for %d episodes (seed %llu)\n", algo_name(algo).c_str(),
                    tc.episodes, (unsigned long long)seed);
        std::printf("final max |dQ| over trailing episodes: %.6g\n", tr.convergence_metric);
        std::printf("greedy sum rate: %.6g bit/s, utility %.6g\n",
                    std::accumulate(rates.begin(), rates.end(), 0.0), env.utility(alloc));
        std::printf("saved table to %s\n", qtable_path.c_str());
        return 0;
    }

    const QTable q = load_qtable(qtable_path);
    if (q.num_states() != env.state_count() || q.num_actions() != env.action_count())
        throw ConfigError("table shape does not match the scenario");
    const Allocation alloc = greedy_allocation(q, env);
    const auto rates = env.rates(alloc);
    for (std::size_t k = 0; k < rates.size(); ++k)
        std::printf("user %zu: ap %d mirror %d rate %.6g bit/s\n", k, alloc.ap_of[k],
                    alloc.mirror_of[k], rates[k]);
    std::printf("sum rate %.6g bit/s, utility %.6g\n",
                std::accumulate(rates.begin(), rates.end(), 0.0), env.utility(alloc));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
