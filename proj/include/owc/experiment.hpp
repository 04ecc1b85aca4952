#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "owc/agents.hpp"
#include "owc/exec.hpp"
#include "owc/scenario.hpp"

namespace owc {

struct RunOptions {
    std::vector<std::uint64_t> seeds;  // empty: experiment-specific default
    Algo algo = Algo::QLearning;       // the "rl-joint" scheme of the sweeps
    TrainConfig train;
    std::uint64_t oracle_budget = 10'000'000;
    ExecMode exec = ExecMode::Parallel;
};

struct ResultRow {
    double sweep_var = 0.0;
    std::string scheme;
    double sum_rate = 0.0;  // bit/s
    double utility = 0.0;
    bool feasible = false;
    std::uint64_t seed = 0;
    int episodes = 0;
    int blockers = 0;
    int arrays = 0;
    std::vector<double> rates;  // bit/s
};

struct ExperimentResult {
    std::vector<std::string> meta;  // emitted as leading comment lines
    std::vector<ResultRow> rows;
};

// Per-user rates under the trained policies and the search reference at the
// scenario's configured power. Default seeds: {cfg.seed}.
ExperimentResult run_per_user(const ScenarioConfig& cfg, const RunOptions& opt = {});

// Sum rate of rl-joint, distance_based and no_irs across transmit powers.
// Policies and baseline assignments are fixed per seed at the largest power
// and re-evaluated at each sweep point. Default seeds: cfg.seed .. cfg.seed+19.
ExperimentResult run_power_sweep(const ScenarioConfig& cfg, std::vector<double> powers,
                                 const RunOptions& opt = {});

// Cross product of blocker counts and mirror-array counts at the scenario's
// configured power. Default seeds: cfg.seed .. cfg.seed+19.
ExperimentResult run_blockage_sweep(const ScenarioConfig& cfg, std::vector<int> blocker_counts,
                                    std::vector<int> array_counts,
                                    const RunOptions& opt = {});

std::string csv_string(const ExperimentResult& res);

// Refuses to overwrite an existing file unless force is set.
void export_csv(const ExperimentResult& res, const std::string& path, bool force = false);

// Derived stream for everything downstream of scene realization, so training
// noise never disturbs placement draws.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

std::vector<std::uint64_t> default_seed_range(std::uint64_t first, int count);

}  // namespace owc
