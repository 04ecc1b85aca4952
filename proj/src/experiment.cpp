#include "owc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "owc/baselines.hpp"
#include "owc/channel.hpp"
#include "owc/env.hpp"
#include "owc/errors.hpp"

namespace owc {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, const F& f, char sep = ';') {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out.push_back(sep);
        out += f(xs[i]);
    }
    return out;
}

int total_mirrors(const ScenarioConfig& cfg) {
    int m = 0;
    for (const auto& a : cfg.arrays) m += a.rows * a.cols;
    return m;
}

void common_meta(ExperimentResult& res, const char* experiment, const ScenarioConfig& cfg,
                 const RunOptions& o) {
    res.meta.push_back(std::string("experiment = ") + experiment);
    res.meta.push_back("scenario_seed = " + std::to_string(cfg.seed));
    res.meta.push_back("users = " + std::to_string(cfg.users.count));
    res.meta.push_back("aps = " + std::to_string(cfg.aps.size()));
    res.meta.push_back("mirrors = " + std::to_string(total_mirrors(cfg)));
    res.meta.push_back("algo = " + algo_name(o.algo));
    res.meta.push_back("alpha = " + fmt(o.train.alpha));
    res.meta.push_back("gamma = " + fmt(o.train.gamma));
    res.meta.push_back("epsilon_start = " + fmt(o.train.epsilon_start));
    res.meta.push_back("epsilon_min = " + fmt(o.train.epsilon_min));
    res.meta.push_back("epsilon_decay = " + fmt(o.train.epsilon_decay));
    res.meta.push_back("episodes = " + std::to_string(o.train.episodes));
    res.meta.push_back("oracle_budget = " + std::to_string(o.oracle_budget));
    res.meta.push_back(
        "seeds = " + join(o.seeds, [](std::uint64_t s) { return std::to_string(s); }));
}

ResultRow alloc_row(double sweep_var, std::string scheme, const Allocation& alloc,
                    const ChannelTables& tables, const Scene& scene, std::uint64_t seed,
                    int episodes) {
    ResultRow row;
    row.sweep_var = sweep_var;
    row.scheme = std::move(scheme);
    row.rates = user_rates(alloc, tables, scene);
    row.sum_rate = std::accumulate(row.rates.begin(), row.rates.end(), 0.0);
    row.utility = allocation_utility(alloc, tables, scene);
    row.feasible = all_qos_satisfied(alloc, tables, scene);
    row.seed = seed;
    row.episodes = episodes;
    row.blockers = (int)scene.blockers.size();
    row.arrays = 0;
    return row;
}

// run one job per seed, then splice the buckets back together so the row
// order never depends on scheduling
template <typename Job>
std::vector<std::vector<ResultRow>> per_seed(const std::vector<std::uint64_t>& seeds,
                                             ExecMode mode, const Job& job) {
    std::vector<std::vector<ResultRow>> buckets(seeds.size());
    std::exception_ptr err;
    const bool par = mode == ExecMode::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (std::int64_t i = 0; i < (std::int64_t)seeds.size(); ++i) {
        try {
            buckets[i] = job(seeds[i]);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return buckets;
}

// buckets hold the same (sweep point, scheme) groups for every seed; emit
// group-major, seed-minor
void merge(ExperimentResult& res, const std::vector<std::vector<ResultRow>>& buckets) {
    if (buckets.empty()) return;
    const std::size_t groups = buckets.front().size();
    for (const auto& b : buckets)
        if (b.size() != groups) throw ContractError("seed buckets disagree in shape");
    for (std::size_t g = 0; g < groups; ++g)
        for (const auto& b : buckets) res.rows.push_back(b[g]);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return seed * 0x9E3779B97F4A7C15ULL + salt;
}

std::vector<std::uint64_t> default_seed_range(std::uint64_t first, int count) {
    std::vector<std::uint64_t> seeds(count);
    std::iota(seeds.begin(), seeds.end(), first);
    return seeds;
}

ExperimentResult run_per_user(const ScenarioConfig& cfg, const RunOptions& opt) {
    RunOptions o = opt;
    if (o.seeds.empty()) o.seeds = {cfg.seed};

    const int K = cfg.users.count;
    const int L = (int)cfg.aps.size();
    const int M = total_mirrors(cfg);
    const bool oracle_fits =
        M >= 1 && std::pow((double)L * M, (double)K) <= (double)o.oracle_budget;
    const std::string ref_name = oracle_fits ? "optimal" : "two_stage";
    const int arrays = (int)cfg.arrays.size();

    auto buckets = per_seed(o.seeds, o.exec, [&](std::uint64_t seed) {
        const Scene scene = realize_scene(cfg, seed);
        EnvOptions eo;
        eo.exec = o.exec;
        Env env(scene, eo);
        const ChannelTables& tables = env.tables();

        std::vector<std::pair<std::string, std::pair<Allocation, int>>> schemes;
        for (Algo algo : {Algo::QLearning, Algo::Sarsa}) {
            std::mt19937_64 rng(derive_seed(seed, algo == Algo::QLearning ? 1 : 2));
            TrainResult tr = train(env, algo, o.train, rng);
            schemes.push_back(
                {algo_name(algo), {greedy_allocation(tr.q, env), o.train.episodes}});
        }
        const SearchResult ref = oracle_fits
                                     ? exhaustive_optimal(scene, tables, o.oracle_budget, o.exec)
                                     : two_stage(scene, tables, o.oracle_budget);
        schemes.push_back({ref_name, {ref.alloc, 0}});

        // one row per user per scheme, grouped user-major
        std::vector<ResultRow> rows;
        for (int k = 0; k < K; ++k) {
            for (const auto& [name, alloc_ep] : schemes) {
                ResultRow row = alloc_row(k, name, alloc_ep.first, tables, scene, seed,
                                          alloc_ep.second);
                const std::vector<bool> ok = qos_satisfied(alloc_ep.first, tables, scene);
                row.feasible = ok[k];
                row.rates = {row.rates[k]};
                row.arrays = arrays;
                rows.push_back(row);
            }
        }
        return rows;
    });

    ExperimentResult res;
    common_meta(res, "per-user", cfg, o);
    res.meta.push_back("reference = " + ref_name);
    merge(res, buckets);
    return res;
}

ExperimentResult run_power_sweep(const ScenarioConfig& cfg, std::vector<double> powers,
                                 const RunOptions& opt) {
    RunOptions o = opt;
    if (o.seeds.empty()) o.seeds = default_seed_range(cfg.seed, 20);

    ExperimentResult res;
    common_meta(res, "power-sweep", cfg, o);
    for (double p : powers)
        if (!(p > 0.0)) throw ConfigError("sweep powers must be positive");
    std::sort(powers.begin(), powers.end());
    res.meta.push_back("powers_w = " + join(powers, fmt));
    if (powers.empty()) return res;
    const double train_power = powers.back();
    const int arrays = (int)cfg.arrays.size();

    auto buckets = per_seed(o.seeds, o.exec, [&](std::uint64_t seed) {
        SceneOverrides ov;
        ov.power = train_power;
        const Scene scene = realize_scene(cfg, seed, ov);
        EnvOptions eo;
        eo.exec = o.exec;
        Env env(scene, eo);
        const ChannelTables& tables = env.tables();

        std::mt19937_64 rng(derive_seed(seed, o.algo == Algo::QLearning ? 1 : 2));
        TrainResult tr = train(env, o.algo, o.train, rng);
        const Allocation rl = greedy_allocation(tr.q, env);
        const Allocation db = distance_based(scene, tables, o.oracle_budget).alloc;
        const Allocation ni = no_irs(scene, tables, o.oracle_budget).alloc;

        std::vector<ResultRow> rows;
        Scene at_p = scene;
        for (double p : powers) {
            for (auto& ap : at_p.aps) ap.optical_power = p;
            ResultRow r0 = alloc_row(p, "rl-joint", rl, tables, at_p, seed, o.train.episodes);
            ResultRow r1 = alloc_row(p, "distance_based", db, tables, at_p, seed, 0);
            ResultRow r2 = alloc_row(p, "no_irs", ni, tables, at_p, seed, 0);
            for (ResultRow* r : {&r0, &r1, &r2}) {
                r->arrays = arrays;
                rows.push_back(*r);
            }
        }
        return rows;
    });

    merge(res, buckets);
    return res;
}

ExperimentResult run_blockage_sweep(const ScenarioConfig& cfg,
                                    std::vector<int> blocker_counts,
                                    std::vector<int> array_counts, const RunOptions& opt) {
    RunOptions o = opt;
    if (o.seeds.empty()) o.seeds = default_seed_range(cfg.seed, 20);

    ExperimentResult res;
    common_meta(res, "blockage-sweep", cfg, o);
    res.meta.push_back(
        "blocker_counts = " + join(blocker_counts, [](int b) { return std::to_string(b); }));
    res.meta.push_back(
        "array_counts = " + join(array_counts, [](int a) { return std::to_string(a); }));
    if (blocker_counts.empty() || array_counts.empty()) return res;

    for (int b : blocker_counts)
        if (b < 0) throw ConfigError("blocker counts must be non-negative");
    for (int a : array_counts)
        if (a < 0 || a > (int)cfg.arrays.size())
            throw ConfigError("array counts must lie within the configured arrays");
    std::sort(blocker_counts.begin(), blocker_counts.end());
    std::sort(array_counts.begin(), array_counts.end());

    auto buckets = per_seed(o.seeds, o.exec, [&](std::uint64_t seed) {
        std::vector<ResultRow> rows;
        for (int b : blocker_counts) {
            for (int a : array_counts) {
                SceneOverrides ov;
                ov.blocker_count = b;
                ov.array_count = a;
                const Scene scene = realize_scene(cfg, seed, ov);
                EnvOptions eo;
                eo.exec = o.exec;
                Env env(scene, eo);
                const ChannelTables& tables = env.tables();

                std::mt19937_64 rng(derive_seed(seed, o.algo == Algo::QLearning ? 1 : 2));
                TrainResult tr = train(env, o.algo, o.train, rng);
                const Allocation rl = greedy_allocation(tr.q, env);
                const Allocation ni = no_irs(scene, tables, o.oracle_budget).alloc;

                ResultRow r0 =
                    alloc_row(b, "rl-joint", rl, tables, scene, seed, o.train.episodes);
                ResultRow r1 = alloc_row(b, "no_irs", ni, tables, scene, seed, 0);
                for (ResultRow* r : {&r0, &r1}) {
                    r->arrays = a;
                    rows.push_back(*r);
                }
            }
        }
        return rows;
    });

    merge(res, buckets);
    return res;
}

std::string csv_string(const ExperimentResult& res) {
    std::string out;
    for (const auto& m : res.meta) out += "# " + m + "\n";
    out += "sweep_var,scheme,sum_rate_bps,utility,feasible,seed,episodes,blockers,arrays,"
           "user_rates_bps\n";
    for (const auto& r : res.rows) {
        out += fmt(r.sweep_var);
        out += ',' + r.scheme;
        out += ',' + fmt(r.sum_rate);
        out += ',' + fmt(r.utility);
        out += r.feasible ? ",1" : ",0";
        out += ',' + std::to_string(r.seed);
        out += ',' + std::to_string(r.episodes);
        out += ',' + std::to_string(r.blockers);
        out += ',' + std::to_string(r.arrays);
        out += ',' + join(r.rates, fmt);
        out.push_back('\n');
    }

    // seed-averaged summary per (sweep point, scheme, array count)
    struct Key {
        double sweep;
        std::string scheme;
        int arrays;
        bool operator==(const Key&) const = default;
    };
    std::vector<Key> order;
    std::vector<std::vector<double>> samples;
    for (const auto& r : res.rows) {
        const Key key{r.sweep_var, r.scheme, r.arrays};
        auto it = std::find(order.begin(), order.end(), key);
        if (it == order.end()) {
            order.push_back(key);
            samples.push_back({r.sum_rate});
        } else {
            samples[it - order.begin()].push_back(r.sum_rate);
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& xs = samples[i];
        const double n = (double)xs.size();
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= n;
        out += "# aggregate sweep_var=" + fmt(order[i].sweep) + " scheme=" + order[i].scheme +
               " arrays=" + std::to_string(order[i].arrays) + " n=" +
               std::to_string(xs.size()) + " mean_sum_rate_bps=" + fmt(mean) +
               " std_sum_rate_bps=" + fmt(std::sqrt(var)) + "\n";
    }
    return out;
}

void export_csv(const ExperimentResult& res, const std::string& path, bool force) {
    if (!force && std::filesystem::exists(path))
        throw ConfigError("refusing to overwrite " + path + " (pass force)");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SimError("cannot open " + path + " for writing");
    out << csv_string(res);
    if (!out) throw SimError("write failed for " + path);
}

}  // namespace owc
