#include "owc/agents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "owc/errors.hpp"

namespace owc {

Algo algo_from_name(const std::string& name) {
    if (name == "qlearning") return Algo::QLearning;
    if (name == "sarsa") return Algo::Sarsa;
    throw ConfigError("unknown algorithm: " + name);
}

std::string algo_name(Algo a) { return a == Algo::QLearning ? "qlearning" : "sarsa"; }

QTable::QTable(std::int64_t num_states, int num_actions)
    : states_(num_states), actions_(num_actions) {
    if (num_states < 1 || num_actions < 1) throw ConfigError("empty Q-table");
    if (num_states > (std::int64_t)1 << 32) throw ConfigError("Q-table too large");
    q_.assign((std::size_t)states_ * actions_, 0.0);
}

std::size_t QTable::check(std::int64_t s, int a) const {
    if (s < 0 || s >= states_ || a < 0 || a >= actions_)
        throw ContractError("Q-table index out of range");
    return (std::size_t)s * actions_ + a;
}

void save_qtable(const QTable& q, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("cannot open " + path + " for writing");
    out << q.num_states() << "," << q.num_actions() << "\n";
    char buf[32];
    for (std::int64_t s = 0; s < q.num_states(); ++s) {
        for (int a = 0; a < q.num_actions(); ++a) {
            std::snprintf(buf, sizeof buf, "%.17g", q.at(s, a));
            out << (a ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw SimError("write failed: " + path);
}

QTable load_qtable(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw SimError("empty Q-table file");

    std::int64_t states = 0;
    int actions = 0;
    if (std::sscanf(line.c_str(), "%ld,%d", &states, &actions) != 2)
        throw SimError("bad Q-table header");
    QTable q(states, actions);

    for (std::int64_t s = 0; s < states; ++s) {
        if (!std::getline(in, line)) throw SimError("truncated Q-table file");
        std::stringstream ss(line);
        std::string cell;
        for (int a = 0; a < actions; ++a) {
            if (!std::getline(ss, cell, ',')) throw SimError("short Q-table row");
            q.at(s, a) = std::strtod(cell.c_str(), nullptr);
        }
    }
    return q;
}

int select_action(const QTable& q, std::int64_t state, const std::vector<int>& valid,
                  double epsilon, std::mt19937_64& rng) {
    if (valid.empty()) throw ContractError("no valid actions to select from");
    if (epsilon > 0.0) {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        if (u01(rng) < epsilon) {
            std::uniform_int_distribution<std::size_t> pick(0, valid.size() - 1);
            return valid[pick(rng)];
        }
    }
    int best = valid[0];
    double best_q = q.at(state, best);
    for (std::size_t i = 1; i < valid.size(); ++i) {
        const double v = q.at(state, valid[i]);
        if (v > best_q) { best_q = v; best = valid[i]; }
    }
    return best;
}

double q_learning_update(QTable& q, std::int64_t s, int a, double reward, std::int64_t s_next,
                         const std::vector<int>& valid_next, double alpha, double gamma) {
    double boot = 0.0;
    for (std::size_t i = 0; i < valid_next.size(); ++i) {
        const double v = q.at(s_next, valid_next[i]);
        if (i == 0 || v > boot) boot = v;
    }
    double& cell = q.at(s, a);
    cell += alpha * (reward + gamma * boot - cell);
    return cell;
}

double sarsa_update(QTable& q, std::int64_t s, int a, double reward, std::int64_t s_next,
                    int a_next, bool next_terminal, double alpha, double gamma) {
    const double boot = next_terminal ? 0.0 : q.at(s_next, a_next);
    double& cell = q.at(s, a);
    cell += alpha * (reward + gamma * boot - cell);
    return cell;
}

TrainResult train(Env& env, Algo algo, const TrainConfig& cfg, std::mt19937_64& rng) {
    if (cfg.episodes < 1) throw ConfigError("episodes must be >= 1");
    if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0) throw ConfigError("alpha must be in (0, 1]");
    if (cfg.gamma < 0.0 || cfg.gamma > 1.0) throw ConfigError("gamma must be in [0, 1]");

    const int guard = cfg.max_steps_guard > 0 ? cfg.max_steps_guard : 2 * env.num_users() + 8;

    TrainResult res;
    res.q = QTable(env.state_count(), env.action_count());
    res.episode_returns.reserve(cfg.episodes);

    const int tail_start = std::max(0, cfg.episodes - 100);
    double epsilon = cfg.epsilon_start;

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        double ep_return = 0.0;
        double ep_delta = 0.0;
        EnvState s = env.reset();
        std::int64_t sid = env.encode(s);
        std::vector<int> valid = env.valid_actions(s);

        int a = select_action(res.q, sid, valid, epsilon, rng);
        int steps = 0;
        while (true) {
            if (++steps > guard) throw ContractError("episode exceeded step guard");
            const double before = res.q.at(sid, a);
            StepResult sr = env.step(s, a);
            ep_return += sr.reward;
            const std::int64_t sid_next = env.encode(sr.state);

            double after;
            int a_next = -1;
            std::vector<int> valid_next =
                sr.done ? std::vector<int>{} : env.valid_actions(sr.state);
            if (algo == Algo::QLearning) {
                after = q_learning_update(res.q, sid, a, sr.reward, sid_next, valid_next,
                                          cfg.alpha, cfg.gamma);
                if (!sr.done)
                    a_next = select_action(res.q, sid_next, valid_next, epsilon, rng);
            } else {
                if (!sr.done)
                    a_next = select_action(res.q, sid_next, valid_next, epsilon, rng);
                after = sarsa_update(res.q, sid, a, sr.reward, sid_next, a_next, sr.done,
                                     cfg.alpha, cfg.gamma);
            }
            if (std::isnan(after)) throw SimError("NaN Q-value during training");
            ep_delta = std::max(ep_delta, std::abs(after - before));

            if (sr.done) break;
            s = sr.state;
            sid = sid_next;
            a = a_next;
        }

        res.episode_returns.push_back(ep_return);
        if (ep >= tail_start) res.convergence_metric = std::max(res.convergence_metric, ep_delta);
        epsilon = std::max(cfg.epsilon_min, epsilon * cfg.epsilon_decay);
    }
    return res;
}

Allocation greedy_allocation(const QTable& q, Env& env) {
    static std::mt19937_64 unused(0);
    EnvState s = env.reset();
    while (true) {
        const auto valid = env.valid_actions(s);
        const int a = select_action(q, env.encode(s), valid, 0.0, unused);
        StepResult sr = env.step(s, a);
        if (sr.done) break;
        s = sr.state;
    }
    return env.allocation();
}

}  // namespace owc
