#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "owc/env.hpp"

namespace owc {

enum class Algo { QLearning, Sarsa };

Algo algo_from_name(const std::string& name);
std::string algo_name(Algo a);

class QTable {
public:
    QTable() = default;
    QTable(std::int64_t num_states, int num_actions);

    double& at(std::int64_t s, int a) { return q_[check(s, a)]; }
    double at(std::int64_t s, int a) const { return q_[check(s, a)]; }

    std::int64_t num_states() const { return states_; }
    int num_actions() const { return actions_; }

private:
    std::size_t check(std::int64_t s, int a) const;
    std::int64_t states_ = 0;
    int actions_ = 0;
    std::vector<double> q_;
};

void save_qtable(const QTable& q, const std::string& path);
QTable load_qtable(const std::string& path);

struct TrainConfig {
    double alpha = 0.1;
    double gamma = 0.9;
    double epsilon_start = 1.0;
    double epsilon_min = 0.01;
    double epsilon_decay = 0.999;  // multiplicative, per episode
    int episodes = 20000;
    int max_steps_guard = 0;  // 0: one sweep over the users plus slack
};

// Epsilon-greedy over the valid actions; greedy ties break to the lowest id.
int select_action(const QTable& q, std::int64_t state, const std::vector<int>& valid,
                  double epsilon, std::mt19937_64& rng);

// Applies the off-policy update and returns the new Q(s,a).
double q_learning_update(QTable& q, std::int64_t s, int a, double reward, std::int64_t s_next,
                         const std::vector<int>& valid_next, double alpha, double gamma);

// Applies the on-policy update and returns the new Q(s,a). next_terminal
// makes the bootstrap term zero regardless of a_next.
double sarsa_update(QTable& q, std::int64_t s, int a, double reward, std::int64_t s_next,
                    int a_next, bool next_terminal, double alpha, double gamma);

struct TrainResult {
    QTable q;
    std::vector<double> episode_returns;
    // largest absolute TD change applied during the trailing 100 episodes
    double convergence_metric = 0.0;
};

TrainResult train(Env& env, Algo algo, const TrainConfig& cfg, std::mt19937_64& rng);

// Greedy (epsilon = 0) rollout of the learned table.
Allocation greedy_allocation(const QTable& q, Env& env);

}  // namespace owc
