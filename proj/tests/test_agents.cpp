#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <vector>

#include "owc/agents.hpp"
#include "owc/errors.hpp"
#include "owc/scenario.hpp"

using namespace owc;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ScenarioConfig tiny_config() {
    ScenarioConfig cfg;
    cfg.seed = 11;
    cfg.align_tol_deg = 15.0;
    cfg.aps = {ApConfig{{1.25, 2.5, 3.0}, 60.0, 2.0, 2e7},
               ApConfig{{3.75, 2.5, 3.0}, 60.0, 2.0, 2e7}};
    ArrayConfig arr;
    arr.rows = 1;
    arr.cols = 2;
    arr.center_z = 1.6;
    cfg.arrays = {arr};
    cfg.users.count = 2;
    cfg.users.positions = {{1.2, 1.8, 1.0}, {3.6, 3.1, 1.0}};
    cfg.users.min_rates = {1e6};
    ReceiverBranch up;
    up.area = 20e-6;
    up.fov_semi_angle = 70.0 * kDeg;
    cfg.users.branches = {up};
    cfg.noise.amplifier_noise_density = 5e-20;
    cfg.noise.include_signal_shot = true;
    return cfg;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
    CHECK(algo_from_name("qlearning") == Algo::QLearning);
    CHECK(algo_from_name("sarsa") == Algo::Sarsa);
    CHECK(algo_name(Algo::QLearning) == "qlearning");
    CHECK(algo_name(Algo::Sarsa) == "sarsa");
    CHECK_THROWS_AS(algo_from_name("dqn"), ConfigError);
}

TEST_CASE("q_learning_update worked value") {
    // Q = 0, alpha = 0.5, r = 2, gamma = 0.9, best next = 1 -> 1.45
    QTable q(4, 3);
    q.at(1, 0) = 0.3;
    q.at(1, 1) = 1.0;
    q.at(1, 2) = -2.0;
    const double v = q_learning_update(q, 0, 0, 2.0, 1, {0, 1, 2}, 0.5, 0.9);
    CHECK(v == 1.45);
    CHECK(q.at(0, 0) == 1.45);
    // other cells untouched
    CHECK(q.at(1, 1) == 1.0);
}

TEST_CASE("sarsa_update worked value") {
    // Q(s,a) = 1, alpha = 0.1, r = 0.5, gamma = 0.9, Q(s',a') = 2 -> 1.13
    QTable q(4, 3);
    q.at(0, 0) = 1.0;
    q.at(1, 2) = 2.0;
    const double v = sarsa_update(q, 0, 0, 0.5, 1, 2, false, 0.1, 0.9);
    CHECK(v == 1.13);
    CHECK(q.at(0, 0) == 1.13);
}

TEST_CASE("terminal transitions bootstrap from zero") {
    QTable q(2, 2);
    q.at(0, 0) = 0.5;
    q.at(1, 0) = 100.0;
    q.at(1, 1) = 100.0;
    // empty valid set: target collapses to the reward
    CHECK(q_learning_update(q, 0, 0, 1.0, 1, {}, 0.5, 0.9) == doctest::Approx(0.75));
    q.at(0, 1) = 0.5;
    CHECK(sarsa_update(q, 0, 1, 1.0, 1, 0, true, 0.5, 0.9) == doctest::Approx(0.75));
}

TEST_CASE("updates match direct evaluation on 1000 random cases") {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    std::uniform_real_distribution<double> a01(0.05, 1.0);
    std::uniform_real_distribution<double> g01(0.0, 1.0);
    std::uniform_int_distribution<int> si(0, 19), ai(0, 4), coin(0, 1);

    QTable q(20, 5);
    for (std::int64_t s = 0; s < 20; ++s)
        for (int a = 0; a < 5; ++a) q.at(s, a) = val(rng);

    for (int i = 0; i < 1000; ++i) {
        const std::int64_t s = si(rng), s_next = si(rng);
        const int a = ai(rng);
        const double r = val(rng), alpha = a01(rng), gamma = g01(rng);

        std::vector<int> valid_next;
        for (int c = 0; c < 5; ++c)
            if (coin(rng)) valid_next.push_back(c);

        if (coin(rng)) {
            double boot = 0.0;
            for (std::size_t j = 0; j < valid_next.size(); ++j) {
                const double v = q.at(s_next, valid_next[j]);
                if (j == 0 || v > boot) boot = v;
            }
            const double cell = q.at(s, a);
            const double want = cell + alpha * (r + gamma * boot - cell);
            CHECK(q_learning_update(q, s, a, r, s_next, valid_next, alpha, gamma) == want);
            CHECK(q.at(s, a) == want);
        } else {
            const int a_next = ai(rng);
            const bool terminal = coin(rng) == 1;
            const double boot = terminal ? 0.0 : q.at(s_next, a_next);
            const double cell = q.at(s, a);
            const double want = cell + alpha * (r + gamma * boot - cell);
            CHECK(sarsa_update(q, s, a, r, s_next, a_next, terminal, alpha, gamma) == want);
            CHECK(q.at(s, a) == want);
        }
    }
}

TEST_CASE("select_action greedy path and tie-breaking") {
    QTable q(2, 6);
    std::mt19937_64 rng(5);
    q.at(0, 1) = 3.0;
    q.at(0, 4) = 3.0;  // tie: lower id wins
    q.at(0, 2) = 2.0;
    CHECK(select_action(q, 0, {0, 1, 2, 3, 4, 5}, 0.0, rng) == 1);
    // restriction to a valid subset changes the winner
    CHECK(select_action(q, 0, {0, 2, 5}, 0.0, rng) == 2);
    CHECK(select_action(q, 0, {5, 3}, 0.0, rng) == 5);  // all-zero tie: first listed
    CHECK_THROWS_AS(select_action(q, 0, {}, 0.0, rng), ContractError);
}

TEST_CASE("select_action explores uniformly over the valid set") {
    QTable q(1, 8);
    q.at(0, 7) = 99.0;  // greedy would always take 7
    std::mt19937_64 rng(99);
    const std::vector<int> valid = {1, 3, 5, 6};
    std::vector<int> hits(8, 0);
    for (int i = 0; i < 4000; ++i) ++hits[select_action(q, 0, valid, 1.0, rng)];
    CHECK(hits[0] == 0);
    CHECK(hits[2] == 0);
    CHECK(hits[4] == 0);
    CHECK(hits[7] == 0);  // epsilon = 1 never exploits
    for (int a : valid) CHECK(hits[a] > 800);
}

TEST_CASE("qtable save/load round-trips bit-exactly") {
    QTable q(7, 3);
    std::mt19937_64 rng(31415);
    std::uniform_real_distribution<double> val(-1e9, 1e9);
    for (std::int64_t s = 0; s < 7; ++s)
        for (int a = 0; a < 3; ++a) q.at(s, a) = val(rng) * std::pow(10.0, (int)(s % 5) - 2);
    q.at(0, 0) = 0.1;  // not exactly representable
    q.at(1, 1) = -4.9406564584124654e-324;  // denormal extreme
    q.at(2, 2) = 1e308;

    const std::string path = temp_path("owc_qtable_roundtrip.csv");
    save_qtable(q, path);
    const QTable back = load_qtable(path);
    REQUIRE(back.num_states() == 7);
    REQUIRE(back.num_actions() == 3);
    for (std::int64_t s = 0; s < 7; ++s)
        for (int a = 0; a < 3; ++a) CHECK(back.at(s, a) == q.at(s, a));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_qtable("/nonexistent/q.csv"), SimError);
}

TEST_CASE("qtable construction and indexing contracts") {
    CHECK_THROWS_AS(QTable(0, 3), ConfigError);
    CHECK_THROWS_AS(QTable(3, 0), ConfigError);
    QTable q(3, 2);
    CHECK_THROWS_AS(q.at(3, 0), ContractError);
    CHECK_THROWS_AS(q.at(0, 2), ContractError);
    CHECK_THROWS_AS(q.at(-1, 0), ContractError);
}

TEST_CASE("training is deterministic in the generator seed") {
    const ScenarioConfig cfg = tiny_config();
    Env env(realize_scene(cfg, cfg.seed), {false, ExecMode::Serial});
    TrainConfig tc;
    tc.episodes = 300;

    std::mt19937_64 r1(42), r2(42), r3(43);
    const TrainResult a = train(env, Algo::QLearning, tc, r1);
    const TrainResult b = train(env, Algo::QLearning, tc, r2);
    const TrainResult c = train(env, Algo::QLearning, tc, r3);

    REQUIRE(a.episode_returns.size() == 300);
    REQUIRE(b.episode_returns.size() == 300);
    for (size_t i = 0; i < a.episode_returns.size(); ++i)
        CHECK(a.episode_returns[i] == b.episode_returns[i]);
    for (std::int64_t s = 0; s < a.q.num_states(); ++s)
        for (int act = 0; act < a.q.num_actions(); ++act)
            CHECK(a.q.at(s, act) == b.q.at(s, act));
    CHECK(a.convergence_metric == b.convergence_metric);

    bool differs = false;
    for (size_t i = 0; i < a.episode_returns.size() && !differs; ++i)
        differs = a.episode_returns[i] != c.episode_returns[i];
    CHECK(differs);
}

TEST_CASE("sarsa and q-learning traces diverge") {
    const ScenarioConfig cfg = tiny_config();
    Env env(realize_scene(cfg, cfg.seed), {false, ExecMode::Serial});
    TrainConfig tc;
    tc.episodes = 300;
    std::mt19937_64 r1(42), r2(42);
    const TrainResult ql = train(env, Algo::QLearning, tc, r1);
    const TrainResult sa = train(env, Algo::Sarsa, tc, r2);
    bool differs = false;
    for (std::int64_t s = 0; s < ql.q.num_states() && !differs; ++s)
        for (int a = 0; a < ql.q.num_actions() && !differs; ++a)
            differs = ql.q.at(s, a) != sa.q.at(s, a);
    CHECK(differs);
}

TEST_CASE("greedy_allocation rolls out the argmax policy") {
    const ScenarioConfig cfg = tiny_config();
    Env env(realize_scene(cfg, cfg.seed), {false, ExecMode::Serial});
    TrainConfig tc;
    tc.episodes = 2000;
    std::mt19937_64 rng(7);
    const TrainResult res = train(env, Algo::QLearning, tc, rng);

    const Allocation a = greedy_allocation(res.q, env);
    REQUIRE((int)a.ap_of.size() == 2);
    for (int k = 0; k < 2; ++k) {
        CHECK(a.ap_of[k] >= 0);
        CHECK(a.ap_of[k] < 2);
        CHECK(a.mirror_of[k] >= 0);
        CHECK(a.mirror_of[k] < 2);
    }

    // manual argmax replay reproduces the same decisions
    std::mt19937_64 unused(0);
    EnvState s = env.reset();
    std::vector<int> acts;
    while (true) {
        const auto valid = env.valid_actions(s);
        const int act = select_action(res.q, env.encode(s), valid, 0.0, unused);
        acts.push_back(act);
        const auto sr = env.step(s, act);
        if (sr.done) break;
        s = sr.state;
    }
    for (int k = 0; k < 2; ++k) {
        CHECK(a.ap_of[k] == acts[k] / env.num_mirrors());
        CHECK(a.mirror_of[k] == acts[k] % env.num_mirrors());
    }

    // greedy rollout twice in a row is stable
    CHECK(greedy_allocation(res.q, env) == a);
}

TEST_CASE("train validates its configuration") {
    const ScenarioConfig cfg = tiny_config();
    Env env(realize_scene(cfg, cfg.seed), {false, ExecMode::Serial});
    std::mt19937_64 rng(1);
    TrainConfig tc;
    tc.episodes = 0;
    CHECK_THROWS_AS(train(env, Algo::QLearning, tc, rng), ConfigError);
    tc = {};
    tc.alpha = 0.0;
    CHECK_THROWS_AS(train(env, Algo::QLearning, tc, rng), ConfigError);
    tc = {};
    tc.alpha = 1.5;
    CHECK_THROWS_AS(train(env, Algo::QLearning, tc, rng), ConfigError);
    tc = {};
    tc.gamma = -0.1;
    CHECK_THROWS_AS(train(env, Algo::QLearning, tc, rng), ConfigError);
    tc = {};
    tc.gamma = 1.1;
    CHECK_THROWS_AS(train(env, Algo::QLearning, tc, rng), ConfigError);
}
