#pragma once

#include <cstdint>
#include <vector>

#include "owc/allocation.hpp"
#include "owc/channel.hpp"
#include "owc/exec.hpp"
#include "owc/scene.hpp"

namespace owc {

// Observation for the tabular agents: which user is assigned next plus the
// per-AP load vector of the partial allocation.
struct EnvState {
    int next_user = 0;
    std::vector<int> ap_load;

    bool operator==(const EnvState&) const = default;
};

// Mixed-radix state id: next_user * (K+1)^L + sum_l load_l * (K+1)^l.
std::int64_t encode_state(const EnvState& s, int num_users, int num_aps);

struct StepResult {
    EnvState state;
    double reward = 0.0;
    bool done = false;
};

struct EnvOptions {
    bool exclusive_mirrors = false;  // mask mirrors already taken this episode
    ExecMode exec = ExecMode::Parallel;
};

// Sequential-assignment episode: one user per step, action id = ap * M + mirror.
// Rewards are the QoS-normalized rate of the user just placed, computed
// against the partial allocation (bandwidth shares and interference count
// only the users assigned so far); exact rates for a complete allocation come
// from the evaluation helpers.
class Env {
public:
    explicit Env(const Scene& scene, EnvOptions opts = {});

    EnvState reset();
    StepResult step(const EnvState& s, int action);
    std::vector<int> valid_actions(const EnvState& s) const;

    int num_users() const { return K_; }
    int num_aps() const { return L_; }
    int num_mirrors() const { return M_; }
    std::int64_t state_count() const;
    int action_count() const { return L_ * M_; }
    std::int64_t encode(const EnvState& s) const { return encode_state(s, K_, L_); }

    const Scene& scene() const { return scene_; }
    const ChannelTables& tables() const { return tables_; }
    // complete allocation of the finished episode
    const Allocation& allocation() const;

    double utility(const Allocation& a) const { return allocation_utility(a, tables_, scene_); }
    std::vector<double> rates(const Allocation& a) const { return user_rates(a, tables_, scene_); }

private:
    Scene scene_;
    ChannelTables tables_;
    EnvOptions opts_;
    int K_ = 0, L_ = 0, M_ = 0;
    Allocation partial_;
    std::vector<int> load_;
    int cursor_ = 0;
    bool episode_open_ = false;
};

}  // namespace owc
