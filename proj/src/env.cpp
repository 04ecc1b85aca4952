#include "owc/env.hpp"

#include <cmath>

#include "owc/errors.hpp"

namespace owc {

std::int64_t encode_state(const EnvState& s, int num_users, int num_aps) {
    if (s.next_user < 0 || s.next_user > num_users)
        throw ContractError("next_user out of range");
    if ((int)s.ap_load.size() != num_aps)
        throw ContractError("load vector size does not match AP count");

    const std::int64_t radix = num_users + 1;
    std::int64_t id = 0;
    std::int64_t place = 1;
    for (int l = 0; l < num_aps; ++l) {
        const int load = s.ap_load[l];
        if (load < 0 || load > num_users) throw ContractError("load out of range");
        id += load * place;
        place *= radix;
    }
    return id + s.next_user * place;
}

Env::Env(const Scene& scene, EnvOptions opts) : scene_(scene), opts_(opts) {
    K_ = (int)scene_.users.size();
    L_ = (int)scene_.aps.size();
    M_ = (int)scene_.mirrors.size();
    if (K_ < 1 || L_ < 1 || M_ < 1)
        throw ConfigError("environment needs at least one user, AP, and mirror");
    for (const auto& u : scene_.users)
        if (!(u.min_rate > 0.0))
            throw ConfigError("min_rate must be positive to normalize rewards");

    double states = std::pow((double)(K_ + 1), L_ + 1);
    if (states > 9.0e15) throw ConfigError("state space too large to index");

    tables_ = build_channel_tables(scene_, opts_.exec);
    load_.assign(L_, 0);
    partial_.ap_of.assign(K_, -1);
    partial_.mirror_of.assign(K_, -1);
}

std::int64_t Env::state_count() const {
    std::int64_t n = 1;
    for (int i = 0; i < L_ + 1; ++i) n *= K_ + 1;
    return n;
}

EnvState Env::reset() {
    cursor_ = 0;
    std::fill(load_.begin(), load_.end(), 0);
    std::fill(partial_.ap_of.begin(), partial_.ap_of.end(), -1);
    std::fill(partial_.mirror_of.begin(), partial_.mirror_of.end(), -1);
    episode_open_ = true;
    return {0, load_};
}

namespace {
// rate of the user just placed, with bandwidth shares and interference taken
// over the users assigned so far
double partial_rate(const Scene& scene, const ChannelTables& tables,
                    const std::vector<int>& load, int k, int l, int m) {
    const auto& ap = scene.aps[l];
    const double r0 = scene.users[k].responsivity;
    const double h = tables.los_gain(k, l) + tables.irs_gain(k, m, l);

    double interf = 0.0;
    for (int l2 = 0; l2 < (int)scene.aps.size(); ++l2) {
        if (l2 == l || load[l2] == 0) continue;
        interf += scene.aps[l2].optical_power * tables.los_gain(k, l2);
    }
    interf *= r0;

    const double var = noise_variance(scene.noise, r0, ap.optical_power * h, ap.bandwidth);
    const double den = interf * interf + var;
    if (den <= 0.0) throw SimError("zero denominator in reward computation");
    const double sig = r0 * ap.optical_power * h;
    const double s = sig * sig / den;
    return ap.bandwidth / load[l] * std::log2(1.0 + kSinrScale * s);
}
}  // namespace

StepResult Env::step(const EnvState& s, int action) {
    if (!episode_open_) throw ContractError("step called before reset");
    if (cursor_ >= K_) throw ContractError("action on terminal state");
    if (s.next_user != cursor_ || s.ap_load != load_)
        throw ContractError("state does not match episode progress");
    if (action < 0 || action >= action_count()) throw ContractError("action id out of range");

    const int l = action / M_;
    const int m = action % M_;
    if (opts_.exclusive_mirrors)
        for (int u = 0; u < cursor_; ++u)
            if (partial_.mirror_of[u] == m) throw ContractError("mirror already assigned");

    partial_.ap_of[cursor_] = l;
    partial_.mirror_of[cursor_] = m;
    ++load_[l];

    const double rate = partial_rate(scene_, tables_, load_, cursor_, l, m);
    const double reward = rate / scene_.users[cursor_].min_rate;
    if (std::isnan(reward)) throw SimError("NaN reward");

    ++cursor_;
    return {{cursor_, load_}, reward, cursor_ == K_};
}

std::vector<int> Env::valid_actions(const EnvState& s) const {
    if (s.next_user != cursor_ || s.ap_load != load_)
        throw ContractError("state does not match episode progress");
    if (cursor_ >= K_) return {};

    std::vector<int> acts;
    acts.reserve(action_count());
    for (int a = 0; a < action_count(); ++a) {
        if (opts_.exclusive_mirrors) {
            const int m = a % M_;
            bool taken = false;
            for (int u = 0; u < cursor_ && !taken; ++u) taken = partial_.mirror_of[u] == m;
            if (taken) continue;
        }
        acts.push_back(a);
    }
    return acts;
}

const Allocation& Env::allocation() const {
    if (cursor_ != K_) throw ContractError("episode not complete");
    return partial_;
}

}  // namespace owc
