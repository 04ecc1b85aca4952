#include "owc/baselines.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "owc/errors.hpp"

namespace owc {

namespace {

struct Scored {
    double utility = -std::numeric_limits<double>::infinity();
    // fairness sum restricted to users with positive rate; ranks candidates
    // that all sit at -inf utility because some user is cut off entirely
    double served_utility = -std::numeric_limits<double>::infinity();
    int cutoff = std::numeric_limits<int>::max();  // users with zero rate
    bool feasible = false;
    bool valid = false;
};

// feasible first, then fewest cut-off users, then the fairness sum over the
// served ones; strict comparisons keep the earlier (lexicographically
// smaller) candidate on ties
bool better(const Scored& cand, const Scored& best) {
    if (!best.valid) return cand.valid;
    if (cand.feasible != best.feasible) return cand.feasible;
    if (cand.cutoff != best.cutoff) return cand.cutoff < best.cutoff;
    return cand.served_utility > best.served_utility;
}

Scored evaluate(const Allocation& alloc, const ChannelTables& tables, const Scene& scene) {
    Scored s;
    s.valid = true;
    s.feasible = true;
    s.cutoff = 0;
    s.served_utility = 0.0;
    for (int k = 0; k < tables.K; ++k) {
        const double r = user_rate(k, alloc, tables, scene);
        if (r < scene.users[k].min_rate) s.feasible = false;
        if (r <= 0.0) {
            ++s.cutoff;
            continue;
        }
        s.served_utility += std::log(r);
    }
    s.utility = s.cutoff == 0 ? s.served_utility
                              : -std::numeric_limits<double>::infinity();
    return s;
}

std::uint64_t checked_count(int base, int exponent, std::uint64_t budget, const char* what) {
    const double est = std::pow((double)base, exponent);
    if (est > (double)budget)
        throw BudgetError(std::string(what) + ": " + std::to_string(base) + "^" +
                          std::to_string(exponent) + " exceeds budget " +
                          std::to_string(budget));
    std::uint64_t n = 1;
    for (int i = 0; i < exponent; ++i) n *= (std::uint64_t)base;
    return n;
}

void decode(std::uint64_t idx, int base, std::vector<int>& digits) {
    for (int k = (int)digits.size() - 1; k >= 0; --k) {
        digits[k] = (int)(idx % base);
        idx /= base;
    }
}

// exhaustive scan of [0, total) in lexicographic order, chunked so the
// parallel path merges per-chunk winners in ascending order and reproduces
// the serial result exactly
template <typename EvalFn>
std::pair<std::uint64_t, Scored> scan_best(std::uint64_t total, ExecMode mode, EvalFn eval) {
    const int chunks = mode == ExecMode::Parallel ? 256 : 1;
    const std::uint64_t chunk = (total + chunks - 1) / chunks;

    std::vector<std::pair<std::uint64_t, Scored>> best(chunks, {0, Scored{}});
    const bool par = mode == ExecMode::Parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int c = 0; c < chunks; ++c) {
        const std::uint64_t lo = c * chunk;
        const std::uint64_t hi = std::min(total, lo + chunk);
        std::pair<std::uint64_t, Scored> local{0, Scored{}};
        for (std::uint64_t j = lo; j < hi; ++j) {
            Scored s = eval(j);
            if (better(s, local.second)) local = {j, s};
        }
        best[c] = local;
    }

    std::pair<std::uint64_t, Scored> win{0, Scored{}};
    for (const auto& b : best)
        if (better(b.second, win.second)) win = b;
    return win;
}

// stage 1 of the decomposition: APs chosen on direct paths only
std::vector<int> stage1_aps(const Scene& scene, const ChannelTables& tables,
                            std::uint64_t budget) {
    const int K = tables.K, L = tables.L;
    const std::uint64_t total = checked_count(L, K, budget, "AP stage");

    Allocation alloc;
    alloc.ap_of.assign(K, 0);
    alloc.mirror_of.assign(K, tables.M);  // direct paths only

    auto win = scan_best(total, ExecMode::Serial, [&](std::uint64_t j) {
        decode(j, L, alloc.ap_of);
        return evaluate(alloc, tables, scene);
    });

    decode(win.first, L, alloc.ap_of);
    return alloc.ap_of;
}

SearchResult scored_result(const Allocation& alloc, const ChannelTables& tables,
                           const Scene& scene) {
    const Scored s = evaluate(alloc, tables, scene);
    return {alloc, s.utility, s.feasible};
}

}  // namespace

SearchResult exhaustive_optimal(const Scene& scene, const ChannelTables& tables,
                                std::uint64_t budget, ExecMode mode) {
    const int K = tables.K, L = tables.L, M = tables.M;
    if (M < 1) throw ConfigError("exhaustive search needs at least one mirror");
    const int A = L * M;
    const std::uint64_t total = checked_count(A, K, budget, "joint search");

    auto win = scan_best(total, mode, [&](std::uint64_t j) {
        thread_local Allocation alloc;
        thread_local std::vector<int> digits;
        digits.assign((size_t)K, 0);
        decode(j, A, digits);
        alloc.ap_of.assign(K, 0);
        alloc.mirror_of.assign(K, 0);
        for (int k = 0; k < K; ++k) {
            alloc.ap_of[k] = digits[k] / M;
            alloc.mirror_of[k] = digits[k] % M;
        }
        return evaluate(alloc, tables, scene);
    });

    Allocation alloc;
    std::vector<int> digits((size_t)K, 0);
    decode(win.first, A, digits);
    alloc.ap_of.assign(K, 0);
    alloc.mirror_of.assign(K, 0);
    for (int k = 0; k < K; ++k) {
        alloc.ap_of[k] = digits[k] / M;
        alloc.mirror_of[k] = digits[k] % M;
    }
    return {alloc, win.second.utility, win.second.feasible};
}

SearchResult two_stage(const Scene& scene, const ChannelTables& tables, std::uint64_t budget) {
    const int K = tables.K, M = tables.M;
    if (M < 1) throw ConfigError("mirror stage needs at least one mirror");

    Allocation alloc;
    alloc.ap_of = stage1_aps(scene, tables, budget);
    alloc.mirror_of.assign(K, 0);

    // Given the APs, each user's rate depends only on its own mirror, so the
    // joint mirror optimum decomposes into per-user argmax scans.
    for (int k = 0; k < K; ++k) {
        int best_m = 0;
        double best_r = -1.0;
        for (int m = 0; m < M; ++m) {
            alloc.mirror_of[k] = m;
            const double r = user_rate(k, alloc, tables, scene);
            if (r > best_r) { best_r = r; best_m = m; }
        }
        alloc.mirror_of[k] = best_m;
    }
    return scored_result(alloc, tables, scene);
}

SearchResult distance_based(const Scene& scene, const ChannelTables& tables,
                            std::uint64_t budget) {
    const int K = tables.K, M = tables.M;
    if (M < 1) throw ConfigError("distance baseline needs at least one mirror");

    Allocation alloc;
    alloc.ap_of = stage1_aps(scene, tables, budget);
    alloc.mirror_of.assign(K, 0);
    for (int k = 0; k < K; ++k) {
        int best_m = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int m = 0; m < M; ++m) {
            const double d = distance(scene.users[k].position, scene.mirrors[m].center);
            if (d < best_d) { best_d = d; best_m = m; }
        }
        alloc.mirror_of[k] = best_m;
    }
    return scored_result(alloc, tables, scene);
}

SearchResult no_irs(const Scene& scene, const ChannelTables& tables, std::uint64_t budget) {
    Allocation alloc;
    alloc.ap_of = stage1_aps(scene, tables, budget);
    alloc.mirror_of.assign(tables.K, tables.M);
    return scored_result(alloc, tables, scene);
}

}  // namespace owc
