#pragma once

#include <cstdint>

#include "owc/allocation.hpp"
#include "owc/channel.hpp"
#include "owc/exec.hpp"
#include "owc/scene.hpp"

namespace owc {

struct SearchResult {
    Allocation alloc;
    double utility = 0.0;
    bool feasible = false;  // every user meets its QoS floor
};

// Exhaustive search over all (AP, mirror) assignments. QoS-feasible
// allocations are preferred; ties break to the lexicographically smallest
// decision vector. Throws BudgetError when (L*M)^K exceeds the budget.
SearchResult exhaustive_optimal(const Scene& scene, const ChannelTables& tables,
                                std::uint64_t budget = 10'000'000,
                                ExecMode mode = ExecMode::Parallel);

// Decomposed heuristic: stage 1 picks APs by exhaustive search over direct
// paths only; stage 2 keeps those APs and picks each user's mirror for the
// full objective (separable given the AP assignment).
SearchResult two_stage(const Scene& scene, const ChannelTables& tables,
                       std::uint64_t budget = 10'000'000);

// Stage-1 APs plus each user's geometrically nearest mirror.
SearchResult distance_based(const Scene& scene, const ChannelTables& tables,
                            std::uint64_t budget = 10'000'000);

// Stage-1 APs with the reflected path disabled (null mirror).
SearchResult no_irs(const Scene& scene, const ChannelTables& tables,
                    std::uint64_t budget = 10'000'000);

}  // namespace owc
