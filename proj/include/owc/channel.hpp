#pragma once

#include <numbers>
#include <utility>
#include <vector>

#include "owc/allocation.hpp"
#include "owc/exec.hpp"
#include "owc/scene.hpp"

namespace owc {

// Prefactor applied to the SINR inside the achievable-rate log.
inline constexpr double kSinrScale = std::numbers::e / (2.0 * std::numbers::pi);

// Lambertian mode number for a half-power semi-angle in (0, pi/2).
double lambertian_order(double half_power_semi_angle);

// Direct-path DC gain AP -> branch. Zero when the receiver is outside the
// branch field of view, behind the AP emission plane, or shadowed.
double los_gain(const AccessPoint& ap, const ReceiverBranch& branch,
                const Point3& user_pos, const std::vector<Blocker>& blockers);

// Reflected-path DC gain AP -> mirror -> branch. Zero when any of the gates
// fails: branch FOV, mirror front face, reflected-ray alignment with the
// user direction (within align_tol), or blockage of either leg.
double irs_gain(const AccessPoint& ap, const MirrorElement& mirror,
                const ReceiverBranch& branch, const Point3& user_pos,
                const std::vector<Blocker>& blockers, double align_tol);

// Best branch (select-best combining) for the direct path plus, when mirror
// is non-null, the reflected path. Ties go to the lowest branch index.
std::pair<double, int> branch_select(const AccessPoint& ap, const MirrorElement* mirror,
                                     const UserTerminal& user,
                                     const std::vector<Blocker>& blockers,
                                     double align_tol);

struct ChannelTables {
    int K = 0, L = 0, M = 0;
    std::vector<double> los;  // K x L
    std::vector<double> irs;  // K x M x L

    double los_gain(int k, int l) const { return los[k * L + l]; }
    // m == M is the reserved null mirror
    double irs_gain(int k, int m, int l) const {
        return m == M ? 0.0 : irs[(k * M + m) * L + l];
    }
};

ChannelTables build_channel_tables(const Scene& scene, ExecMode mode = ExecMode::Parallel);

// Total receiver noise variance in A^2 over bandwidth B for received optical
// signal power Pr.
double noise_variance(const NoiseModel& noise, double responsivity, double received_power,
                      double bandwidth);

// Interfering current at user k: direct-path light of every other AP that
// serves at least one user under alloc.
double interference(int k, const Allocation& alloc, const ChannelTables& tables,
                    const Scene& scene);

double sinr(int k, const Allocation& alloc, const ChannelTables& tables, const Scene& scene);

// Bandwidth share times spectral efficiency; K_in is the number of users
// alloc puts on user k's AP.
double user_rate(int k, const Allocation& alloc, const ChannelTables& tables,
                 const Scene& scene);

std::vector<double> user_rates(const Allocation& alloc, const ChannelTables& tables,
                               const Scene& scene);

// Proportional-fairness objective: sum of ln(rate). -inf when any rate is 0.
double allocation_utility(const Allocation& alloc, const ChannelTables& tables,
                          const Scene& scene);

std::vector<bool> qos_satisfied(const Allocation& alloc, const ChannelTables& tables,
                                const Scene& scene);

bool all_qos_satisfied(const Allocation& alloc, const ChannelTables& tables,
                       const Scene& scene);

}  // namespace owc
