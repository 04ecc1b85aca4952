#include "owc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "owc/blockage.hpp"
#include "owc/errors.hpp"

namespace owc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_alloc(const Allocation& alloc, const ChannelTables& t) {
    if ((int)alloc.ap_of.size() != t.K || (int)alloc.mirror_of.size() != t.K)
        throw ContractError("allocation size does not match table dimensions");
    for (int k = 0; k < t.K; ++k) {
        if (alloc.ap_of[k] < 0 || alloc.ap_of[k] >= t.L)
            throw ContractError("AP index out of range");
        if (alloc.mirror_of[k] < 0 || alloc.mirror_of[k] > t.M)
            throw ContractError("mirror index out of range");
    }
}

double branch_gain(const AccessPoint& ap, const MirrorElement* mirror,
                   const ReceiverBranch& branch, const Point3& user_pos,
                   const std::vector<Blocker>& blockers, double align_tol,
                   bool with_los, bool with_irs) {
    double g = 0.0;
    if (with_los) g += los_gain(ap, branch, user_pos, blockers);
    if (with_irs && mirror) g += irs_gain(ap, *mirror, branch, user_pos, blockers, align_tol);
    return g;
}

std::pair<double, int> best_branch(const AccessPoint& ap, const MirrorElement* mirror,
                                   const UserTerminal& user,
                                   const std::vector<Blocker>& blockers, double align_tol,
                                   bool with_los, bool with_irs) {
    if (user.branches.empty()) throw ConfigError("user terminal has no receiver branches");
    double best = -1.0;
    int arg = 0;
    for (int b = 0; b < (int)user.branches.size(); ++b) {
        const double g = branch_gain(ap, mirror, user.branches[b], user.position, blockers,
                                     align_tol, with_los, with_irs);
        if (g > best) { best = g; arg = b; }
    }
    return {best, arg};
}

}  // namespace

double lambertian_order(double half_power_semi_angle) {
    if (!(half_power_semi_angle > 0.0) || !(half_power_semi_angle < std::numbers::pi / 2.0))
        throw ConfigError("half-power semi-angle must lie in (0, pi/2)");
    double c = std::cos(half_power_semi_angle);
    // Degree-to-radian quantization moves cos(60 deg) a couple of ulp off 1/2;
    // restore the half-intensity identity exactly.
    if (std::abs(c - 0.5) <= 4.0 * std::numeric_limits<double>::epsilon()) c = 0.5;
    return -std::numbers::ln2 / std::log(c);
}

double los_gain(const AccessPoint& ap, const ReceiverBranch& branch,
                const Point3& user_pos, const std::vector<Blocker>& blockers) {
    const Vec3 d = user_pos - ap.position;  // AP -> user
    const double dist2 = d.norm2();
    if (dist2 < 1e-24) throw GeometryError("AP and user coincide");

    const double cos_irr = cos_angle(d, ap.normal);
    if (cos_irr <= 0.0) return 0.0;
    const double cos_inc = cos_angle(-d, branch.normal());
    if (cos_inc < std::cos(branch.fov_semi_angle)) return 0.0;
    if (!path_clear(ap.position, user_pos, blockers)) return 0.0;

    const double n = lambertian_order(ap.half_power_semi_angle);
    return (n + 1.0) * branch.area * std::pow(cos_irr, n) * cos_inc / (kTwoPi * dist2);
}

double irs_gain(const AccessPoint& ap, const MirrorElement& mirror,
                const ReceiverBranch& branch, const Point3& user_pos,
                const std::vector<Blocker>& blockers, double align_tol) {
    const Vec3 d_am = mirror.center - ap.position;  // AP -> mirror
    const Vec3 d_um = mirror.center - user_pos;     // user -> mirror
    if (d_am.norm2() < 1e-24 || d_um.norm2() < 1e-24)
        throw GeometryError("degenerate reflected-path geometry");

    const double cos_irr = cos_angle(d_am, ap.normal);
    if (cos_irr <= 0.0) return 0.0;
    const double cos_inc = cos_angle(d_um, branch.normal());
    if (cos_inc < std::cos(branch.fov_semi_angle)) return 0.0;

    // front-face and pointing gates
    const UnitVec3 in_dir = unit(d_am);
    if (in_dir.dot(mirror.normal.vec()) >= 0.0) return 0.0;
    if (d_um.dot(mirror.normal.vec()) >= 0.0) return 0.0;
    const UnitVec3 reflected = specular_reflect(in_dir, mirror.normal);
    const UnitVec3 to_user = unit(-d_um);
    const double mis = std::acos(std::clamp(reflected.dot(to_user.vec()), -1.0, 1.0));
    if (mis > align_tol) return 0.0;

    if (!path_clear(ap.position, mirror.center, blockers)) return 0.0;
    if (!path_clear(mirror.center, user_pos, blockers)) return 0.0;

    const double n = lambertian_order(ap.half_power_semi_angle);
    const double total = d_am.norm() + d_um.norm();
    return (n + 1.0) * mirror.reflectivity * branch.area * mirror.area() *
           std::pow(cos_irr, n) * cos_inc / (kTwoPi * total * total);
}

std::pair<double, int> branch_select(const AccessPoint& ap, const MirrorElement* mirror,
                                     const UserTerminal& user,
                                     const std::vector<Blocker>& blockers,
                                     double align_tol) {
    return best_branch(ap, mirror, user, blockers, align_tol, true, mirror != nullptr);
}

ChannelTables build_channel_tables(const Scene& scene, ExecMode mode) {
    ChannelTables t;
    t.K = (int)scene.users.size();
    t.L = (int)scene.aps.size();
    t.M = (int)scene.mirrors.size();
    t.los.assign((size_t)t.K * t.L, 0.0);
    t.irs.assign((size_t)t.K * t.M * t.L, 0.0);

    const bool par = mode == ExecMode::Parallel;
    const int KL = t.K * t.L;
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < KL; ++i) {
        const int k = i / t.L, l = i % t.L;
        t.los[i] = best_branch(scene.aps[l], nullptr, scene.users[k], scene.blockers,
                               scene.alignment_tolerance, true, false)
                       .first;
    }

    const int KM = t.K * t.M;
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < KM; ++i) {
        const int k = i / t.M, m = i % t.M;
        for (int l = 0; l < t.L; ++l) {
            t.irs[(size_t)i * t.L + l] =
                best_branch(scene.aps[l], &scene.mirrors[m], scene.users[k], scene.blockers,
                            scene.alignment_tolerance, false, true)
                    .first;
        }
    }
    return t;
}

double noise_variance(const NoiseModel& noise, double responsivity, double received_power,
                      double bandwidth) {
    if (bandwidth <= 0.0) throw ConfigError("bandwidth must be positive");
    if (received_power < 0.0) throw ConfigError("received power must be non-negative");
    const double q = noise.electron_charge;
    double var = 2.0 * q * noise.background_current * bandwidth +
                 noise.amplifier_noise_density * bandwidth;
    if (noise.include_signal_shot)
        var += 2.0 * q * responsivity * received_power * bandwidth;
    return var;
}

double interference(int k, const Allocation& alloc, const ChannelTables& tables,
                    const Scene& scene) {
    check_alloc(alloc, tables);
    std::vector<int> load(tables.L, 0);
    for (int a : alloc.ap_of) ++load[a];

    const int serving = alloc.ap_of[k];
    double sum = 0.0;
    for (int l = 0; l < tables.L; ++l) {
        if (l == serving || load[l] == 0) continue;
        sum += scene.aps[l].optical_power * tables.los_gain(k, l);
    }
    return scene.users[k].responsivity * sum;
}

double sinr(int k, const Allocation& alloc, const ChannelTables& tables, const Scene& scene) {
    check_alloc(alloc, tables);
    const int x = alloc.ap_of[k];
    const double h = tables.los_gain(k, x) + tables.irs_gain(k, alloc.mirror_of[k], x);
    const double p = scene.aps[x].optical_power;
    const double r0 = scene.users[k].responsivity;
    const double signal = r0 * p * h;
    const double interf = interference(k, alloc, tables, scene);
    const double var =
        noise_variance(scene.noise, r0, p * h, scene.aps[x].bandwidth);
    const double den = interf * interf + var;
    if (den <= 0.0)
        throw SimError("zero denominator: noiseless interference-free configuration");
    return signal * signal / den;
}

double user_rate(int k, const Allocation& alloc, const ChannelTables& tables,
                 const Scene& scene) {
    check_alloc(alloc, tables);
    const int x = alloc.ap_of[k];
    int k_in = 0;
    for (int a : alloc.ap_of)
        if (a == x) ++k_in;
    const double b = scene.aps[x].bandwidth;
    return b / k_in * std::log2(1.0 + kSinrScale * sinr(k, alloc, tables, scene));
}

std::vector<double> user_rates(const Allocation& alloc, const ChannelTables& tables,
                               const Scene& scene) {
    std::vector<double> r(tables.K);
    for (int k = 0; k < tables.K; ++k) r[k] = user_rate(k, alloc, tables, scene);
    return r;
}

double allocation_utility(const Allocation& alloc, const ChannelTables& tables,
                          const Scene& scene) {
    double u = 0.0;
    for (int k = 0; k < tables.K; ++k) {
        const double r = user_rate(k, alloc, tables, scene);
        if (r <= 0.0) return -std::numeric_limits<double>::infinity();
        u += std::log(r);
    }
    return u;
}

std::vector<bool> qos_satisfied(const Allocation& alloc, const ChannelTables& tables,
                                const Scene& scene) {
    std::vector<bool> ok(tables.K);
    for (int k = 0; k < tables.K; ++k)
        ok[k] = user_rate(k, alloc, tables, scene) >= scene.users[k].min_rate;
    return ok;
}

bool all_qos_satisfied(const Allocation& alloc, const ChannelTables& tables,
                       const Scene& scene) {
    const auto ok = qos_satisfied(alloc, tables, scene);
    return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
}

}  // namespace owc
