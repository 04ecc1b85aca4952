#include "owc/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "owc/errors.hpp"

namespace owc {

namespace {
constexpr double kEps = 1e-12;
constexpr int kProposalBudget = 10000;
}

bool segment_blocked(const Point3& p0, const Point3& p1, const Blocker& b) {
    // clip the parameter range to the cylinder's z-slab [0, height]
    double t0 = 0.0, t1 = 1.0;
    const double dz = p1.z - p0.z;
    if (std::abs(dz) < kEps) {
        if (p0.z < 0.0 || p0.z > b.height) return false;
    } else {
        double ta = (0.0 - p0.z) / dz;
        double tb = (b.height - p0.z) / dz;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }

    // closest approach of the clipped 2D projection to the disk center
    const double wx = p0.x - b.cx, wy = p0.y - b.cy;
    const double vx = p1.x - p0.x, vy = p1.y - p0.y;
    const double vv = vx * vx + vy * vy;
    double t = t0;
    if (vv > kEps) t = std::clamp(-(wx * vx + wy * vy) / vv, t0, t1);
    const double mx = wx + t * vx, my = wy + t * vy;
    return mx * mx + my * my <= b.radius * b.radius;
}

bool path_clear(const Point3& p0, const Point3& p1, const std::vector<Blocker>& blockers) {
    for (const auto& b : blockers)
        if (segment_blocked(p0, p1, b)) return false;
    return true;
}

std::vector<Blocker> sample_blockers(int count, double hardcore_distance,
                                     const RoomDims& room,
                                     const std::vector<Point3>& user_positions,
                                     double radius, double height,
                                     std::mt19937_64& rng) {
    if (count < 0) throw ConfigError("blocker count must be >= 0");
    if (count == 0) return {};
    if (hardcore_distance < 0.0 || radius <= 0.0 || height <= 0.0)
        throw ConfigError("invalid blocker parameters");

    const double area = room.width * room.depth;
    const double disk = std::numbers::pi * 0.25 * hardcore_distance * hardcore_distance;
    if (static_cast<double>(count) * disk > 2.0 * area)
        throw PlacementError("hard-core packing cannot fit requested blocker count");

    std::uniform_real_distribution<double> ux(radius, room.width - radius);
    std::uniform_real_distribution<double> uy(radius, room.depth - radius);

    std::vector<Blocker> placed;
    placed.reserve(count);
    for (int attempt = 0; attempt < kProposalBudget && (int)placed.size() < count; ++attempt) {
        const double x = ux(rng);
        const double y = uy(rng);

        bool ok = true;
        for (const auto& b : placed) {
            const double dx = b.cx - x, dy = b.cy - y;
            if (std::sqrt(dx * dx + dy * dy) < hardcore_distance) { ok = false; break; }
        }
        if (ok) {
            for (const auto& u : user_positions) {
                const double dx = u.x - x, dy = u.y - y;
                if (dx * dx + dy * dy <= radius * radius) { ok = false; break; }
            }
        }
        if (ok) placed.push_back({x, y, radius, height});
    }

    if ((int)placed.size() < count)
        std::cerr << "warning: blocker placement saturated at " << placed.size()
                  << " of " << count << " after " << kProposalBudget << " proposals\n";
    return placed;
}

}  // namespace owc
