#pragma once

#include <random>
#include <vector>

#include "owc/scene.hpp"
#include "owc/vec3.hpp"

namespace owc {

// True iff the open segment p0-p1 intersects the solid cylinder.
bool segment_blocked(const Point3& p0, const Point3& p1, const Blocker& b);

// True iff no blocker occludes the segment.
bool path_clear(const Point3& p0, const Point3& p1, const std::vector<Blocker>& blockers);

// Matern hard-core placement by sequential rejection: uniform proposals in
// the wall-inset rectangle, kept only when at least hardcore_distance from
// every accepted center and not covering a user position. Saturating the
// proposal budget returns fewer blockers with a warning on stderr; an
// obviously impossible packing throws PlacementError up front.
std::vector<Blocker> sample_blockers(int count, double hardcore_distance,
                                     const RoomDims& room,
                                     const std::vector<Point3>& user_positions,
                                     double radius, double height,
                                     std::mt19937_64& rng);

}  // namespace owc
