#pragma once

#include "owc/vec3.hpp"

namespace owc {

// Mirror attitude relative to its wall: roll tilts the normal about the
// wall's in-plane horizontal axis, yaw then turns it about the vertical.
// Both angles live in the open interval (-pi/2, pi/2).
struct MirrorOrientation {
    double roll = 0.0;
    double yaw = 0.0;
};

// cos of the angle between a (non-degenerate) direction and a unit normal.
double cos_angle(const Vec3& d, const UnitVec3& n);

// Rotate a vertical wall's inward normal by (roll, yaw).
// base must be horizontal and unit length. The result must still point into
// the room (positive dot with base), otherwise GeometryError.
UnitVec3 normal_from_orientation(const UnitVec3& base, const MirrorOrientation& o);

// Inverse of normal_from_orientation. GeometryError when the normal is
// vertical (yaw ambiguous) or not reachable from this wall.
MirrorOrientation orientation_from_normal(const UnitVec3& base, const UnitVec3& n);

// Mirror-reflect direction d off a surface with unit normal n.
UnitVec3 specular_reflect(const UnitVec3& d, const UnitVec3& n);

// Orientation that sends the ray ap -> mirror_center on to target
// (bisector construction). GeometryError on degenerate geometry or when the
// required normal is not reachable from the wall.
MirrorOrientation steer_mirror(const Point3& mirror_center, const Point3& ap,
                               const Point3& target, const UnitVec3& wall_normal);

}  // namespace owc
