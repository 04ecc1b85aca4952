#include "owc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "owc/errors.hpp"

namespace owc {

namespace {
constexpr double kTinyNorm = 1e-12;
constexpr double kUnitTol = 1e-9;
constexpr double kHalfPi = std::numbers::pi / 2.0;

double wrap_pi(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

void require_horizontal_base(const UnitVec3& base) {
    if (std::abs(base.z()) > kUnitTol)
        throw GeometryError("wall normal must be horizontal");
}
}  // namespace

UnitVec3 unit(const Vec3& v) {
    const double n = v.norm();
    if (n < kTinyNorm) throw GeometryError("cannot normalize near-zero vector");
    return UnitVec3{{v.x / n, v.y / n, v.z / n}};
}

double cos_angle(const Vec3& d, const UnitVec3& n) {
    const double len = d.norm();
    if (len < kTinyNorm) throw GeometryError("cos_angle of zero-length direction");
    return d.dot(n.vec()) / len;
}

// The roll axis is the wall's in-plane horizontal axis a = z x base; for a
// horizontal unit base, Rodrigues collapses to  u = base cos(roll) - z sin(roll),
// and the yaw is a plain rotation of u about the room vertical.
UnitVec3 normal_from_orientation(const UnitVec3& base, const MirrorOrientation& o) {
    require_horizontal_base(base);
    if (std::abs(o.roll) >= kHalfPi || std::abs(o.yaw) >= kHalfPi)
        throw GeometryError("orientation angles must lie in (-pi/2, pi/2)");

    const double cr = std::cos(o.roll), sr = std::sin(o.roll);
    const Vec3 u{base.x() * cr, base.y() * cr, -sr};
    const double cy = std::cos(o.yaw), sy = std::sin(o.yaw);
    const Vec3 n{u.x * cy - u.y * sy, u.x * sy + u.y * cy, u.z};

    if (n.dot(base.vec()) <= 0.0)
        throw GeometryError("oriented normal does not point into the room");
    return unit(n);
}

MirrorOrientation orientation_from_normal(const UnitVec3& base, const UnitVec3& n) {
    require_horizontal_base(base);

    const double sz = std::clamp(n.z(), -1.0, 1.0);
    const double roll = -std::asin(sz);
    const double cr = std::cos(roll);
    if (cr < kTinyNorm)
        throw GeometryError("vertical normal: yaw is ambiguous");

    const Vec3 u{base.x() * cr, base.y() * cr, -std::sin(roll)};
    const double yaw = wrap_pi(std::atan2(n.y(), n.x()) - std::atan2(u.y, u.x));

    if (std::abs(roll) >= kHalfPi || std::abs(yaw) >= kHalfPi)
        throw GeometryError("normal not reachable from this wall");
    if (n.dot(base.vec()) <= 0.0)
        throw GeometryError("normal points out of the room");

    const UnitVec3 check = normal_from_orientation(base, {roll, yaw});
    if ((check.vec() - n.vec()).norm() > 1e-9)
        throw GeometryError("orientation reconstruction failed");
    return {roll, yaw};
}

UnitVec3 specular_reflect(const UnitVec3& d, const UnitVec3& n) {
    const double k = 2.0 * d.dot(n.vec());
    return unit(d.vec() - n.vec() * k);
}

MirrorOrientation steer_mirror(const Point3& mirror_center, const Point3& ap,
                               const Point3& target, const UnitVec3& wall_normal) {
    const Vec3 to_ap = ap - mirror_center;
    const Vec3 to_target = target - mirror_center;
    if (to_ap.norm() < kTinyNorm || to_target.norm() < kTinyNorm)
        throw GeometryError("steer endpoints coincide with the mirror");

    const Vec3 bis = unit(to_ap).vec() + unit(to_target).vec();
    if (bis.norm() < 1e-9)
        throw GeometryError("grazing geometry: bisector vanishes");
    return orientation_from_normal(wall_normal, unit(bis));
}

}  // namespace owc
