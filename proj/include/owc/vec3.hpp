#pragma once

#include <cmath>

namespace owc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

using Point3 = Vec3;

// Unit-norm direction. Construct through owc::unit() so the norm-1 invariant
// (within 1e-9) holds everywhere a direction is expected.
class UnitVec3 {
public:
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    const Vec3& vec() const { return v_; }
    double dot(const Vec3& o) const { return v_.dot(o); }

private:
    explicit UnitVec3(const Vec3& v) : v_(v) {}
    friend UnitVec3 unit(const Vec3&);
    Vec3 v_;
};

UnitVec3 unit(const Vec3& v);

}  // namespace owc
