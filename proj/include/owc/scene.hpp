#pragma once

#include <vector>

#include "owc/geometry.hpp"
#include "owc/vec3.hpp"

namespace owc {

// Room corner at the origin, z up, ceiling at z = height.
struct RoomDims {
    double width = 5.0;   // x extent
    double depth = 5.0;   // y extent
    double height = 3.0;  // z extent
};

enum class Wall { XMin, XMax, YMin, YMax };

// Inward normal of a wall plane.
UnitVec3 wall_normal(Wall w);

struct AccessPoint {
    Point3 position;
    UnitVec3 normal = unit(Vec3{0, 0, -1});
    double half_power_semi_angle = 0.0;  // rad, (0, pi/2)
    double optical_power = 0.0;          // W
    double bandwidth = 0.0;              // Hz
};

struct MirrorElement {
    Point3 center;
    double width = 0.0;   // m, along the wall's horizontal axis
    double height = 0.0;  // m, vertical
    double reflectivity = 0.0;
    Wall wall = Wall::YMin;
    MirrorOrientation orientation;
    UnitVec3 normal = unit(Vec3{0, 1, 0});  // resolved from wall + orientation

    double area() const { return width * height; }
};

// Photodetector branch; the surface normal is given by elevation (angle from
// the room vertical) and azimuth (from +x, counterclockwise).
struct ReceiverBranch {
    double elevation = 0.0;       // rad, [0, pi/2]
    double azimuth = 0.0;         // rad
    double area = 0.0;            // m^2
    double fov_semi_angle = 0.0;  // rad, (0, pi/2]

    UnitVec3 normal() const;
};

struct UserTerminal {
    Point3 position;
    std::vector<ReceiverBranch> branches;
    double responsivity = 0.0;  // A/W
    double min_rate = 0.0;      // bit/s
};

struct NoiseModel {
    double amplifier_noise_density = 0.0;  // A^2/Hz
    double background_current = 0.0;       // A
    double electron_charge = 1.602176634e-19;
    bool include_signal_shot = false;
};

// Opaque vertical cylinder standing on the floor.
struct Blocker {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    double height = 0.0;
};

struct Scene {
    RoomDims room;
    std::vector<AccessPoint> aps;
    std::vector<MirrorElement> mirrors;  // all arrays flattened, array-major
    std::vector<UserTerminal> users;
    std::vector<Blocker> blockers;
    NoiseModel noise;
    double alignment_tolerance = 0.0;  // rad, reflected-ray pointing gate

    // Reserved index meaning "no mirror assigned"; its gain is identically 0.
    int null_mirror() const { return static_cast<int>(mirrors.size()); }
};

}  // namespace owc
