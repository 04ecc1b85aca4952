#include "owc/scene.hpp"

#include <cmath>

#include "owc/errors.hpp"

namespace owc {

UnitVec3 wall_normal(Wall w) {
    switch (w) {
        case Wall::XMin: return unit(Vec3{1, 0, 0});
        case Wall::XMax: return unit(Vec3{-1, 0, 0});
        case Wall::YMin: return unit(Vec3{0, 1, 0});
        case Wall::YMax: return unit(Vec3{0, -1, 0});
    }
    throw GeometryError("unknown wall");
}

UnitVec3 ReceiverBranch::normal() const {
    const double se = std::sin(elevation), ce = std::cos(elevation);
    return unit(Vec3{se * std::cos(azimuth), se * std::sin(azimuth), ce});
}

}  // namespace owc
