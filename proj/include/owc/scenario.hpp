#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "owc/scene.hpp"

namespace owc {

struct ApConfig {
    Point3 position;
    double semi_angle_deg = 60.0;
    double power = 5.0;       // W
    double bandwidth = 2e7;   // Hz
};

struct ArrayConfig {
    Wall wall = Wall::YMin;
    int rows = 5;
    int cols = 5;
    double elem_width = 0.25;
    double elem_height = 0.10;
    double reflectivity = 0.95;
    double center_z = 1.5;
    double pitch_h = 0.0;  // 0: spread over the wall extent
    double pitch_v = 0.25;
    double steer_target_z = 1.0;
    bool coverage = true;  // false: explicit per-mirror angles
    std::vector<MirrorOrientation> explicit_angles;  // row-major, radians
};

struct UsersConfig {
    int count = 0;
    std::vector<Point3> positions;  // empty: random placement
    double height = 1.0;
    double margin = 0.2;
    std::vector<double> min_rates;  // per user; scalar broadcast when size 1
    std::vector<ReceiverBranch> branches;
};

struct BlockerConfig {
    int count = 0;
    double hardcore = 0.3;
    double radius = 0.15;
    double height = 1.65;
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    RoomDims room;
    double align_tol_deg = 10.0;
    double responsivity = 0.4;  // A/W
    std::vector<ApConfig> aps;
    std::vector<ArrayConfig> arrays;
    UsersConfig users;
    NoiseModel noise;
    BlockerConfig blockers;
};

// Parse and validate scenario JSON; unknown keys are rejected.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

struct SceneOverrides {
    std::optional<double> power;      // applied to every AP
    std::optional<int> blocker_count;
    std::optional<int> array_count;   // first N configured arrays
};

// Deterministic scene realization: user placement first, then blocker
// placement, both driven by a generator seeded with `seed`; mirror elements
// are laid out and steered last.
Scene realize_scene(const ScenarioConfig& cfg, std::uint64_t seed,
                    const SceneOverrides& ov = {});

}  // namespace owc
