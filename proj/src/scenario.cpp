#include "owc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "owc/blockage.hpp"
#include "owc/errors.hpp"
#include "owc/geometry.hpp"

namespace owc {

namespace {

using nlohmann::json;

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("scenario: " + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const bool known =
            std::any_of(allowed.begin(), allowed.end(),
                        [&](const char* k) { return it.key() == k; });
        if (!known) fail(path, "unknown key '" + it.key() + "'");
    }
}

double num(const json& obj, const std::string& path, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number()) fail(path, std::string(key) + " must be a number");
    return obj[key].get<double>();
}

double num_req(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path, std::string("missing required key ") + key);
    return num(obj, path, key, 0.0);
}

int integer(const json& obj, const std::string& path, const char* key, int dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number_integer()) fail(path, std::string(key) + " must be an integer");
    return obj[key].get<int>();
}

Point3 point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number())
        fail(path, "expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Wall parse_wall(const std::string& s, const std::string& path) {
    if (s == "xmin") return Wall::XMin;
    if (s == "xmax") return Wall::XMax;
    if (s == "ymin") return Wall::YMin;
    if (s == "ymax") return Wall::YMax;
    fail(path, "wall must be one of xmin, xmax, ymin, ymax");
}

ReceiverBranch parse_branch(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "branch must be an object");
    check_keys(j, path, {"elevation_deg", "azimuth_deg", "area_m2", "fov_semi_angle_deg"});
    ReceiverBranch b;
    b.elevation = deg2rad(num(j, path, "elevation_deg", 0.0));
    b.azimuth = deg2rad(num(j, path, "azimuth_deg", 0.0));
    b.area = num(j, path, "area_m2", 2e-5);
    b.fov_semi_angle = deg2rad(num(j, path, "fov_semi_angle_deg", 90.0));
    if (b.elevation < 0.0 || b.elevation > std::numbers::pi / 2.0 + 1e-12)
        fail(path, "elevation_deg must lie in [0, 90]");
    if (b.area <= 0.0) fail(path, "area_m2 must be positive");
    if (!(b.fov_semi_angle > 0.0) || b.fov_semi_angle > std::numbers::pi / 2.0 + 1e-12)
        fail(path, "fov_semi_angle_deg must lie in (0, 90]");
    return b;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("scenario: top level must be an object");
    check_keys(j, "top", {"seed", "room", "alignment_tolerance_deg", "responsivity_a_per_w",
                          "aps", "mirror_arrays", "users", "noise", "blockers"});

    ScenarioConfig cfg;

    if (!j.contains("seed") || !j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
        throw ConfigError("scenario: top: seed is required and must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();

    if (j.contains("room")) {
        const auto& r = j["room"];
        check_keys(r, "room", {"width", "depth", "height"});
        cfg.room.width = num(r, "room", "width", 5.0);
        cfg.room.depth = num(r, "room", "depth", 5.0);
        cfg.room.height = num(r, "room", "height", 3.0);
        if (cfg.room.width <= 0 || cfg.room.depth <= 0 || cfg.room.height <= 0)
            fail("room", "dimensions must be positive");
    }

    cfg.align_tol_deg = num(j, "top", "alignment_tolerance_deg", 10.0);
    if (cfg.align_tol_deg <= 0.0 || cfg.align_tol_deg > 90.0)
        fail("top", "alignment_tolerance_deg must lie in (0, 90]");
    cfg.responsivity = num(j, "top", "responsivity_a_per_w", 0.4);
    if (cfg.responsivity <= 0.0) fail("top", "responsivity_a_per_w must be positive");

    if (!j.contains("aps") || !j["aps"].is_array() || j["aps"].empty())
        fail("aps", "at least one access point is required");
    for (std::size_t i = 0; i < j["aps"].size(); ++i) {
        const auto& a = j["aps"][i];
        const std::string path = "aps[" + std::to_string(i) + "]";
        if (!a.is_object()) fail(path, "must be an object");
        check_keys(a, path, {"position", "half_power_semi_angle_deg", "power_w", "bandwidth_hz"});
        ApConfig ac;
        if (!a.contains("position")) fail(path, "missing position");
        ac.position = point(a["position"], path + ".position");
        ac.semi_angle_deg = num(a, path, "half_power_semi_angle_deg", 60.0);
        ac.power = num(a, path, "power_w", 5.0);
        ac.bandwidth = num(a, path, "bandwidth_hz", 2e7);
        if (ac.semi_angle_deg <= 0.0 || ac.semi_angle_deg >= 90.0)
            fail(path, "half_power_semi_angle_deg must lie in (0, 90)");
        if (ac.power <= 0.0) fail(path, "power_w must be positive");
        if (ac.bandwidth <= 0.0) fail(path, "bandwidth_hz must be positive");
        if (ac.position.x < 0 || ac.position.x > cfg.room.width || ac.position.y < 0 ||
            ac.position.y > cfg.room.depth || ac.position.z <= 0 ||
            ac.position.z > cfg.room.height)
            fail(path, "AP must sit inside the room, below or at the ceiling");
        cfg.aps.push_back(ac);
    }

    if (j.contains("mirror_arrays")) {
        if (!j["mirror_arrays"].is_array()) fail("mirror_arrays", "must be an array");
        for (std::size_t i = 0; i < j["mirror_arrays"].size(); ++i) {
            const auto& m = j["mirror_arrays"][i];
            const std::string path = "mirror_arrays[" + std::to_string(i) + "]";
            if (!m.is_object()) fail(path, "must be an object");
            check_keys(m, path,
                       {"wall", "rows", "cols", "element_width", "element_height",
                        "reflectivity", "center_z", "pitch_h", "pitch_v", "steering",
                        "explicit_angles_deg", "steer_target_z"});
            ArrayConfig mc;
            if (!m.contains("wall") || !m["wall"].is_string()) fail(path, "missing wall");
            mc.wall = parse_wall(m["wall"].get<std::string>(), path);
            mc.rows = integer(m, path, "rows", 5);
            mc.cols = integer(m, path, "cols", 5);
            if (mc.rows < 1 || mc.cols < 1) fail(path, "rows and cols must be >= 1");
            mc.elem_width = num(m, path, "element_width", 0.25);
            mc.elem_height = num(m, path, "element_height", 0.10);
            if (mc.elem_width <= 0 || mc.elem_height <= 0)
                fail(path, "element dimensions must be positive");
            mc.reflectivity = num(m, path, "reflectivity", 0.95);
            if (mc.reflectivity <= 0.0 || mc.reflectivity > 1.0)
                fail(path, "reflectivity must lie in (0, 1]");
            mc.center_z = num(m, path, "center_z", 1.5);
            mc.pitch_h = num(m, path, "pitch_h", 0.0);
            mc.pitch_v = num(m, path, "pitch_v", 0.25);
            mc.steer_target_z = num(m, path, "steer_target_z", 1.0);
            if (m.contains("steering")) {
                if (!m["steering"].is_string()) fail(path, "steering must be a string");
                const std::string s = m["steering"].get<std::string>();
                if (s == "coverage") mc.coverage = true;
                else if (s == "explicit") mc.coverage = false;
                else fail(path, "steering must be 'coverage' or 'explicit'");
            }
            if (!mc.coverage) {
                if (!m.contains("explicit_angles_deg") || !m["explicit_angles_deg"].is_array())
                    fail(path, "explicit steering needs explicit_angles_deg");
                for (const auto& e : m["explicit_angles_deg"]) {
                    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                        fail(path, "explicit_angles_deg entries must be [roll, yaw]");
                    mc.explicit_angles.push_back(
                        {deg2rad(e[0].get<double>()), deg2rad(e[1].get<double>())});
                }
                if ((int)mc.explicit_angles.size() != mc.rows * mc.cols)
                    fail(path, "explicit_angles_deg must list rows*cols entries");
            } else if (m.contains("explicit_angles_deg")) {
                fail(path, "explicit_angles_deg requires steering = 'explicit'");
            }
            cfg.arrays.push_back(mc);
        }
    }

    if (!j.contains("users") || !j["users"].is_object())
        fail("users", "users section is required");
    {
        const auto& u = j["users"];
        check_keys(u, "users",
                   {"count", "positions", "height", "margin", "min_rate_bps", "branches"});
        if (u.contains("positions")) {
            if (!u["positions"].is_array() || u["positions"].empty())
                fail("users.positions", "must be a non-empty array");
            for (std::size_t i = 0; i < u["positions"].size(); ++i)
                cfg.users.positions.push_back(
                    point(u["positions"][i], "users.positions[" + std::to_string(i) + "]"));
            cfg.users.count = (int)cfg.users.positions.size();
            if (u.contains("count") && integer(u, "users", "count", 0) != cfg.users.count)
                fail("users", "count disagrees with the positions list");
        } else {
            cfg.users.count = integer(u, "users", "count", 0);
            if (cfg.users.count < 1) fail("users", "count must be >= 1");
        }
        cfg.users.height = num(u, "users", "height", 1.0);
        cfg.users.margin = num(u, "users", "margin", 0.2);
        if (cfg.users.height <= 0 || cfg.users.height >= cfg.room.height)
            fail("users", "height must lie inside the room");
        if (cfg.users.margin < 0 || 2 * cfg.users.margin >= std::min(cfg.room.width, cfg.room.depth))
            fail("users", "margin leaves no floor area");

        if (u.contains("min_rate_bps")) {
            if (u["min_rate_bps"].is_number()) {
                cfg.users.min_rates.assign(cfg.users.count, u["min_rate_bps"].get<double>());
            } else if (u["min_rate_bps"].is_array()) {
                for (const auto& r : u["min_rate_bps"]) {
                    if (!r.is_number()) fail("users.min_rate_bps", "entries must be numbers");
                    cfg.users.min_rates.push_back(r.get<double>());
                }
                if ((int)cfg.users.min_rates.size() != cfg.users.count)
                    fail("users.min_rate_bps", "list length must equal the user count");
            } else {
                fail("users.min_rate_bps", "must be a number or a list");
            }
        } else {
            cfg.users.min_rates.assign(cfg.users.count, 1e6);
        }
        for (double r : cfg.users.min_rates)
            if (r < 0.0) fail("users.min_rate_bps", "must be non-negative");

        if (u.contains("branches")) {
            if (!u["branches"].is_array() || u["branches"].empty())
                fail("users.branches", "must be a non-empty array");
            for (std::size_t i = 0; i < u["branches"].size(); ++i)
                cfg.users.branches.push_back(
                    parse_branch(u["branches"][i], "users.branches[" + std::to_string(i) + "]"));
        } else {
            ReceiverBranch up;
            up.elevation = 0.0;
            up.azimuth = 0.0;
            up.area = 2e-5;
            up.fov_semi_angle = std::numbers::pi / 2.0;
            cfg.users.branches.push_back(up);
        }
    }

    if (j.contains("noise")) {
        const auto& n = j["noise"];
        check_keys(n, "noise", {"amplifier_noise_density_a2_per_hz", "background_current_a",
                                "include_signal_shot"});
        cfg.noise.amplifier_noise_density =
            num_req(n, "noise", "amplifier_noise_density_a2_per_hz");
        cfg.noise.background_current = num(n, "noise", "background_current_a", 0.0);
        if (n.contains("include_signal_shot")) {
            if (!n["include_signal_shot"].is_boolean())
                fail("noise", "include_signal_shot must be a boolean");
            cfg.noise.include_signal_shot = n["include_signal_shot"].get<bool>();
        }
        if (cfg.noise.amplifier_noise_density < 0 || cfg.noise.background_current < 0)
            fail("noise", "noise terms must be non-negative");
    } else {
        cfg.noise.amplifier_noise_density = 1e-22;
    }

    if (j.contains("blockers")) {
        const auto& b = j["blockers"];
        check_keys(b, "blockers", {"count", "hardcore_distance_m", "radius_m", "height_m"});
        cfg.blockers.count = integer(b, "blockers", "count", 0);
        cfg.blockers.hardcore = num(b, "blockers", "hardcore_distance_m", 0.3);
        cfg.blockers.radius = num(b, "blockers", "radius_m", 0.15);
        cfg.blockers.height = num(b, "blockers", "height_m", 1.65);
        if (cfg.blockers.count < 0) fail("blockers", "count must be >= 0");
        if (cfg.blockers.radius <= 0 || cfg.blockers.height <= 0 || cfg.blockers.hardcore < 0)
            fail("blockers", "blocker geometry must be positive");
        if (cfg.blockers.height >= cfg.room.height)
            fail("blockers", "blockers must be shorter than the room");
    }

    for (const auto& p : cfg.users.positions)
        if (p.x < 0 || p.x > cfg.room.width || p.y < 0 || p.y > cfg.room.depth || p.z <= 0 ||
            p.z >= cfg.room.height)
            fail("users.positions", "user outside the room");

    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

namespace {

struct WallFrame {
    // maps (h, v) wall coordinates to a room point; depth_dir points into
    // the room from the wall
    Point3 origin;       // wall point at h = 0, v = 0
    Vec3 h_axis;         // unit, along the wall's horizontal extent
    double h_extent;     // wall width along h_axis
    double depth_extent; // room extent perpendicular to the wall
    Vec3 depth_dir;      // unit, into the room
};

WallFrame wall_frame(Wall w, const RoomDims& room) {
    switch (w) {
        case Wall::YMin:
            return {{0, 0, 0}, {1, 0, 0}, room.width, room.depth, {0, 1, 0}};
        case Wall::YMax:
            return {{0, room.depth, 0}, {1, 0, 0}, room.width, room.depth, {0, -1, 0}};
        case Wall::XMin:
            return {{0, 0, 0}, {0, 1, 0}, room.depth, room.width, {1, 0, 0}};
        case Wall::XMax:
            return {{room.width, 0, 0}, {0, 1, 0}, room.depth, room.width, {-1, 0, 0}};
    }
    throw GeometryError("unknown wall");
}

}  // namespace

Scene realize_scene(const ScenarioConfig& cfg, std::uint64_t seed, const SceneOverrides& ov) {
    Scene scene;
    scene.room = cfg.room;
    scene.alignment_tolerance = deg2rad(cfg.align_tol_deg);
    scene.noise = cfg.noise;

    for (const auto& a : cfg.aps) {
        AccessPoint ap;
        ap.position = a.position;
        ap.normal = unit(Vec3{0, 0, -1});
        ap.half_power_semi_angle = deg2rad(a.semi_angle_deg);
        ap.optical_power = ov.power.value_or(a.power);
        ap.bandwidth = a.bandwidth;
        if (ap.optical_power <= 0.0) throw ConfigError("override power must be positive");
        scene.aps.push_back(ap);
    }

    std::mt19937_64 rng(seed);

    // users first so blocker rejection sees their positions
    std::vector<Point3> positions = cfg.users.positions;
    if (positions.empty()) {
        std::uniform_real_distribution<double> ux(cfg.users.margin,
                                                  cfg.room.width - cfg.users.margin);
        std::uniform_real_distribution<double> uy(cfg.users.margin,
                                                  cfg.room.depth - cfg.users.margin);
        for (int k = 0; k < cfg.users.count; ++k) {
            const double x = ux(rng);
            const double y = uy(rng);
            positions.push_back({x, y, cfg.users.height});
        }
    }
    const auto& mins = cfg.users.min_rates;
    if ((int)mins.size() != cfg.users.count && mins.size() != 1)
        throw ConfigError("min_rates must hold one entry per user or a single broadcast value");
    for (int k = 0; k < cfg.users.count; ++k) {
        UserTerminal u;
        u.position = positions[k];
        u.branches = cfg.users.branches;
        u.responsivity = cfg.responsivity;
        u.min_rate = mins.size() == 1 ? mins[0] : mins[k];
        scene.users.push_back(u);
    }

    const int blocker_count = ov.blocker_count.value_or(cfg.blockers.count);
    scene.blockers = sample_blockers(blocker_count, cfg.blockers.hardcore, cfg.room, positions,
                                     cfg.blockers.radius, cfg.blockers.height, rng);

    int array_count = ov.array_count.value_or((int)cfg.arrays.size());
    if (array_count < 0 || array_count > (int)cfg.arrays.size())
        throw ConfigError("array count override out of range");

    for (int ai = 0; ai < array_count; ++ai) {
        const auto& ac = cfg.arrays[ai];
        const WallFrame frame = wall_frame(ac.wall, cfg.room);
        const UnitVec3 base = wall_normal(ac.wall);
        const double pitch_h = ac.pitch_h > 0.0 ? ac.pitch_h : frame.h_extent / ac.cols;

        for (int r = 0; r < ac.rows; ++r) {
            for (int c = 0; c < ac.cols; ++c) {
                MirrorElement el;
                el.wall = ac.wall;
                el.width = ac.elem_width;
                el.height = ac.elem_height;
                el.reflectivity = ac.reflectivity;

                const double h = frame.h_extent / 2.0 + (c - (ac.cols - 1) / 2.0) * pitch_h;
                const double v = ac.center_z + (r - (ac.rows - 1) / 2.0) * ac.pitch_v;
                el.center = frame.origin + frame.h_axis * h + Vec3{0, 0, v};
                if (h - ac.elem_width / 2.0 < 0.0 || h + ac.elem_width / 2.0 > frame.h_extent ||
                    v - ac.elem_height / 2.0 < 0.0 ||
                    v + ac.elem_height / 2.0 > cfg.room.height)
                    throw ConfigError("mirror element extends beyond its wall");

                if (ac.coverage) {
                    // mirror (r, c) covers the floor cell r rows into the room
                    // and c cells along the wall, reflecting its nearest AP
                    if (scene.aps.empty()) throw ConfigError("coverage steering needs APs");
                    int nearest = 0;
                    double best = std::numeric_limits<double>::infinity();
                    for (int l = 0; l < (int)scene.aps.size(); ++l) {
                        const double d = distance(scene.aps[l].position, el.center);
                        if (d < best) { best = d; nearest = l; }
                    }
                    const double cell_h = (c + 0.5) * frame.h_extent / ac.cols;
                    const double cell_d = (r + 0.5) * frame.depth_extent / ac.rows;
                    const Point3 target = frame.origin + frame.h_axis * cell_h +
                                          frame.depth_dir * cell_d +
                                          Vec3{0, 0, ac.steer_target_z};
                    el.orientation = steer_mirror(el.center, scene.aps[nearest].position,
                                                  target, base);
                } else {
                    el.orientation = ac.explicit_angles[r * ac.cols + c];
                }
                el.normal = normal_from_orientation(base, el.orientation);
                scene.mirrors.push_back(el);
            }
        }
    }

    return scene;
}

}  // namespace owc
