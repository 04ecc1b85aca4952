#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "owc/blockage.hpp"
#include "owc/channel.hpp"
#include "owc/errors.hpp"
#include "owc/geometry.hpp"
#include "owc/scene.hpp"

using namespace owc;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

AccessPoint make_ap(Point3 pos, double semi_deg = 60.0, double power = 1.0) {
    AccessPoint ap;
    ap.position = pos;
    ap.normal = unit({0.0, 0.0, -1.0});
    ap.half_power_semi_angle = semi_deg * kDeg;
    ap.optical_power = power;
    ap.bandwidth = 2e7;
    return ap;
}

ReceiverBranch up_branch(double fov_deg = 90.0, double area = 20e-6) {
    ReceiverBranch b;
    b.elevation = 0.0;
    b.azimuth = 0.0;
    b.area = area;
    b.fov_semi_angle = fov_deg * kDeg;
    return b;
}

UserTerminal make_user(Point3 pos, double fov_deg = 90.0) {
    UserTerminal u;
    u.position = pos;
    u.branches = {up_branch(fov_deg)};
    u.responsivity = 0.4;
    u.min_rate = 1e6;
    return u;
}

// the worked reflected-path setup reused by several cases
MirrorElement worked_mirror() {
    MirrorElement m;
    m.center = {2.5, 0.0, 1.5};
    m.width = 0.25;
    m.height = 0.10;
    m.reflectivity = 0.95;
    m.wall = Wall::YMin;
    m.orientation = steer_mirror(m.center, {2.5, 2.5, 3.0}, {2.5, 2.0, 1.0}, wall_normal(Wall::YMin));
    m.normal = normal_from_orientation(wall_normal(Wall::YMin), m.orientation);
    return m;
}

NoiseModel quiet_noise() {
    NoiseModel n;
    n.amplifier_noise_density = 1e-22;
    n.background_current = 1e-4;
    n.include_signal_shot = true;
    return n;
}

}  // namespace

TEST_CASE("lambertian_order worked values") {
    // half-intensity identity holds exactly at 60 degrees
    CHECK(lambertian_order(60.0 * kDeg) == 1.0);
    CHECK(lambertian_order(30.0 * kDeg) == doctest::Approx(4.81884167930642).epsilon(1e-14));
    CHECK(lambertian_order(45.0 * kDeg) ==
          doctest::Approx(-std::numbers::ln2 / std::log(std::cos(45.0 * kDeg))).epsilon(1e-15));
    CHECK_THROWS_AS(lambertian_order(0.0), ConfigError);
    CHECK_THROWS_AS(lambertian_order(std::numbers::pi / 2.0), ConfigError);
    CHECK_THROWS_AS(lambertian_order(-0.3), ConfigError);
}

TEST_CASE("los_gain on-axis golden value") {
    const AccessPoint ap = make_ap({2.5, 2.5, 3.0});
    const auto branch = up_branch();
    const double h = los_gain(ap, branch, {2.5, 2.5, 1.0}, {});
    CHECK(std::abs(h - 1.5915494309189535e-06) <= 1e-10);
    CHECK(h == doctest::Approx(1.5915494309189535e-06).epsilon(1e-14));
}

TEST_CASE("los_gain gates") {
    const AccessPoint ap = make_ap({2.5, 2.5, 3.0});

    // receiver just inside / outside its field of view
    const Point3 off{4.5, 2.5, 1.0};  // 45 degrees off the vertical
    CHECK(los_gain(ap, up_branch(46.0), off, {}) > 0.0);
    CHECK(los_gain(ap, up_branch(44.0), off, {}) == 0.0);

    // user above the emission plane sees nothing
    CHECK(los_gain(make_ap({2.5, 2.5, 1.0}), up_branch(), {2.5, 2.5, 2.0}, {}) == 0.0);

    // blocker on the path kills the gain, one off the path does not
    const std::vector<Blocker> hit = {{2.5, 2.5, 0.2, 2.5}};
    const std::vector<Blocker> miss = {{1.0, 1.0, 0.2, 2.5}};
    CHECK(los_gain(ap, up_branch(), {2.5, 2.5, 1.0}, hit) == 0.0);
    CHECK(los_gain(ap, up_branch(), {2.5, 2.5, 1.0}, miss) > 0.0);

    CHECK_THROWS_AS(los_gain(ap, up_branch(), {2.5, 2.5, 3.0}, {}), GeometryError);
}

TEST_CASE("irs_gain worked golden value") {
    const AccessPoint ap = make_ap({2.5, 2.5, 3.0});
    MirrorElement m = worked_mirror();
    m.width = 0.25;
    m.height = 0.10;  // dA = 0.025
    const double h = irs_gain(ap, m, up_branch(), {2.5, 2.0, 1.0}, {}, 15.0 * kDeg);
    CHECK(h == doctest::Approx(7.616593393647571e-10).epsilon(1e-12));
    // nominal rounding of the same quantity
    CHECK(std::abs(h - 7.615e-10) <= 2e-13);
}

TEST_CASE("irs_gain gates") {
    const AccessPoint ap = make_ap({2.5, 2.5, 3.0});
    const Point3 user{2.5, 2.0, 1.0};
    const double tol = 15.0 * kDeg;
    const MirrorElement m = worked_mirror();

    // steered exactly: passes; user moved far off the reflected ray: zero
    CHECK(irs_gain(ap, m, up_branch(), user, {}, tol) > 0.0);
    CHECK(irs_gain(ap, m, up_branch(), {0.5, 4.5, 1.0}, {}, tol) == 0.0);

    // alignment tolerance shrunk below the actual miss angle
    const Point3 near_user{2.5, 2.3, 1.0};
    const double wide = irs_gain(ap, m, up_branch(), near_user, {}, tol);
    CHECK(wide > 0.0);
    CHECK(irs_gain(ap, m, up_branch(), near_user, {}, 0.01 * kDeg) == 0.0);

    // branch FOV gate on the mirror-to-user leg
    CHECK(irs_gain(ap, m, up_branch(10.0), user, {}, tol) == 0.0);

    // mirror back side: flip the normal away from the room
    MirrorElement back = m;
    back.normal = unit({0.0, -1.0, 0.0});
    CHECK(irs_gain(ap, back, up_branch(), user, {}, tol) == 0.0);

    // blockage of either leg
    const std::vector<Blocker> leg1 = {{2.5, 1.2, 0.2, 3.0}};  // AP -> mirror
    const std::vector<Blocker> leg2 = {{2.5, 0.8, 0.2, 1.4}};  // mirror -> user
    CHECK(irs_gain(ap, m, up_branch(), user, leg1, tol) == 0.0);
    CHECK(irs_gain(ap, m, up_branch(), user, leg2, tol) == 0.0);
    CHECK(irs_gain(ap, m, up_branch(), user, {{1.0, 4.0, 0.2, 1.4}}, tol) > 0.0);
}

TEST_CASE("branch_select picks the best branch, ties to the lowest index") {
    const AccessPoint ap = make_ap({2.5, 2.5, 3.0});
    UserTerminal u = make_user({2.5, 2.5, 1.0});
    ReceiverBranch side;
    side.elevation = 85.0 * kDeg;
    side.azimuth = 0.0;
    side.area = 20e-6;
    side.fov_semi_angle = 15.0 * kDeg;
    u.branches = {side, up_branch()};

    auto [g, idx] = branch_select(ap, nullptr, u, {}, 15.0 * kDeg);
    CHECK(g == doctest::Approx(1.5915494309189535e-06).epsilon(1e-12));
    CHECK(idx == 1);

    // identical branches tie; index 0 wins
    u.branches = {up_branch(), up_branch()};
    auto [g2, idx2] = branch_select(ap, nullptr, u, {}, 15.0 * kDeg);
    CHECK(g2 == doctest::Approx(g).epsilon(1e-15));
    CHECK(idx2 == 0);
}

TEST_CASE("noise_variance composition") {
    NoiseModel nm = quiet_noise();
    // amplifier floor + ambient shot + signal shot at Pr = 1e-6 W
    CHECK(noise_variance(nm, 0.4, 1e-6, 2e7) ==
          doctest::Approx(2.6434341362144e-15).epsilon(1e-12));
    // dropping the signal-shot flag removes exactly that term
    nm.include_signal_shot = false;
    const double base = noise_variance(nm, 0.4, 1e-6, 2e7);
    CHECK(noise_variance(nm, 0.4, 0.0, 2e7) == doctest::Approx(base).epsilon(1e-15));
    nm.include_signal_shot = true;
    CHECK(noise_variance(nm, 0.4, 1e-6, 2e7) - base ==
          doctest::Approx(2.0 * 1.602176634e-19 * 0.4 * 1e-6 * 2e7).epsilon(1e-12));
    CHECK_THROWS_AS(noise_variance(nm, 0.4, 1e-6, 0.0), ConfigError);
    CHECK_THROWS_AS(noise_variance(nm, 0.4, -1e-6, 2e7), ConfigError);
}

TEST_CASE("single-user sinr and rate golden values") {
    Scene s;
    s.aps = {make_ap({2.5, 2.5, 3.0})};
    s.users = {make_user({2.5, 2.5, 1.0})};
    s.noise = quiet_noise();
    s.alignment_tolerance = 15.0 * kDeg;
    const auto t = build_channel_tables(s, ExecMode::Serial);
    const Allocation a{{0}, {s.null_mirror()}};
    CHECK(sinr(0, a, t, s) == doctest::Approx(153.22960672867174).epsilon(1e-12));
    CHECK(user_rate(0, a, t, s) == doctest::Approx(121447011.80444081).epsilon(1e-12));
    CHECK(allocation_utility(a, t, s) ==
          doctest::Approx(std::log(121447011.80444081)).epsilon(1e-12));
    CHECK(all_qos_satisfied(a, t, s));
}

TEST_CASE("interference counts only loaded foreign APs") {
    Scene s;
    s.aps = {make_ap({1.25, 2.5, 3.0}, 60.0, 5.0), make_ap({3.75, 2.5, 3.0}, 60.0, 5.0)};
    s.users = {make_user({1.25, 2.5, 1.0}), make_user({3.75, 2.5, 1.0})};
    s.noise = quiet_noise();
    s.alignment_tolerance = 15.0 * kDeg;
    const auto t = build_channel_tables(s, ExecMode::Serial);
    const int nm = s.null_mirror();

    // cross gain at 2.5 m lateral offset, both cosines 2/sqrt(10.25)
    CHECK(t.los_gain(0, 1) == doctest::Approx(2.423775456961643e-07).epsilon(1e-12));

    const Allocation both{{0, 1}, {nm, nm}};
    CHECK(interference(0, both, t, s) ==
          doctest::Approx(0.4 * 5.0 * 2.423775456961643e-07).epsilon(1e-12));
    CHECK(sinr(0, both, t, s) == doctest::Approx(42.634844750425806).epsilon(1e-12));
    CHECK(user_rate(0, both, t, s) == doctest::Approx(85626586.91923101).epsilon(1e-12));

    // park both users on AP 0: AP 1 goes dark, the interference vanishes,
    // and the bandwidth is split two ways
    const Allocation packed{{0, 0}, {nm, nm}};
    CHECK(interference(0, packed, t, s) == 0.0);
    CHECK(sinr(0, packed, t, s) > sinr(0, both, t, s));
    const double half_band = s.aps[0].bandwidth / 2.0;
    CHECK(user_rate(0, packed, t, s) ==
          doctest::Approx(half_band * std::log2(1.0 + kSinrScale * sinr(0, packed, t, s)))
              .epsilon(1e-12));
}

TEST_CASE("sinr grows monotonically with transmit power") {
    Scene s;
    s.aps = {make_ap({1.25, 2.5, 3.0}, 60.0, 1.0), make_ap({3.75, 2.5, 3.0}, 60.0, 1.0)};
    s.users = {make_user({1.5, 2.0, 1.0}), make_user({3.3, 3.0, 1.0})};
    s.noise = quiet_noise();
    s.alignment_tolerance = 15.0 * kDeg;
    const auto t = build_channel_tables(s, ExecMode::Serial);
    const Allocation a{{0, 1}, {s.null_mirror(), s.null_mirror()}};

    double prev0 = 0.0, prev1 = 0.0;
    for (double p = 0.5; p <= 8.0; p += 0.5) {
        Scene sp = s;
        for (auto& ap : sp.aps) ap.optical_power = p;
        const double s0 = sinr(0, a, t, sp);
        const double s1 = sinr(1, a, t, sp);
        CHECK(s0 > prev0);
        CHECK(s1 > prev1);
        prev0 = s0;
        prev1 = s1;
    }
}

TEST_CASE("allocation_utility is -inf when a user gets zero rate") {
    Scene s;
    s.aps = {make_ap({1.0, 1.0, 3.0})};
    // narrow FOV user far off axis receives nothing
    s.users = {make_user({1.0, 1.0, 1.0}), make_user({4.5, 4.5, 1.0}, 5.0)};
    s.noise = quiet_noise();
    s.alignment_tolerance = 15.0 * kDeg;
    const auto t = build_channel_tables(s, ExecMode::Serial);
    const int nm = s.null_mirror();
    const Allocation a{{0, 0}, {nm, nm}};
    CHECK(t.los_gain(1, 0) == 0.0);
    CHECK(std::isinf(allocation_utility(a, t, s)));
    CHECK(allocation_utility(a, t, s) < 0.0);
    const auto ok = qos_satisfied(a, t, s);
    CHECK(ok[0]);
    CHECK_FALSE(ok[1]);
    CHECK_FALSE(all_qos_satisfied(a, t, s));
}

TEST_CASE("channel tables agree between serial and parallel builds") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> xy(0.3, 4.7), uz(0.9, 1.3);
    Scene s;
    s.aps = {make_ap({1.25, 1.25, 3.0}, 60.0, 5.0), make_ap({3.75, 1.25, 3.0}, 60.0, 5.0),
             make_ap({1.25, 3.75, 3.0}, 60.0, 5.0), make_ap({3.75, 3.75, 3.0}, 60.0, 5.0)};
    for (int i = 0; i < 6; ++i) s.users.push_back(make_user({xy(rng), xy(rng), uz(rng)}, 60.0));
    for (int c = 0; c < 8; ++c) {
        MirrorElement m;
        m.center = {0.3 + 0.6 * c, 0.0, 1.5};
        m.width = 0.25;
        m.height = 0.10;
        m.reflectivity = 0.95;
        m.wall = Wall::YMin;
        m.orientation = steer_mirror(m.center, s.aps[c % 4].position,
                                     {m.center.x, 2.0, 1.0}, wall_normal(Wall::YMin));
        m.normal = normal_from_orientation(wall_normal(Wall::YMin), m.orientation);
        s.mirrors.push_back(m);
    }
    s.blockers = {{2.0, 2.0, 0.15, 1.65}, {3.5, 3.0, 0.15, 1.65}};
    s.noise = quiet_noise();
    s.alignment_tolerance = 15.0 * kDeg;

    const auto ser = build_channel_tables(s, ExecMode::Serial);
    const auto par = build_channel_tables(s, ExecMode::Parallel);
    REQUIRE(ser.los.size() == par.los.size());
    REQUIRE(ser.irs.size() == par.irs.size());
    for (size_t i = 0; i < ser.los.size(); ++i) CHECK(ser.los[i] == par.los[i]);
    for (size_t i = 0; i < ser.irs.size(); ++i) CHECK(ser.irs[i] == par.irs[i]);

    // null mirror column reads as zero gain
    for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 4; ++l) CHECK(ser.irs_gain(k, 8, l) == 0.0);
}

TEST_CASE("allocation validation rejects malformed input") {
    Scene s;
    s.aps = {make_ap({2.5, 2.5, 3.0})};
    s.users = {make_user({2.5, 2.5, 1.0})};
    s.noise = quiet_noise();
    const auto t = build_channel_tables(s, ExecMode::Serial);
    CHECK_THROWS_AS(user_rate(0, Allocation{{0, 0}, {0, 0}}, t, s), ContractError);
    CHECK_THROWS_AS(user_rate(0, Allocation{{1}, {0}}, t, s), ContractError);
    CHECK_THROWS_AS(user_rate(0, Allocation{{0}, {5}}, t, s), ContractError);
    CHECK_THROWS_AS(user_rate(0, Allocation{{-1}, {0}}, t, s), ContractError);
}
