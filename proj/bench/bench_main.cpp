// Timing harness for the two hot kernels. Each parallel kernel is checked
// against its serial twin before the numbers are printed, so a speedup is
// only reported for matching outputs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "owc/baselines.hpp"
#include "owc/channel.hpp"
#include "owc/scenario.hpp"

using namespace owc;

namespace {

double rad(double deg) { return deg * std::numbers::pi / 180.0; }

template <typename F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

void add_branches(UsersConfig& users) {
    users.branches.push_back({0.0, 0.0, 2e-5, rad(24.0)});
    for (double az : {0.0, 90.0, 180.0, 270.0})
        users.branches.push_back({rad(85.0), rad(az), 2e-5, rad(15.0)});
}

// Wide scene: table construction dominated by per-entry gain evaluation.
Scene table_scene() {
    ScenarioConfig cfg;
    cfg.seed = 7;
    cfg.align_tol_deg = 15.0;
    for (double x : {1.25, 3.75})
        for (double y : {1.25, 3.75}) cfg.aps.push_back({{x, y, 3.0}, 60.0, 5.0, 2e7});
    for (Wall w : {Wall::YMin, Wall::XMax}) {
        ArrayConfig arr;
        arr.wall = w;
        arr.rows = 5;
        arr.cols = 16;
        arr.center_z = 1.6;
        arr.pitch_v = 0.2;
        cfg.arrays.push_back(arr);
    }
    cfg.users.count = 40;
    cfg.users.min_rates = {1e6};
    add_branches(cfg.users);
    cfg.blockers.count = 3;
    cfg.noise.amplifier_noise_density = 1e-27;
    cfg.noise.include_signal_shot = true;
    return realize_scene(cfg, cfg.seed);
}

// Narrow scene with a deep search space for the exhaustive scan.
Scene search_scene() {
    ScenarioConfig cfg;
    cfg.seed = 11;
    cfg.align_tol_deg = 15.0;
    for (double x : {1.25, 3.75})
        for (double y : {1.25, 3.75}) cfg.aps.push_back({{x, y, 3.0}, 60.0, 5.0, 2e7});
    ArrayConfig arr;
    arr.rows = 1;
    arr.cols = 6;
    arr.center_z = 1.6;
    cfg.arrays.push_back(arr);
    cfg.users.count = 5;
    cfg.users.min_rates = {1e6};
    add_branches(cfg.users);
    cfg.noise.amplifier_noise_density = 1e-27;
    cfg.noise.include_signal_shot = true;
    return realize_scene(cfg, cfg.seed);
}

}  // namespace

int main() {
    {
        const Scene scene = table_scene();
        const ChannelTables ref = build_channel_tables(scene, ExecMode::Serial);
        const ChannelTables par = build_channel_tables(scene, ExecMode::Parallel);
        if (ref.los != par.los || ref.irs != par.irs) {
            std::fprintf(stderr, "channel_tables: serial and parallel outputs differ\n");
            return 1;
        }
        const double ts =
            best_of(5, [&] { (void)build_channel_tables(scene, ExecMode::Serial); });
        const double tp =
            best_of(5, [&] { (void)build_channel_tables(scene, ExecMode::Parallel); });
        std::printf("channel_tables      K=%-3d L=%d M=%-4d  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx\n",
                    ref.K, ref.L, ref.M, ts * 1e3, tp * 1e3, ts / tp);
    }
    {
        const Scene scene = search_scene();
        const ChannelTables tables = build_channel_tables(scene);
        const SearchResult rs = exhaustive_optimal(scene, tables, 20'000'000, ExecMode::Serial);
        const SearchResult rp = exhaustive_optimal(scene, tables, 20'000'000, ExecMode::Parallel);
        if (!(rs.alloc == rp.alloc) || rs.feasible != rp.feasible) {
            std::fprintf(stderr, "exhaustive_optimal: serial and parallel results differ\n");
            return 1;
        }
        const double ts = best_of(2, [&] {
            (void)exhaustive_optimal(scene, tables, 20'000'000, ExecMode::Serial);
        });
        const double tp = best_of(2, [&] {
            (void)exhaustive_optimal(scene, tables, 20'000'000, ExecMode::Parallel);
        });
        const double space = std::pow(double(tables.L) * tables.M, tables.K);
        std::printf("exhaustive_optimal  %.0f candidates      serial %8.2f ms  parallel %8.2f ms  speedup %.2fx\n",
                    space, ts * 1e3, tp * 1e3, ts / tp);
    }
    return 0;
}
