#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "acbench/ingest.hpp"
#include "acbench/rng.hpp"
#include "acbench/thermsim.hpp"

using namespace acbench;
using thermsim::RoomPhysical;
using thermsim::SegmentScenario;

namespace {

RoomPhysical fixture_room() {
    RoomPhysical room;
    room.height_m = 2.6;
    room.area_m2 = 12.0;
    room.eer = 3.0;
    // Wall conductance pinned to 20 W/K and direct solar term of 120 W.
    room.wall_conductivity = 1.0;
    room.wall_area_m2 = 20.0;
    room.wall_thickness_m = 1.0;
    room.solar_to_heat = 0.4;
    room.human_heat_w = 0.0;
    return room;
}

// Analytic partials of the power law, used as the finite-difference oracle.
struct Partials {
    double t_set, t_ri, t_a, t_r, p_si, t_seg, h_a;
};

Partials analytic_partials(const RoomPhysical& room, const SegmentScenario& s) {
    const double c = 1005.0 * 1.2 * room.height_m * room.area_m2;
    Partials p;
    p.t_set = -c / (s.t_seg_s * room.eer);
    p.t_ri = c / (s.t_seg_s * room.eer);
    p.t_a = room.wall_conductance() / room.eer;
    p.t_r = -room.wall_conductance() / room.eer;
    p.p_si = room.solar_to_heat / room.eer;
    p.t_seg = c * (s.t_set_mean_c - s.t_ri_c) / (s.t_seg_s * s.t_seg_s * room.eer);
    p.h_a = 0.0;
    return p;
}

}  // namespace

TEST_CASE("segment power hand fixture") {
    RoomPhysical room = fixture_room();
    SegmentScenario scen;
    scen.t_ri_c = 30.0;
    scen.t_set_mean_c = 24.0;
    scen.t_seg_s = 7200.0;
    scen.t_a_mean_c = 32.0;
    scen.t_r_mean_c = 24.0;  // T_a - T_r = 8
    scen.p_si_mean_wm2 = 300.0;  // C_s2h * p_si = 120 W

    // (1/3) * [ (1/7200)*1005*1.2*2.6*12*6 + 20*8 + 120 ] = 103.78533...
    const double expected = (225763.2 / 7200.0 + 160.0 + 120.0) / 3.0;
    CHECK(thermsim::segment_power(room, scen) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(thermsim::segment_power(room, scen) == doctest::Approx(103.7853333333).epsilon(1e-9));
}

TEST_CASE("segment power vanishes when every term does") {
    RoomPhysical room = fixture_room();
    room.human_heat_w = 0.0;
    SegmentScenario scen;
    scen.t_set_mean_c = scen.t_ri_c = 25.0;
    scen.t_a_mean_c = scen.t_r_mean_c = 28.0;
    scen.p_si_mean_wm2 = 0.0;
    CHECK(thermsim::segment_power(room, scen) == doctest::Approx(0.0));
}

TEST_CASE("doubling EER halves positive power") {
    RoomPhysical room = fixture_room();
    SegmentScenario scen;
    scen.t_ri_c = 31.0;
    scen.t_set_mean_c = 24.0;
    scen.t_a_mean_c = 33.0;
    scen.t_r_mean_c = 25.0;
    scen.p_si_mean_wm2 = 200.0;
    const double p1 = thermsim::segment_power(room, scen);
    room.eer *= 2.0;
    CHECK(thermsim::segment_power(room, scen) == doctest::Approx(p1 / 2.0).epsilon(1e-12));
}

TEST_CASE("negative balance floors at zero") {
    RoomPhysical room = fixture_room();
    SegmentScenario scen;
    scen.t_set_mean_c = 30.0;  // heating the set point above T_ri
    scen.t_ri_c = 22.0;
    scen.t_a_mean_c = 20.0;
    scen.t_r_mean_c = 28.0;  // wall losses
    scen.p_si_mean_wm2 = 0.0;
    CHECK(thermsim::segment_power(room, scen) == 0.0);
}

TEST_CASE("finite differences match analytic partials over random rooms") {
    Rng rng(90210);
    int tested = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        RoomPhysical room;
        room.area_m2 = rng.uniform(8.0, 45.0);
        room.height_m = rng.uniform(2.3, 3.2);
        room.wall_area_m2 = rng.uniform(10.0, 60.0);
        room.wall_thickness_m = rng.uniform(0.1, 0.4);
        room.wall_conductivity = rng.uniform(0.4, 2.0);
        room.eer = rng.uniform(2.0, 6.0);
        room.solar_to_heat = rng.uniform(0.05, 0.6);
        room.human_heat_w = rng.uniform(0.0, 300.0);

        SegmentScenario s;
        s.t_seg_s = rng.uniform(3600.0, 86400.0);
        s.t_set_mean_c = rng.uniform(18.0, 28.0);
        s.t_ri_c = rng.uniform(24.0, 34.0);
        s.t_a_mean_c = rng.uniform(26.0, 36.0);
        s.t_r_mean_c = rng.uniform(18.0, 28.0);
        s.p_si_mean_wm2 = rng.uniform(0.0, 900.0);
        s.h_a_mean_pct = rng.uniform(30.0, 95.0);

        // Keep clear of the zero floor so the law is differentiable.
        if (thermsim::segment_power(room, s) < 5.0) continue;
        ++tested;

        const auto partials = analytic_partials(room, s);
        const auto fd = [&](auto set, double h) {
            SegmentScenario hi = s, lo = s;
            set(hi, +h);
            set(lo, -h);
            return (thermsim::segment_power(room, hi) - thermsim::segment_power(room, lo)) /
                   (2 * h);
        };

        const double d_tset =
            fd([](SegmentScenario& x, double h) { x.t_set_mean_c += h; }, 1e-4);
        const double d_tri = fd([](SegmentScenario& x, double h) { x.t_ri_c += h; }, 1e-4);
        const double d_ta = fd([](SegmentScenario& x, double h) { x.t_a_mean_c += h; }, 1e-4);
        const double d_tr = fd([](SegmentScenario& x, double h) { x.t_r_mean_c += h; }, 1e-4);
        const double d_si =
            fd([](SegmentScenario& x, double h) { x.p_si_mean_wm2 += h; }, 1e-2);
        const double d_tseg = fd([](SegmentScenario& x, double h) { x.t_seg_s += h; }, 1.0);
        const double d_ha = fd([](SegmentScenario& x, double h) { x.h_a_mean_pct += h; }, 1e-2);

        // Linear terms are exact to FD accuracy.
        CHECK(d_ta == doctest::Approx(partials.t_a).epsilon(1e-9));
        CHECK(d_tr == doctest::Approx(partials.t_r).epsilon(1e-9));
        CHECK(d_si == doctest::Approx(partials.p_si).epsilon(1e-9));
        CHECK(d_tset == doctest::Approx(partials.t_set).epsilon(1e-6));
        CHECK(d_tri == doctest::Approx(partials.t_ri).epsilon(1e-6));
        CHECK(d_ha == doctest::Approx(0.0));
        // Duration's sign flips with the pulldown direction.
        if (std::fabs(partials.t_seg) > 1e-9)
            CHECK(d_tseg * partials.t_seg > 0.0);
    }
    CHECK(tested > 800);  // the floor should rarely bite with these draws
}

TEST_CASE("noiseless fleet round-trips through ingest exactly") {
    thermsim::FleetSpec spec;
    spec.area_levels = {12.0, 20.0};
    spec.rooms_per_level = 2;
    spec.segments_per_room = 8;
    spec.sigma = 0.0;
    spec.min_power_w = 0.0;  // keep every scheduled run for the exactness check
    spec.seed = 4242;

    const auto fleet = thermsim::generate_fleet(spec);
    CHECK(fleet.rooms.size() == 4);
    CHECK(fleet.segments.size() == 4 * 8);

    // Re-extract through the ingest path and compare the features.
    std::map<std::string, std::vector<TelemetryRecord>> per_room;
    for (const auto& rec : fleet.telemetry) per_room[rec.room_id].push_back(rec);

    size_t matched = 0;
    for (const auto& [room_id, stream] : per_room) {
        const auto raws = ingest::extract_segments(stream);
        for (const auto& raw : raws) {
            const auto seg = ingest::compute_segment_features(stream, raw, fleet.weather);
            bool found = false;
            for (const auto& truth : fleet.segments) {
                if (truth.room_id != room_id || truth.start != seg.start) continue;
                found = true;
                ++matched;
                CHECK(seg.t_seg_s == doctest::Approx(truth.t_seg_s).epsilon(1e-12));
                CHECK(seg.p_ac_mean_w == doctest::Approx(truth.p_ac_mean_w).epsilon(1e-9));
                CHECK(seg.t_a_mean_c == doctest::Approx(truth.t_a_mean_c).epsilon(1e-9));
                CHECK(seg.h_a_mean_pct == doctest::Approx(truth.h_a_mean_pct).epsilon(1e-9));
                CHECK(seg.p_si_mean_wm2 ==
                      doctest::Approx(truth.p_si_mean_wm2).epsilon(1e-9));
                CHECK(seg.t_ri_c == doctest::Approx(truth.t_ri_c).epsilon(1e-12));
                CHECK(seg.t_r_mean_c == doctest::Approx(truth.t_r_mean_c).epsilon(1e-9));
                CHECK(seg.t_set_mean_c == doctest::Approx(truth.t_set_mean_c).epsilon(1e-12));
            }
            CHECK(found);
        }
    }
    CHECK(matched == fleet.segments.size());
}

TEST_CASE("better EER rooms draw less power under identical scenarios") {
    RoomPhysical a = fixture_room();
    RoomPhysical b = fixture_room();
    a.eer = 3.0;
    b.eer = 4.0;
    Rng rng(5150);
    for (int i = 0; i < 50; ++i) {
        SegmentScenario s;
        s.t_seg_s = rng.uniform(3600, 20000);
        s.t_set_mean_c = rng.uniform(20, 27);
        s.t_ri_c = rng.uniform(27, 33);
        s.t_a_mean_c = rng.uniform(28, 35);
        s.t_r_mean_c = s.t_set_mean_c + 0.3;
        s.p_si_mean_wm2 = rng.uniform(0, 600);
        const double pa = thermsim::segment_power(a, s);
        const double pb = thermsim::segment_power(b, s);
        if (pa > 0.0) CHECK(pb < pa);
    }
}

TEST_CASE("fleet spec file parsing") {
    const auto dir = std::filesystem::temp_directory_path() / "acbench_fleet_spec";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "fleet.toml").string();
    {
        std::ofstream out(path);
        out << "# comment\n[rooms]\narea_levels = [10, 20]\nrooms_per_level = 3\n"
            << "eer_min = 2.0\neer_max = 5.0\n\n[scenarios]\nsegments_per_room = 7\n"
            << "[noise]\nsigma = 0.05\n[seed]\nvalue = 99\n";
    }
    const auto spec = thermsim::load_fleet_spec(path);
    CHECK(spec.area_levels == std::vector<double>{10.0, 20.0});
    CHECK(spec.rooms_per_level == 3);
    CHECK(spec.eer_min == doctest::Approx(2.0));
    CHECK(spec.segments_per_room == 7);
    CHECK(spec.sigma == doctest::Approx(0.05));
    CHECK(spec.seed == 99);
}
