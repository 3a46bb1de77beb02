#include <algorithm>
#include <cmath>
#include <filesystem>

#include "acbench/csv.hpp"
#include "acbench/errors.hpp"
#include "acbench/ingest.hpp"
#include "acbench/thermsim.hpp"

namespace acbench::thermsim {

namespace {

// Piecewise-constant ambient weather over the fleet horizon: a daily cycle
// plus slow seeded drift, sampled at the weather cadence.
struct WeatherModel {
    double base_c;
    double daily_amp_c;
    Rng rng;
    double drift = 0.0;

    WeatherRecord at(Timestamp t) {
        const double day_phase =
            2.0 * 3.14159265358979323846 * static_cast<double>(t % 86400) / 86400.0;
        drift = 0.995 * drift + 0.15 * rng.normal();
        WeatherRecord w;
        w.timestamp = t;
        // Peak mid-afternoon (phase shifted from midnight).
        w.outdoor_temp_c = base_c + daily_amp_c * std::sin(day_phase - 1.2) + drift;
        w.rel_humidity_pct =
            std::clamp(78.0 - 1.8 * (w.outdoor_temp_c - base_c) + 2.0 * rng.normal(), 35.0, 97.0);
        const double solar = std::sin(day_phase - 1.57);  // daylight half-cycle
        w.solar_irradiance_wm2 =
            solar > 0.0 ? 750.0 * solar * (0.75 + 0.25 * rng.uniform()) : 0.0;
        return w;
    }
};

std::string orientation_for(int index) {
    static const char* kOrientations[] = {"north", "northeast", "east", "southeast",
                                          "south", "southwest", "west", "northwest"};
    return kOrientations[index % 8];
}

}  // namespace

Fleet generate_fleet(const FleetSpec& spec) {
    Fleet fleet;
    const int n_levels = static_cast<int>(spec.area_levels.size());

    // Weather first, over a horizon long enough for every room's schedule.
    const Timestamp epoch = 1700000000;  // arbitrary fixed origin
    const double mean_cycle = spec.duration_mean_s * 2.5;
    const Timestamp horizon =
        epoch +
        static_cast<Timestamp>(static_cast<double>(spec.segments_per_room) * mean_cycle * 1.6) +
        86400;
    WeatherModel weather{spec.ambient_base_c, spec.ambient_daily_amp_c,
                         Rng::stream(spec.seed, "weather")};
    for (Timestamp t = epoch - 2 * spec.weather_cadence_s; t <= horizon;
         t += spec.weather_cadence_s)
        fleet.weather.push_back(weather.at(t));

    for (int level = 0; level < n_levels; ++level) {
        const double area = spec.area_levels[static_cast<size_t>(level)];
        const double setpoint_pref =
            spec.setpoint_prefs_c[static_cast<size_t>(level) % spec.setpoint_prefs_c.size()];
        for (int r = 0; r < spec.rooms_per_level; ++r) {
            const std::string room_id =
                "r" + std::to_string(level + 1) + "_" + std::to_string(r + 1);

            RoomPhysical room;
            room.area_m2 = area;
            room.height_m = spec.room_height_m;
            room.wall_area_m2 = 2.0 * std::sqrt(area) * spec.room_height_m;
            room.wall_thickness_m = spec.wall_thickness_m;
            room.wall_conductivity = spec.wall_conductivity;
            room.solar_to_heat = spec.solar_to_heat;
            room.human_heat_w = spec.human_heat_w;
            room.eer = spec.rooms_per_level > 1
                           ? spec.eer_min + (spec.eer_max - spec.eer_min) *
                                                static_cast<double>(r) /
                                                (spec.rooms_per_level - 1)
                           : spec.eer_min;

            fleet.rooms.push_back({room_id, area, orientation_for(level * 3 + r)});
            fleet.ground_truth.push_back({room_id, room.eer, room.solar_to_heat});

            Rng rng = Rng::stream(spec.seed, "room", room_id);
            const Timestamp cadence = spec.telemetry_cadence_s;
            // Rooms start staggered so their schedules interleave naturally.
            Timestamp cursor = epoch + static_cast<Timestamp>(rng.below(120)) * cadence;

            std::vector<TelemetryRecord> room_telemetry;
            for (int s = 0; s < spec.segments_per_room; ++s) {
                // Tenant habits: set point near the room preference, duration
                // near the room's usual length, in whole cadence steps.
                const double t_set =
                    std::clamp(setpoint_pref + rng.normal() * spec.setpoint_jitter_c, 16.0, 32.0);
                double dur = spec.duration_mean_s *
                             (1.0 + spec.duration_jitter * (2.0 * rng.uniform() - 1.0));
                Timestamp t_seg = static_cast<Timestamp>(std::round(dur / cadence)) * cadence;
                t_seg = std::max<Timestamp>(t_seg, 2 * cadence);

                const Timestamp start = cursor;
                const Timestamp end = start + t_seg;
                const double t_ri = t_set + 3.0 + 2.5 * rng.uniform();  // warm start
                // Stabilized near the set point, loosened by the jitter knob.
                const double t_r_mean =
                    t_set + spec.t_r_offset_c + spec.t_r_jitter_c * rng.normal();
                // First reading is exactly T_ri; the constant tail keeps the
                // sample-and-hold mean exactly at t_r_mean.
                const double tail =
                    (t_r_mean * static_cast<double>(t_seg) - t_ri * static_cast<double>(cadence)) /
                    static_cast<double>(t_seg - cadence);

                for (Timestamp t = start; t <= end; t += cadence) {
                    TelemetryRecord rec;
                    rec.timestamp = t;
                    rec.room_id = room_id;
                    rec.status = AcStatus::On;
                    rec.mode = AcMode::Cooling;
                    rec.set_point_c = t_set;
                    rec.indoor_temp_c = t == start ? t_ri : tail;
                    rec.power_w = 0.0;  // filled below once the scenario is known
                    room_telemetry.push_back(rec);
                }
                // Explicit off record closes the run.
                TelemetryRecord off;
                off.timestamp = end + cadence;
                off.room_id = room_id;
                off.status = AcStatus::Off;
                off.mode = AcMode::Other;
                off.set_point_c = t_set;
                off.indoor_temp_c = tail;
                off.power_w = 0.0;
                room_telemetry.push_back(off);

                // Idle gap before the next run, multiple of the cadence.
                cursor = end + cadence * (20 + static_cast<Timestamp>(rng.below(160)));
            }

            // Derive the factual weather means the same way ingest will.
            const auto raws = ingest::extract_segments(room_telemetry);
            for (const auto& raw : raws) {
                auto seg =
                    ingest::compute_segment_features(room_telemetry, raw, fleet.weather);
                SegmentScenario scen;
                scen.t_seg_s = seg.t_seg_s;
                scen.t_set_mean_c = seg.t_set_mean_c;
                scen.t_ri_c = seg.t_ri_c;
                scen.t_a_mean_c = seg.t_a_mean_c;
                scen.t_r_mean_c = seg.t_r_mean_c;
                scen.p_si_mean_wm2 = seg.p_si_mean_wm2;
                scen.h_a_mean_pct = seg.h_a_mean_pct;

                double p = segment_power(room, scen);
                if (p < spec.min_power_w) {
                    // Cooling would be pointless here; the tenant leaves the
                    // AC off, so the scheduled run never enters the data.
                    for (size_t i = raw.first; i <= raw.last; ++i) {
                        room_telemetry[i].status = AcStatus::Off;
                        room_telemetry[i].mode = AcMode::Other;
                    }
                    continue;
                }
                if (spec.sigma > 0.0) {
                    // Humidity widens the noise amplitude by up to the
                    // configured coupling at 100% RH.
                    const double sigma_eff =
                        spec.sigma * (1.0 + spec.humidity_coupling * scen.h_a_mean_pct / 100.0);
                    p *= std::exp(sigma_eff * rng.normal());
                }

                for (size_t i = raw.first; i <= raw.last; ++i)
                    room_telemetry[i].power_w = p;

                seg.p_ac_mean_w = p;
                fleet.segments.push_back(seg);
            }

            fleet.telemetry.insert(fleet.telemetry.end(), room_telemetry.begin(),
                                   room_telemetry.end());
        }
    }
    return fleet;
}

void write_fleet_csvs(const Fleet& fleet, const std::string& out_dir,
                      const std::string& provenance) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

    {
        csv::Writer w(path("telemetry.csv"));
        w.comment(provenance);
        w.row({"timestamp", "room_id", "status", "mode", "set_point_c", "indoor_temp_c",
               "power_w", "compressor_id"});
        for (const auto& rec : fleet.telemetry) {
            w.row({std::to_string(rec.timestamp), rec.room_id,
                   rec.status == AcStatus::On ? "on" : "off",
                   rec.mode == AcMode::Cooling
                       ? "cooling"
                       : (rec.mode == AcMode::Dehumidifying ? "dehumidifying" : "other"),
                   csv::format_double(rec.set_point_c), csv::format_double(rec.indoor_temp_c),
                   csv::format_double(rec.power_w), rec.compressor_id});
        }
    }
    {
        csv::Writer w(path("weather.csv"));
        w.comment(provenance);
        w.row({"timestamp", "outdoor_temp_c", "rel_humidity_pct", "solar_irradiance_wm2"});
        for (const auto& rec : fleet.weather)
            w.row({std::to_string(rec.timestamp), csv::format_double(rec.outdoor_temp_c),
                   csv::format_double(rec.rel_humidity_pct),
                   csv::format_double(rec.solar_irradiance_wm2)});
    }
    {
        csv::Writer w(path("rooms.csv"));
        w.comment(provenance);
        w.row({"room_id", "area_m2", "orientation"});
        for (const auto& room : fleet.rooms)
            w.row({room.room_id, csv::format_double(room.area_m2), room.orientation});
    }
    {
        csv::Writer w(path("ground_truth.csv"));
        w.comment(provenance);
        w.row({"room_id", "eer", "c_s2h"});
        for (const auto& gt : fleet.ground_truth)
            w.row({gt.room_id, csv::format_double(gt.eer), csv::format_double(gt.solar_to_heat)});
    }
}

}  // namespace acbench::thermsim
