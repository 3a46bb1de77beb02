#pragma once

#include <string>
#include <vector>

#include "acbench/rng.hpp"
#include "acbench/types.hpp"

namespace acbench::thermsim {

/// Fixed air constants used by the segment-integrated thermal model.
struct PhysicalConstants {
    static constexpr double specific_heat_air = 1005.0;  // J kg^-1 K^-1
    static constexpr double density_air = 1.2;           // kg m^-3
};

struct RoomPhysical {
    double area_m2 = 12.0;           // A_r
    double height_m = 2.6;           // H_r
    double wall_area_m2 = 18.0;      // A_w
    double wall_thickness_m = 0.15;  // U_w
    double wall_conductivity = 1.4;  // k_w, W m^-1 K^-1
    double eer = 3.0;                // EER_o, dimensionless
    double solar_to_heat = 0.15;     // C_s2h in [0, 1]
    double human_heat_w = 0.0;       // constant internal heat rate (Q_hum / t_seg)

    double wall_conductance() const {  // k_w * A_w / U_w, W/K
        return wall_conductivity * wall_area_m2 / wall_thickness_m;
    }
};

/// One synthetic operation segment's driving conditions.
struct SegmentScenario {
    double t_seg_s = 7200.0;
    double t_set_mean_c = 24.0;
    double t_ri_c = 30.0;
    double t_a_mean_c = 31.0;
    double t_r_mean_c = 24.0;
    double p_si_mean_wm2 = 0.0;
    double h_a_mean_pct = 70.0;  // no power term; modulates generated noise only
};

/**
 * Segment-average AC electric power for a room under a scenario:
 *
 *   p = (1/EER) * [ -(1/t) * C_a * rho_a * H_r * A_r * (T_set - T_ri)
 *                   + (k_w * A_w / U_w) * (T_a - T_r)
 *                   + C_s2h * p_si + q_hum ]
 *
 * floored at 0 W. Serves as the ground-truth oracle for the whole pipeline.
 */
double segment_power(const RoomPhysical& room, const SegmentScenario& scen);

/// Fleet generator configuration; parsed from a TOML-style key/value file.
struct FleetSpec {
    // [rooms]
    std::vector<double> area_levels = {13.0, 20.0, 27.0, 40.0};
    int rooms_per_level = 5;
    double eer_min = 2.5;
    double eer_max = 4.5;
    double room_height_m = 2.6;
    double wall_thickness_m = 0.15;
    double wall_conductivity = 1.4;
    double solar_to_heat = 0.15;
    double human_heat_w = 120.0;

    // [scenarios]
    int segments_per_room = 60;
    int telemetry_cadence_s = 60;
    int weather_cadence_s = 300;
    std::vector<double> setpoint_prefs_c = {23.0, 24.0, 25.0, 26.0};  // cycled per area level
    double setpoint_jitter_c = 0.25;
    double t_r_offset_c = 0.3;   // stabilized T_r sits this far above the set point
    double t_r_jitter_c = 0.2;   // independent spread of T_r around that
    double duration_mean_s = 9000.0;
    double duration_jitter = 0.1;  // relative
    double ambient_base_c = 29.0;
    double ambient_daily_amp_c = 3.0;
    double min_power_w = 40.0;  // scheduled runs below this stay switched off

    // [noise]
    double sigma = 0.1;            // multiplicative lognormal noise on power
    double humidity_coupling = 0.2;  // H_a scales noise amplitude by up to +20%

    // [seed]
    uint64_t seed = 1234;

    int room_count() const { return static_cast<int>(area_levels.size()) * rooms_per_level; }
};

FleetSpec load_fleet_spec(const std::string& path);

struct GroundTruth {
    std::string room_id;
    double eer = 0.0;
    double solar_to_heat = 0.0;
};

/// A generated fleet: ingest-ready record streams plus the hidden efficiency.
struct Fleet {
    std::vector<RoomMeta> rooms;
    std::vector<TelemetryRecord> telemetry;  // all rooms, time-sorted per room
    std::vector<WeatherRecord> weather;      // one shared stream
    std::vector<GroundTruth> ground_truth;
    std::vector<OperationSegment> segments;  // generator-side truth (noisy EPI)
};

/**
 * Synthesizes a fleet of rooms with known EER. Scenario weather means are
 * derived by running the ingest feature computation on the synthesized
 * streams, so a noiseless fleet round-trips through ingest exactly.
 */
Fleet generate_fleet(const FleetSpec& spec);

/// Writes telemetry.csv / weather.csv / rooms.csv / ground_truth.csv.
void write_fleet_csvs(const Fleet& fleet, const std::string& out_dir,
                      const std::string& provenance);

}  // namespace acbench::thermsim
