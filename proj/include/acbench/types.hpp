#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace acbench {

/// Seconds since epoch, UTC. Daylight-saving ambiguity is out of scope.
using Timestamp = int64_t;

enum class AcStatus { Off, On };
enum class AcMode { Cooling, Dehumidifying, Other };

struct TelemetryRecord {
    Timestamp timestamp = 0;
    std::string room_id;
    AcStatus status = AcStatus::Off;
    AcMode mode = AcMode::Other;
    double set_point_c = 0.0;    // T_set
    double indoor_temp_c = 0.0;  // T_r
    double power_w = 0.0;        // p_ac
    std::string compressor_id;   // empty = single-split
};

struct WeatherRecord {
    Timestamp timestamp = 0;
    double outdoor_temp_c = 0.0;      // T_a
    double rel_humidity_pct = 0.0;    // H_a, in (0, 100)
    double solar_irradiance_wm2 = 0.0;  // p_si, >= 0
};

struct RoomMeta {
    std::string room_id;
    double area_m2 = 0.0;  // A_r, > 0
    std::string orientation;  // informational
};

/// The seven segment-wise noisy factors, in the fixed model-input order.
enum FactorIndex : int {
    kAmbientTemp = 0,   // T_a mean (deg C)
    kHumidity = 1,      // H_a mean (%)
    kSolar = 2,         // p_si mean (W/m2)
    kInitialRoomTemp = 3,  // T_ri (deg C)
    kRoomTemp = 4,      // T_r mean (deg C)
    kDuration = 5,      // t_seg (s)
    kSetPoint = 6,      // T_set mean (deg C)
};

inline constexpr int kNumFactors = 7;

/// Model input: [T_a, H_a, p_si, T_ri, T_r, t_seg, T_set].
using FeatureVector = std::array<double, kNumFactors>;

extern const std::array<std::string, kNumFactors> kFactorNames;

/// Resolves a factor CSV/CLI name ("t_set_mean", ...) to its index; -1 if unknown.
int factor_index(const std::string& name);

/// One AC run from switch-on to switch-off, with its EPI and noisy factors.
struct OperationSegment {
    std::string room_id;
    Timestamp start = 0;
    Timestamp end = 0;
    double t_seg_s = 0.0;
    double p_ac_mean_w = 0.0;  // the EPI
    double t_a_mean_c = 0.0;
    double h_a_mean_pct = 0.0;
    double p_si_mean_wm2 = 0.0;
    double t_ri_c = 0.0;
    double t_r_mean_c = 0.0;
    double t_set_mean_c = 0.0;

    FeatureVector features() const {
        return {t_a_mean_c, h_a_mean_pct, p_si_mean_wm2, t_ri_c,
                t_r_mean_c, t_seg_s,      t_set_mean_c};
    }

    double factor(int index) const { return features()[static_cast<size_t>(index)]; }
};

struct FilterConfig {
    double t_seg_min_s = 3600.0;
    double t_seg_max_s = 86400.0;
    int n_seg_min = 20;
    bool exclusive_multisplit = false;
};

/// Minimum EPI for a segment to stay valid; keeps percentage errors defined.
inline constexpr double kMinValidEpiW = 1.0;

struct RoomDataset {
    std::string room_id;
    double area_m2 = 0.0;
    std::vector<OperationSegment> segments;

    size_t n_seg() const { return segments.size(); }

    std::vector<double> epi_values() const {
        std::vector<double> y;
        y.reserve(segments.size());
        for (const auto& s : segments) y.push_back(s.p_ac_mean_w);
        return y;
    }

    std::vector<FeatureVector> feature_matrix() const {
        std::vector<FeatureVector> x;
        x.reserve(segments.size());
        for (const auto& s : segments) x.push_back(s.features());
        return x;
    }

    /// Historical sample of one noisy factor across the room's segments.
    std::vector<double> factor_history(int index) const {
        std::vector<double> v;
        v.reserve(segments.size());
        for (const auto& s : segments) v.push_back(s.factor(index));
        return v;
    }
};

}  // namespace acbench
