#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acbench/types.hpp"

namespace acbench::ingest {

/// Gap inside an on-run longer than this splits the segment.
inline constexpr int64_t kGapSplitS = 600;
/// A weather record must sit within this distance of the segment window.
inline constexpr int64_t kWeatherToleranceS = 900;

struct RejectCounts {
    int64_t malformed = 0;      // wrong field count / unparsable value
    int64_t invalid_value = 0;  // violates a physical-range invariant
    int64_t duplicate_timestamp = 0;

    int64_t total() const { return malformed + invalid_value + duplicate_timestamp; }
};

struct ParsedInputs {
    std::map<std::string, std::vector<TelemetryRecord>> telemetry;  // per room, time-sorted
    std::vector<WeatherRecord> weather;                             // time-sorted
    std::vector<RoomMeta> rooms;
    RejectCounts telemetry_rejects;
    RejectCounts weather_rejects;
    RejectCounts room_rejects;
    int64_t telemetry_rows = 0;
    int64_t weather_rows = 0;
    int64_t room_rows = 0;
};

/**
 * Reads the three input CSVs. Structural problems (missing header column)
 * throw Schema; rows with unparsable or physically invalid values are
 * counted per reason, never silently dropped. Throws EmptyInput when a file
 * has no valid data rows.
 */
ParsedInputs parse_inputs(const std::string& telemetry_path, const std::string& weather_path,
                          const std::string& meta_path);

/// A maximal on-run, as an index range [first, last] into the room stream.
struct RawSegment {
    size_t first = 0;
    size_t last = 0;
};

struct SegmentOptions {
    bool cooling_only = false;  // default keeps dehumidifying segments
};

/**
 * Extracts raw segments: maximal runs of status=on in cooling/dehumidifying
 * mode. A telemetry hole longer than kGapSplitS inside a run splits it; a
 * mode change to 'other' ends the run; cooling<->dehumidifying changes keep
 * the run intact.
 */
std::vector<RawSegment> extract_segments(const std::vector<TelemetryRecord>& room_stream,
                                         const SegmentOptions& opts = {});

/**
 * Segment features: sample-and-hold time-weighted means over the window for
 * power, set point, indoor temperature and the weather factors (weather is
 * joined by nearest record at each telemetry timestamp); T_ri is the first
 * indoor reading. Throws NoWeatherCoverage when no weather record lies
 * within kWeatherToleranceS of the window.
 */
OperationSegment compute_segment_features(const std::vector<TelemetryRecord>& room_stream,
                                          const RawSegment& raw,
                                          const std::vector<WeatherRecord>& weather);

struct FilterOutcome {
    std::vector<OperationSegment> kept;
    int64_t rejected_duration = 0;
    int64_t rejected_invalid_factor = 0;
    int64_t rejected_low_power = 0;
};

/// Keeps segments with duration in range and finite, physically valid factors.
FilterOutcome filter_segments(const std::vector<OperationSegment>& segments,
                              const FilterConfig& cfg);

/// On-intervals (any mode) of one room, for multi-split exclusivity checks.
struct OnInterval {
    Timestamp start = 0;
    Timestamp end = 0;  // start == end for a trailing single on-record
};

std::vector<OnInterval> on_intervals(const std::vector<TelemetryRecord>& room_stream);

struct MultisplitInput {
    std::string room_id;
    std::string compressor_id;  // empty = single-split
    std::vector<OnInterval> intervals;
};

/**
 * When cfg.exclusive_multisplit is set, drops segments during which any
 * sibling indoor unit on the same compressor was on. Touching a window
 * boundary with zero overlap does not drop. Throws MissingCompressorId when
 * the flag is set but no room carries a compressor id.
 */
std::vector<OperationSegment> apply_multisplit_exclusion(
    const std::vector<OperationSegment>& segments, const std::string& room_id,
    const std::vector<MultisplitInput>& fleet, const FilterConfig& cfg,
    int64_t* dropped = nullptr);

struct DroppedRoom {
    std::string room_id;
    size_t n_seg = 0;
    std::string reason;
};

/**
 * Final room-level filter: rooms with n_seg >= cfg.n_seg_min and known area
 * survive. Throws NoQualifiedRooms when nothing survives.
 */
std::vector<RoomDataset> filter_rooms(
    const std::map<std::string, std::vector<OperationSegment>>& per_room,
    const std::vector<RoomMeta>& rooms, const FilterConfig& cfg,
    std::vector<DroppedRoom>* dropped = nullptr);

/// Full ingest report for ingest_report.json.
struct IngestReport {
    ParsedInputs counts;  // record-level counts (streams cleared)
    int64_t segments_extracted = 0;
    int64_t segments_no_weather = 0;
    int64_t segments_rejected_duration = 0;
    int64_t segments_rejected_invalid_factor = 0;
    int64_t segments_rejected_low_power = 0;
    int64_t segments_dropped_multisplit = 0;
    int64_t segments_kept = 0;
    std::vector<DroppedRoom> dropped_rooms;
    size_t rooms_kept = 0;
};

/// The whole ingest stage over already-parsed inputs.
std::vector<RoomDataset> run_ingest(const ParsedInputs& inputs, const FilterConfig& cfg,
                                    const SegmentOptions& opts, IngestReport* report = nullptr);

}  // namespace acbench::ingest
