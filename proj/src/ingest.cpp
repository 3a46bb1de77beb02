#include "acbench/ingest.hpp"

#include <algorithm>
#include <cmath>

#include "acbench/csv.hpp"
#include "acbench/errors.hpp"

namespace acbench::ingest {

namespace {

std::optional<AcStatus> parse_status(const std::string& s) {
    if (s == "on") return AcStatus::On;
    if (s == "off") return AcStatus::Off;
    return std::nullopt;
}

AcMode parse_mode(const std::string& s) {
    if (s == "cooling") return AcMode::Cooling;
    if (s == "dehumidifying") return AcMode::Dehumidifying;
    return AcMode::Other;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

ParsedInputs parse_inputs(const std::string& telemetry_path, const std::string& weather_path,
                          const std::string& meta_path) {
    ParsedInputs out;

    {
        csv::Reader r(telemetry_path);
        const size_t c_ts = r.require_column("timestamp");
        const size_t c_room = r.require_column("room_id");
        const size_t c_status = r.require_column("status");
        const size_t c_mode = r.require_column("mode");
        const size_t c_set = r.require_column("set_point_c");
        const size_t c_tin = r.require_column("indoor_temp_c");
        const size_t c_pow = r.require_column("power_w");
        const auto c_comp = r.find_column("compressor_id");
        const size_t min_fields = std::max({c_ts, c_room, c_status, c_mode, c_set, c_tin, c_pow}) + 1;

        while (auto row = r.next_row()) {
            ++out.telemetry_rows;
            if (row->size() < min_fields) {
                ++out.telemetry_rejects.malformed;
                continue;
            }
            const auto ts = csv::parse_int((*row)[c_ts]);
            const auto set = csv::parse_double((*row)[c_set]);
            const auto tin = csv::parse_double((*row)[c_tin]);
            const auto pow = csv::parse_double((*row)[c_pow]);
            const auto status = parse_status((*row)[c_status]);
            if (!ts || !set || !tin || !pow || !status || (*row)[c_room].empty()) {
                ++out.telemetry_rejects.malformed;
                continue;
            }
            TelemetryRecord rec;
            rec.timestamp = *ts;
            rec.room_id = (*row)[c_room];
            rec.status = *status;
            rec.mode = parse_mode((*row)[c_mode]);
            rec.set_point_c = *set;
            rec.indoor_temp_c = *tin;
            rec.power_w = *pow;
            if (c_comp && row->size() > *c_comp) rec.compressor_id = (*row)[*c_comp];

            const bool power_ok = finite(rec.power_w) && rec.power_w >= 0.0;
            const bool set_ok = rec.status == AcStatus::Off ||
                                (finite(rec.set_point_c) && rec.set_point_c >= 16.0 &&
                                 rec.set_point_c <= 32.0);
            if (!power_ok || !set_ok || !finite(rec.indoor_temp_c)) {
                ++out.telemetry_rejects.invalid_value;
                continue;
            }
            out.telemetry[rec.room_id].push_back(std::move(rec));
        }
        if (out.telemetry_rows == 0)
            throw Error(ErrorKind::EmptyInput, telemetry_path + ": no data rows");
    }

    // Per-room streams sorted; duplicate timestamps rejected so the streams
    // end up strictly increasing.
    for (auto& [room, stream] : out.telemetry) {
        std::stable_sort(stream.begin(), stream.end(),
                         [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
        std::vector<TelemetryRecord> unique;
        unique.reserve(stream.size());
        for (auto& rec : stream) {
            if (!unique.empty() && unique.back().timestamp == rec.timestamp) {
                ++out.telemetry_rejects.duplicate_timestamp;
                continue;
            }
            unique.push_back(std::move(rec));
        }
        stream = std::move(unique);
    }

    {
        csv::Reader r(weather_path);
        const size_t c_ts = r.require_column("timestamp");
        const size_t c_ta = r.require_column("outdoor_temp_c");
        const size_t c_ha = r.require_column("rel_humidity_pct");
        const size_t c_si = r.require_column("solar_irradiance_wm2");
        const size_t min_fields = std::max({c_ts, c_ta, c_ha, c_si}) + 1;

        while (auto row = r.next_row()) {
            ++out.weather_rows;
            if (row->size() < min_fields) {
                ++out.weather_rejects.malformed;
                continue;
            }
            const auto ts = csv::parse_int((*row)[c_ts]);
            const auto ta = csv::parse_double((*row)[c_ta]);
            const auto ha = csv::parse_double((*row)[c_ha]);
            const auto si = csv::parse_double((*row)[c_si]);
            if (!ts || !ta || !ha || !si) {
                ++out.weather_rejects.malformed;
                continue;
            }
            if (!finite(*ta) || !(*ha > 0.0 && *ha < 100.0) || !(*si >= 0.0) || !finite(*si)) {
                ++out.weather_rejects.invalid_value;
                continue;
            }
            out.weather.push_back({*ts, *ta, *ha, *si});
        }
        if (out.weather_rows == 0)
            throw Error(ErrorKind::EmptyInput, weather_path + ": no data rows");
        std::stable_sort(out.weather.begin(), out.weather.end(),
                         [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    }

    {
        csv::Reader r(meta_path);
        const size_t c_room = r.require_column("room_id");
        const size_t c_area = r.require_column("area_m2");
        const auto c_orient = r.find_column("orientation");

        while (auto row = r.next_row()) {
            ++out.room_rows;
            if (row->size() <= std::max(c_room, c_area)) {
                ++out.room_rejects.malformed;
                continue;
            }
            const auto area = csv::parse_double((*row)[c_area]);
            if (!area || (*row)[c_room].empty()) {
                ++out.room_rejects.malformed;
                continue;
            }
            if (!(*area > 0.0) || !finite(*area)) {
                ++out.room_rejects.invalid_value;
                continue;
            }
            RoomMeta meta;
            meta.room_id = (*row)[c_room];
            meta.area_m2 = *area;
            if (c_orient && row->size() > *c_orient) meta.orientation = (*row)[*c_orient];
            out.rooms.push_back(std::move(meta));
        }
        if (out.room_rows == 0) throw Error(ErrorKind::EmptyInput, meta_path + ": no data rows");
    }

    return out;
}

std::vector<RawSegment> extract_segments(const std::vector<TelemetryRecord>& room_stream,
                                         const SegmentOptions& opts) {
    std::vector<RawSegment> segments;
    std::optional<size_t> run_start;

    const auto in_run = [&](const TelemetryRecord& rec) {
        if (rec.status != AcStatus::On) return false;
        if (rec.mode == AcMode::Other) return false;
        if (opts.cooling_only && rec.mode != AcMode::Cooling) return false;
        return true;
    };

    for (size_t i = 0; i < room_stream.size(); ++i) {
        const bool active = in_run(room_stream[i]);
        if (active && run_start &&
            room_stream[i].timestamp - room_stream[i - 1].timestamp > kGapSplitS) {
            segments.push_back({*run_start, i - 1});
            run_start = i;
            continue;
        }
        if (active && !run_start) run_start = i;
        if (!active && run_start) {
            segments.push_back({*run_start, i - 1});
            run_start.reset();
        }
    }
    if (run_start) segments.push_back({*run_start, room_stream.size() - 1});
    return segments;
}

namespace {

/// Weather value nearest in time to t (ties resolve to the earlier record).
const WeatherRecord& nearest_weather(const std::vector<WeatherRecord>& weather, Timestamp t) {
    const auto it = std::lower_bound(
        weather.begin(), weather.end(), t,
        [](const WeatherRecord& w, Timestamp ts) { return w.timestamp < ts; });
    if (it == weather.begin()) return *it;
    if (it == weather.end()) return *(it - 1);
    const auto prev = it - 1;
    return (t - prev->timestamp) <= (it->timestamp - t) ? *prev : *it;
}

}  // namespace

OperationSegment compute_segment_features(const std::vector<TelemetryRecord>& room_stream,
                                          const RawSegment& raw,
                                          const std::vector<WeatherRecord>& weather) {
    const Timestamp start = room_stream[raw.first].timestamp;
    const Timestamp end = room_stream[raw.last].timestamp;

    const bool covered =
        !weather.empty() &&
        std::any_of(weather.begin(), weather.end(), [&](const WeatherRecord& w) {
            return w.timestamp >= start - kWeatherToleranceS &&
                   w.timestamp <= end + kWeatherToleranceS;
        });
    if (!covered)
        throw Error(ErrorKind::NoWeatherCoverage,
                    room_stream[raw.first].room_id + ": no weather within 15 min of segment");

    OperationSegment seg;
    seg.room_id = room_stream[raw.first].room_id;
    seg.start = start;
    seg.end = end;
    seg.t_seg_s = static_cast<double>(end - start);
    seg.t_ri_c = room_stream[raw.first].indoor_temp_c;

    // Sample-and-hold integration: each record's value holds until the next
    // record; the final record carries zero weight. Weather is evaluated at
    // telemetry timestamps via nearest-record join, then weighted the same way.
    double sum_p = 0, sum_set = 0, sum_tr = 0, sum_ta = 0, sum_ha = 0, sum_si = 0;
    for (size_t i = raw.first; i < raw.last; ++i) {
        const double w = static_cast<double>(room_stream[i + 1].timestamp -
                                             room_stream[i].timestamp);
        const auto& wx = nearest_weather(weather, room_stream[i].timestamp);
        sum_p += w * room_stream[i].power_w;
        sum_set += w * room_stream[i].set_point_c;
        sum_tr += w * room_stream[i].indoor_temp_c;
        sum_ta += w * wx.outdoor_temp_c;
        sum_ha += w * wx.rel_humidity_pct;
        sum_si += w * wx.solar_irradiance_wm2;
    }
    if (seg.t_seg_s > 0) {
        seg.p_ac_mean_w = sum_p / seg.t_seg_s;
        seg.t_set_mean_c = sum_set / seg.t_seg_s;
        seg.t_r_mean_c = sum_tr / seg.t_seg_s;
        seg.t_a_mean_c = sum_ta / seg.t_seg_s;
        seg.h_a_mean_pct = sum_ha / seg.t_seg_s;
        seg.p_si_mean_wm2 = sum_si / seg.t_seg_s;
    } else {
        // Single-record run: zero-duration window, dropped by the duration
        // filter downstream. Point values keep the record conserved.
        const auto& rec = room_stream[raw.first];
        const auto& wx = nearest_weather(weather, rec.timestamp);
        seg.p_ac_mean_w = rec.power_w;
        seg.t_set_mean_c = rec.set_point_c;
        seg.t_r_mean_c = rec.indoor_temp_c;
        seg.t_a_mean_c = wx.outdoor_temp_c;
        seg.h_a_mean_pct = wx.rel_humidity_pct;
        seg.p_si_mean_wm2 = wx.solar_irradiance_wm2;
    }
    return seg;
}

FilterOutcome filter_segments(const std::vector<OperationSegment>& segments,
                              const FilterConfig& cfg) {
    FilterOutcome out;
    for (const auto& seg : segments) {
        if (!(seg.t_seg_s >= cfg.t_seg_min_s && seg.t_seg_s <= cfg.t_seg_max_s)) {
            ++out.rejected_duration;
            continue;
        }
        const auto f = seg.features();
        const bool factors_ok =
            std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); }) &&
            seg.h_a_mean_pct > 0.0 && seg.h_a_mean_pct < 100.0 && seg.p_si_mean_wm2 >= 0.0 &&
            std::isfinite(seg.p_ac_mean_w) && seg.p_ac_mean_w >= 0.0;
        if (!factors_ok) {
            ++out.rejected_invalid_factor;
            continue;
        }
        if (seg.p_ac_mean_w < kMinValidEpiW) {
            ++out.rejected_low_power;
            continue;
        }
        out.kept.push_back(seg);
    }
    return out;
}

std::vector<OnInterval> on_intervals(const std::vector<TelemetryRecord>& room_stream) {
    std::vector<OnInterval> out;
    for (size_t i = 0; i < room_stream.size(); ++i) {
        if (room_stream[i].status != AcStatus::On) continue;
        const Timestamp a = room_stream[i].timestamp;
        const Timestamp b =
            (i + 1 < room_stream.size()) ? room_stream[i + 1].timestamp : a;
        if (!out.empty() && out.back().end >= a) {
            out.back().end = std::max(out.back().end, b);
        } else {
            out.push_back({a, b});
        }
    }
    return out;
}

std::vector<OperationSegment> apply_multisplit_exclusion(
    const std::vector<OperationSegment>& segments, const std::string& room_id,
    const std::vector<MultisplitInput>& fleet, const FilterConfig& cfg, int64_t* dropped) {
    if (dropped) *dropped = 0;
    if (!cfg.exclusive_multisplit) return segments;

    const bool any_compressor_id =
        std::any_of(fleet.begin(), fleet.end(),
                    [](const MultisplitInput& m) { return !m.compressor_id.empty(); });
    if (!any_compressor_id)
        throw Error(ErrorKind::MissingCompressorId,
                    "exclusive_multisplit set but no compressor ids present");

    std::string own_compressor;
    for (const auto& m : fleet)
        if (m.room_id == room_id) own_compressor = m.compressor_id;
    if (own_compressor.empty()) return segments;  // single-split room, no siblings

    std::vector<const MultisplitInput*> siblings;
    for (const auto& m : fleet)
        if (m.room_id != room_id && m.compressor_id == own_compressor) siblings.push_back(&m);
    if (siblings.empty()) return segments;

    // Positive-measure overlap drops a segment; boundary touching does not,
    // except a sibling's point-interval strictly inside the window.
    const auto sibling_on_during = [&](Timestamp start, Timestamp end) {
        for (const auto* sib : siblings) {
            for (const auto& iv : sib->intervals) {
                if (iv.start == iv.end) {
                    if (iv.start >= start && iv.start <= end) return true;
                } else if (std::max(iv.start, start) < std::min(iv.end, end)) {
                    return true;
                }
            }
        }
        return false;
    };

    std::vector<OperationSegment> kept;
    kept.reserve(segments.size());
    for (const auto& seg : segments) {
        if (sibling_on_during(seg.start, seg.end)) {
            if (dropped) ++(*dropped);
        } else {
            kept.push_back(seg);
        }
    }
    return kept;
}

std::vector<RoomDataset> filter_rooms(
    const std::map<std::string, std::vector<OperationSegment>>& per_room,
    const std::vector<RoomMeta>& rooms, const FilterConfig& cfg,
    std::vector<DroppedRoom>* dropped) {
    std::map<std::string, const RoomMeta*> meta_by_id;
    for (const auto& meta : rooms) meta_by_id[meta.room_id] = &meta;

    std::vector<RoomDataset> out;
    for (const auto& [room_id, segments] : per_room) {
        const auto meta = meta_by_id.find(room_id);
        if (meta == meta_by_id.end()) {
            if (dropped) dropped->push_back({room_id, segments.size(), "missing_meta"});
            continue;
        }
        if (segments.size() < static_cast<size_t>(cfg.n_seg_min)) {
            if (dropped) dropped->push_back({room_id, segments.size(), "too_few_segments"});
            continue;
        }
        RoomDataset ds;
        ds.room_id = room_id;
        ds.area_m2 = meta->second->area_m2;
        ds.segments = segments;
        out.push_back(std::move(ds));
    }
    if (out.empty())
        throw Error(ErrorKind::NoQualifiedRooms, "no room meets n_seg_min");
    return out;
}

std::vector<RoomDataset> run_ingest(const ParsedInputs& inputs, const FilterConfig& cfg,
                                    const SegmentOptions& opts, IngestReport* report) {
    IngestReport rep;
    rep.counts = inputs;
    rep.counts.telemetry.clear();
    rep.counts.weather.clear();

    std::vector<MultisplitInput> fleet;
    if (cfg.exclusive_multisplit) {
        for (const auto& [room_id, stream] : inputs.telemetry) {
            MultisplitInput m;
            m.room_id = room_id;
            for (const auto& rec : stream)
                if (!rec.compressor_id.empty()) m.compressor_id = rec.compressor_id;
            m.intervals = on_intervals(stream);
            fleet.push_back(std::move(m));
        }
    }

    std::map<std::string, std::vector<OperationSegment>> per_room;
    for (const auto& [room_id, stream] : inputs.telemetry) {
        const auto raws = extract_segments(stream, opts);
        rep.segments_extracted += static_cast<int64_t>(raws.size());

        std::vector<OperationSegment> features;
        for (const auto& raw : raws) {
            try {
                features.push_back(compute_segment_features(stream, raw, inputs.weather));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NoWeatherCoverage) throw;
                ++rep.segments_no_weather;
            }
        }

        const auto filtered = filter_segments(features, cfg);
        rep.segments_rejected_duration += filtered.rejected_duration;
        rep.segments_rejected_invalid_factor += filtered.rejected_invalid_factor;
        rep.segments_rejected_low_power += filtered.rejected_low_power;

        int64_t multisplit_dropped = 0;
        auto kept = apply_multisplit_exclusion(filtered.kept, room_id, fleet, cfg,
                                               &multisplit_dropped);
        rep.segments_dropped_multisplit += multisplit_dropped;
        rep.segments_kept += static_cast<int64_t>(kept.size());
        if (!kept.empty()) per_room[room_id] = std::move(kept);
    }

    auto datasets = filter_rooms(per_room, inputs.rooms, cfg, &rep.dropped_rooms);
    // Rooms that produced zero valid segments still show up in the report.
    for (const auto& [room_id, stream] : inputs.telemetry) {
        if (!per_room.count(room_id))
            rep.dropped_rooms.push_back({room_id, 0, "too_few_segments"});
    }
    rep.rooms_kept = datasets.size();
    if (report) *report = std::move(rep);
    return datasets;
}

}  // namespace acbench::ingest
