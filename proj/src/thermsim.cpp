#include "acbench/thermsim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include "acbench/errors.hpp"

namespace acbench::thermsim {

double segment_power(const RoomPhysical& room, const SegmentScenario& scen) {
    const double thermal_mass = PhysicalConstants::specific_heat_air *
                                PhysicalConstants::density_air * room.height_m * room.area_m2;
    const double pulldown = -(thermal_mass / scen.t_seg_s) * (scen.t_set_mean_c - scen.t_ri_c);
    const double wall_gain = room.wall_conductance() * (scen.t_a_mean_c - scen.t_r_mean_c);
    const double solar_gain = room.solar_to_heat * scen.p_si_mean_wm2;
    const double p = (pulldown + wall_gain + solar_gain + room.human_heat_w) / room.eer;
    return std::max(0.0, p);
}

namespace {

// Minimal TOML-subset reader: [section] headers, key = value lines, where a
// value is a number, a bare/quoted string, or [a, b, c] of numbers.
struct TomlLite {
    struct Entry {
        std::string scalar;
        std::vector<double> list;
        bool is_list = false;
    };
    std::map<std::string, Entry> values;  // "section.key"

    static TomlLite parse(const std::string& path);

    bool has(const std::string& key) const { return values.count(key) > 0; }

    double number(const std::string& key, double fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        if (it->second.is_list)
            throw Error(ErrorKind::InvalidSpec, key + ": expected a number, got a list");
        try {
            return std::stod(it->second.scalar);
        } catch (...) {
            throw Error(ErrorKind::InvalidSpec, key + ": not a number: " + it->second.scalar);
        }
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        if (!it->second.is_list)
            throw Error(ErrorKind::InvalidSpec, key + ": expected a list");
        return it->second.list;
    }
};

std::string strip(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

TomlLite TomlLite::parse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open fleet spec " + path);
    TomlLite out;
    std::string section;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = strip(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::InvalidSpec, path + ": bad line '" + line + "'");
        const std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        Entry entry;
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']')
                throw Error(ErrorKind::InvalidSpec, key + ": unterminated list");
            entry.is_list = true;
            std::string body = value.substr(1, value.size() - 2);
            std::string item;
            for (char c : body + ",") {
                if (c == ',') {
                    item = strip(item);
                    if (!item.empty()) {
                        try {
                            entry.list.push_back(std::stod(item));
                        } catch (...) {
                            throw Error(ErrorKind::InvalidSpec, key + ": bad list item " + item);
                        }
                    }
                    item.clear();
                } else {
                    item.push_back(c);
                }
            }
        } else {
            if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
                value.back() == value.front())
                value = value.substr(1, value.size() - 2);
            entry.scalar = value;
        }
        out.values[(section.empty() ? key : section + "." + key)] = std::move(entry);
    }
    return out;
}

}  // namespace

FleetSpec load_fleet_spec(const std::string& path) {
    const TomlLite toml = TomlLite::parse(path);
    FleetSpec spec;
    spec.area_levels = toml.numbers("rooms.area_levels", spec.area_levels);
    spec.rooms_per_level = static_cast<int>(toml.number("rooms.rooms_per_level", spec.rooms_per_level));
    spec.eer_min = toml.number("rooms.eer_min", spec.eer_min);
    spec.eer_max = toml.number("rooms.eer_max", spec.eer_max);
    spec.room_height_m = toml.number("rooms.room_height_m", spec.room_height_m);
    spec.wall_thickness_m = toml.number("rooms.wall_thickness_m", spec.wall_thickness_m);
    spec.wall_conductivity = toml.number("rooms.wall_conductivity", spec.wall_conductivity);
    spec.solar_to_heat = toml.number("rooms.c_s2h", spec.solar_to_heat);
    spec.human_heat_w = toml.number("rooms.q_hum_w", spec.human_heat_w);

    spec.segments_per_room =
        static_cast<int>(toml.number("scenarios.segments_per_room", spec.segments_per_room));
    spec.telemetry_cadence_s =
        static_cast<int>(toml.number("scenarios.telemetry_cadence_s", spec.telemetry_cadence_s));
    spec.weather_cadence_s =
        static_cast<int>(toml.number("scenarios.weather_cadence_s", spec.weather_cadence_s));
    spec.setpoint_prefs_c = toml.numbers("scenarios.setpoint_prefs_c", spec.setpoint_prefs_c);
    spec.setpoint_jitter_c = toml.number("scenarios.setpoint_jitter_c", spec.setpoint_jitter_c);
    spec.t_r_offset_c = toml.number("scenarios.t_r_offset_c", spec.t_r_offset_c);
    spec.t_r_jitter_c = toml.number("scenarios.t_r_jitter_c", spec.t_r_jitter_c);
    spec.duration_mean_s = toml.number("scenarios.duration_mean_s", spec.duration_mean_s);
    spec.duration_jitter = toml.number("scenarios.duration_jitter", spec.duration_jitter);
    spec.ambient_base_c = toml.number("scenarios.ambient_base_c", spec.ambient_base_c);
    spec.ambient_daily_amp_c =
        toml.number("scenarios.ambient_daily_amp_c", spec.ambient_daily_amp_c);
    spec.min_power_w = toml.number("scenarios.min_power_w", spec.min_power_w);

    spec.sigma = toml.number("noise.sigma", spec.sigma);
    spec.humidity_coupling = toml.number("noise.humidity_coupling", spec.humidity_coupling);
    spec.seed = static_cast<uint64_t>(toml.number("seed.value", static_cast<double>(spec.seed)));

    if (spec.area_levels.empty() || spec.rooms_per_level < 1)
        throw Error(ErrorKind::InvalidSpec, "fleet spec needs at least one room");
    if (spec.eer_min <= 0 || spec.eer_max < spec.eer_min)
        throw Error(ErrorKind::InvalidSpec, "fleet spec EER range invalid");
    if (spec.segments_per_room < 1 || spec.telemetry_cadence_s < 1 || spec.weather_cadence_s < 1)
        throw Error(ErrorKind::InvalidSpec, "fleet spec counts/cadences must be positive");
    if (spec.sigma < 0)
        throw Error(ErrorKind::InvalidSpec, "fleet spec noise sigma must be >= 0");
    return spec;
}

}  // namespace acbench::thermsim
