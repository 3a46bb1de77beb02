#include "acbench/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acbench/errors.hpp"

namespace acbench::conditions {

double percentile(std::span<const double> sample, double p) {
    if (sample.empty()) throw Error(ErrorKind::EmptySample, "percentile of empty sample");
    if (!(p >= 0.0 && p <= 100.0))
        throw Error(ErrorKind::InvalidSpec, "percentile p outside [0, 100]");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = (static_cast<double>(sorted.size()) - 1.0) * p / 100.0;
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = static_cast<size_t>(std::ceil(pos));
    if (lo == hi) return sorted[lo];
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

const char* tier_name(Tier t) {
    switch (t) {
        case Tier::A: return "a";
        case Tier::B: return "b";
        case Tier::C: return "c";
        case Tier::D: return "d";
    }
    return "?";
}

std::pair<double, double> tier_bounds(std::span<const double> sample, Tier t) {
    switch (t) {
        case Tier::A: return {percentile(sample, 40), percentile(sample, 60)};
        case Tier::B: return {percentile(sample, 25), percentile(sample, 75)};
        case Tier::C: return {percentile(sample, 10), percentile(sample, 90)};
        case Tier::D: return {percentile(sample, 0), percentile(sample, 100)};
    }
    return {0, 0};
}

TierRange common_range(const std::vector<std::vector<double>>& per_room_samples) {
    if (per_room_samples.empty())
        throw Error(ErrorKind::EmptySample, "common_range over zero rooms");
    for (const auto& s : per_room_samples)
        if (s.empty()) throw Error(ErrorKind::EmptySample, "common_range with empty room sample");

    for (const Tier t : {Tier::A, Tier::B, Tier::C, Tier::D}) {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& sample : per_room_samples) {
            const auto [a, b] = tier_bounds(sample, t);
            lo = std::max(lo, a);
            hi = std::min(hi, b);
        }
        if (lo <= hi) return {t, lo, hi};
    }
    throw Error(ErrorKind::NoOverlap, "no tier yields an overlap across rooms");
}

UniformConditions uniform_conditions(int cluster_id,
                                     const std::vector<const RoomDataset*>& members) {
    if (members.empty())
        throw Error(ErrorKind::EmptySample, "uniform_conditions over empty cluster");

    UniformConditions out;
    out.cluster_id = cluster_id;
    out.room_tables.resize(members.size());

    for (int f = 0; f < kNumFactors; ++f) {
        std::vector<std::vector<double>> samples;
        samples.reserve(members.size());
        for (const auto* room : members) samples.push_back(room->factor_history(f));

        const auto range = common_range(samples);
        out.factors[static_cast<size_t>(f)] = {range, 0.5 * (range.lo + range.hi)};

        static constexpr double kQs[9] = {0, 10, 25, 40, 50, 60, 75, 90, 100};
        for (size_t r = 0; r < members.size(); ++r) {
            auto& table = out.room_tables[r][static_cast<size_t>(f)];
            table.room_id = members[r]->room_id;
            for (size_t q = 0; q < 9; ++q) table.quantiles[q] = percentile(samples[r], kQs[q]);
        }
    }
    return out;
}

}  // namespace acbench::conditions
