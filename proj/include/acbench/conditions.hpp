#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "acbench/types.hpp"

namespace acbench::conditions {

/**
 * Linear-interpolation percentile (project-wide convention): the value at
 * rank position (n-1) * p/100 of the sorted sample, interpolated between
 * neighbors. percentile(s, 0) = min, percentile(s, 100) = max.
 */
double percentile(std::span<const double> sample, double p);

/// The four nested percentile ranges tried when intersecting rooms.
enum class Tier : int { A = 0, B = 1, C = 2, D = 3 };

const char* tier_name(Tier t);

struct TierRange {
    Tier tier = Tier::A;
    double lo = 0.0;
    double hi = 0.0;
};

/// [P40,P60] / [P25,P75] / [P10,P90] / [min,max] of one sample.
std::pair<double, double> tier_bounds(std::span<const double> sample, Tier t);

/**
 * Narrowest tier whose per-room ranges all intersect (closed intervals;
 * touching endpoints count), with the intersection itself. A single room
 * yields its own tier-(a) range. Throws NoOverlap when even [min,max]
 * ranges are disjoint.
 */
TierRange common_range(const std::vector<std::vector<double>>& per_room_samples);

struct FactorConditions {
    TierRange range;
    double uniform = 0.0;  // (lo + hi) / 2
};

struct RoomPercentiles {
    std::string room_id;
    // min, p10, p25, p40, p50, p60, p75, p90, max
    std::array<double, 9> quantiles{};
};

struct UniformConditions {
    int cluster_id = 0;
    std::array<FactorConditions, kNumFactors> factors;
    std::vector<std::array<RoomPercentiles, kNumFactors>> room_tables;

    FeatureVector uniform_vector() const {
        FeatureVector v;
        for (size_t f = 0; f < kNumFactors; ++f) v[f] = factors[f].uniform;
        return v;
    }
};

/// Factor-by-factor uniform values for the rooms of one cluster.
UniformConditions uniform_conditions(int cluster_id,
                                     const std::vector<const RoomDataset*>& members);

}  // namespace acbench::conditions
