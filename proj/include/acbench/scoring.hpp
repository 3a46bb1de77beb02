#pragma once

#include <string>
#include <vector>

#include "acbench/regressors.hpp"
#include "acbench/residual.hpp"
#include "acbench/rng.hpp"
#include "acbench/types.hpp"

namespace acbench::scoring {

/// Stochastic draws floor here before the ratio scoring so the score stays
/// in (0, 1]; 1 W is below any plausible AC draw.
inline constexpr double kScoreFloorW = 1.0;

struct StochasticEpi {
    std::string room_id;
    double deterministic_w = 0.0;
    std::vector<double> draws_w;  // size S, all >= 0
};

struct ScoreReport {
    std::string room_id;
    int cluster_id = 0;
    std::vector<double> eta;  // size S, each in (0, 1]
    double median = 0.0;
    double mean = 0.0;
    double p5 = 0.0;
    double p95 = 0.0;
    double share_of_draws_best = 0.0;
    bool comparative = true;  // false for singleton clusters
};

/// Model prediction at the uniform conditions (already clamped at 0).
double deterministic_epi(const regress::TrainedPredictor& predictor,
                         const FeatureVector& uniform);

/// S draws of det * (1 + eps), eps from the residual model (eps >= -1).
StochasticEpi stochastic_epi(const std::string& room_id, double deterministic_w,
                             const residual::ResidualModel& residuals, size_t sample_size,
                             Rng& rng);

/**
 * Per draw, the cluster benchmark is the minimum room draw and each room
 * scores eta = min / own (draws floored at kScoreFloorW first). Every draw
 * has at least one room at exactly 1. Singleton clusters score a constant 1
 * flagged non-comparative. Throws SampleSizeMismatch on ragged samples.
 */
std::vector<ScoreReport> benchmark_scores(int cluster_id,
                                          const std::vector<StochasticEpi>& cluster);

struct SweepPoint {
    double factor_value = 0.0;
    double predicted_w = 0.0;
};

/**
 * Predictions with one factor swept over a grid, the other six pinned at
 * the uniform values. Throws UnknownFactor for a bad name; points outside
 * [warn_lo, warn_hi] (when given) are flagged via *outside_range.
 */
std::vector<SweepPoint> factor_sweep(const regress::TrainedPredictor& predictor,
                                     const FeatureVector& uniform,
                                     const std::string& factor_name,
                                     const std::vector<double>& grid,
                                     const double* warn_lo = nullptr,
                                     const double* warn_hi = nullptr,
                                     int* outside_range = nullptr);

}  // namespace acbench::scoring
