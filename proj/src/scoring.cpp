#include "acbench/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acbench/conditions.hpp"
#include "acbench/errors.hpp"

namespace acbench::scoring {

double deterministic_epi(const regress::TrainedPredictor& predictor,
                         const FeatureVector& uniform) {
    for (const double v : uniform)
        if (!std::isfinite(v))
            throw Error(ErrorKind::Numeric, "uniform conditions contain a non-finite value");
    return predictor.predict(uniform);
}

StochasticEpi stochastic_epi(const std::string& room_id, double deterministic_w,
                             const residual::ResidualModel& residuals, size_t sample_size,
                             Rng& rng) {
    if (sample_size < 1) throw Error(ErrorKind::InvalidSpec, "sample size must be >= 1");
    if (!(deterministic_w >= 0.0))
        throw Error(ErrorKind::Numeric, "deterministic EPI must be >= 0");

    StochasticEpi out;
    out.room_id = room_id;
    out.deterministic_w = deterministic_w;
    out.draws_w.resize(sample_size);
    for (auto& draw : out.draws_w)
        draw = deterministic_w * (1.0 + residuals.sample_one(rng));
    return out;
}

std::vector<ScoreReport> benchmark_scores(int cluster_id,
                                          const std::vector<StochasticEpi>& cluster) {
    if (cluster.empty()) throw Error(ErrorKind::EmptySample, "benchmark_scores: empty cluster");
    const size_t s_count = cluster.front().draws_w.size();
    for (const auto& room : cluster)
        if (room.draws_w.size() != s_count)
            throw Error(ErrorKind::SampleSizeMismatch, "rooms disagree on sample size");

    std::vector<ScoreReport> reports(cluster.size());
    for (size_t r = 0; r < cluster.size(); ++r) {
        reports[r].room_id = cluster[r].room_id;
        reports[r].cluster_id = cluster_id;
        reports[r].eta.assign(s_count, 1.0);
        reports[r].comparative = cluster.size() > 1;
    }

    if (cluster.size() > 1) {
        std::vector<double> floored(cluster.size());
        std::vector<int64_t> best_counts(cluster.size(), 0);
        for (size_t s = 0; s < s_count; ++s) {
            double benchmark = std::numeric_limits<double>::infinity();
            for (size_t r = 0; r < cluster.size(); ++r) {
                floored[r] = std::max(cluster[r].draws_w[s], kScoreFloorW);
                benchmark = std::min(benchmark, floored[r]);
            }
            for (size_t r = 0; r < cluster.size(); ++r) {
                reports[r].eta[s] = benchmark / floored[r];
                if (floored[r] == benchmark) ++best_counts[r];  // ties all count as best
            }
        }
        for (size_t r = 0; r < cluster.size(); ++r)
            reports[r].share_of_draws_best =
                static_cast<double>(best_counts[r]) / static_cast<double>(s_count);
    } else {
        reports[0].share_of_draws_best = 1.0;
    }

    for (auto& rep : reports) {
        rep.median = conditions::percentile(rep.eta, 50);
        rep.p5 = conditions::percentile(rep.eta, 5);
        rep.p95 = conditions::percentile(rep.eta, 95);
        double sum = 0.0;
        for (const double e : rep.eta) sum += e;
        rep.mean = sum / static_cast<double>(rep.eta.size());
    }
    return reports;
}

std::vector<SweepPoint> factor_sweep(const regress::TrainedPredictor& predictor,
                                     const FeatureVector& uniform,
                                     const std::string& factor_name,
                                     const std::vector<double>& grid, const double* warn_lo,
                                     const double* warn_hi, int* outside_range) {
    const int factor = factor_index(factor_name);
    if (factor < 0)
        throw Error(ErrorKind::UnknownFactor, "unknown factor '" + factor_name + "'");

    if (outside_range) *outside_range = 0;
    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    FeatureVector x = uniform;
    for (const double value : grid) {
        x[static_cast<size_t>(factor)] = value;
        points.push_back({value, predictor.predict(x)});
        if (outside_range && ((warn_lo && value < *warn_lo) || (warn_hi && value > *warn_hi)))
            ++(*outside_range);
    }
    return points;
}

}  // namespace acbench::scoring
