#pragma once

#include <span>
#include <vector>

#include "acbench/rng.hpp"

namespace acbench::residual {

/// epsilon_p = (predicted - actual) / actual, elementwise. Actuals must be > 0.
std::vector<double> percent_residuals(std::span<const double> predicted,
                                      std::span<const double> actual);

/**
 * Gaussian-kernel KDE over a percentage-residual sample. Bandwidth by
 * Silverman's rule h = 0.9 * min(std, IQR/1.34) * n^(-1/5), floored at 1e-4.
 * Immutable once fitted; sampling takes a caller-provided rng stream.
 */
class ResidualModel {
public:
    /// Fits the KDE; needs at least 10 residuals.
    static ResidualModel fit(std::vector<double> sample);

    static ResidualModel from_params(std::vector<double> sample, double bandwidth);

    double pdf(double x) const;

    /// One draw: a uniformly chosen sample point plus h * N(0,1), truncated
    /// below at -1 by resampling (100 attempts, then clamp).
    double sample_one(Rng& rng) const;

    std::vector<double> sample(size_t count, Rng& rng) const;

    double bandwidth() const { return bandwidth_; }
    const std::vector<double>& points() const { return sample_; }

private:
    std::vector<double> sample_;
    double bandwidth_ = 1e-4;
};

}  // namespace acbench::residual
