#include "acbench/residual.hpp"

#include <algorithm>
#include <cmath>

#include "acbench/conditions.hpp"
#include "acbench/errors.hpp"

namespace acbench::residual {

std::vector<double> percent_residuals(std::span<const double> predicted,
                                      std::span<const double> actual) {
    if (predicted.size() != actual.size())
        throw Error(ErrorKind::SampleSizeMismatch, "percent_residuals length mismatch");
    std::vector<double> out(predicted.size());
    for (size_t i = 0; i < actual.size(); ++i) {
        if (!(actual[i] > 0.0))
            throw Error(ErrorKind::ZeroActual, "percent residual needs actual > 0");
        out[i] = (predicted[i] - actual[i]) / actual[i];
    }
    return out;
}

ResidualModel ResidualModel::fit(std::vector<double> sample) {
    if (sample.size() < 10)
        throw Error(ErrorKind::TooFewResiduals, "KDE needs at least 10 residuals");

    const double n = static_cast<double>(sample.size());
    double mean = 0.0;
    for (const double v : sample) mean += v;
    mean /= n;
    double ss = 0.0;
    for (const double v : sample) ss += (v - mean) * (v - mean);
    const double std = std::sqrt(ss / (n - 1.0));
    const double iqr =
        conditions::percentile(sample, 75.0) - conditions::percentile(sample, 25.0);

    double h = 0.9 * std::min(std, iqr / 1.34) * std::pow(n, -0.2);
    if (!(h >= 1e-4)) h = 1e-4;  // floor covers degenerate spreads

    ResidualModel m;
    m.sample_ = std::move(sample);
    m.bandwidth_ = h;
    return m;
}

ResidualModel ResidualModel::from_params(std::vector<double> sample, double bandwidth) {
    ResidualModel m;
    m.sample_ = std::move(sample);
    m.bandwidth_ = bandwidth > 0 ? bandwidth : 1e-4;
    return m;
}

double ResidualModel::pdf(double x) const {
    constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
    double sum = 0.0;
    for (const double e : sample_) {
        const double u = (x - e) / bandwidth_;
        sum += std::exp(-0.5 * u * u);
    }
    return kInvSqrt2Pi * sum / (static_cast<double>(sample_.size()) * bandwidth_);
}

double ResidualModel::sample_one(Rng& rng) const {
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double base = sample_[static_cast<size_t>(rng.below(sample_.size()))];
        const double draw = base + bandwidth_ * rng.normal();
        if (draw >= -1.0) return draw;  // power stays nonnegative downstream
    }
    return -1.0;
}

std::vector<double> ResidualModel::sample(size_t count, Rng& rng) const {
    std::vector<double> out(count);
    for (auto& v : out) v = sample_one(rng);
    return out;
}

}  // namespace acbench::residual
