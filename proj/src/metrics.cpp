#include "acbench/metrics.hpp"

#include <cmath>

#include "acbench/errors.hpp"

namespace acbench::metrics {

namespace {
void check_sizes(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size())
        throw Error(ErrorKind::SampleSizeMismatch, "metric input lengths differ");
    if (predicted.empty())
        throw Error(ErrorKind::EmptySample, "metric on empty vectors");
}
}  // namespace

double mape(std::span<const double> predicted, std::span<const double> actual) {
    check_sizes(predicted, actual);
    double sum = 0.0;
    for (size_t i = 0; i < actual.size(); ++i) {
        if (!(actual[i] > 0.0))
            throw Error(ErrorKind::ZeroActual, "MAPE needs strictly positive actuals");
        sum += std::abs(predicted[i] - actual[i]) / actual[i];
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

double mae(std::span<const double> predicted, std::span<const double> actual) {
    check_sizes(predicted, actual);
    double sum = 0.0;
    for (size_t i = 0; i < actual.size(); ++i) sum += std::abs(predicted[i] - actual[i]);
    return sum / static_cast<double>(actual.size());
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
    check_sizes(predicted, actual);
    double sum = 0.0;
    for (size_t i = 0; i < actual.size(); ++i) {
        const double d = predicted[i] - actual[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

}  // namespace acbench::metrics
