#pragma once

#include <span>

namespace acbench::metrics {

/// Mean absolute percentage error, in percent. All actuals must be > 0.
double mape(std::span<const double> predicted, std::span<const double> actual);

/// Mean absolute error (same unit as inputs).
double mae(std::span<const double> predicted, std::span<const double> actual);

/// Root mean squared error. Always >= MAE.
double rmse(std::span<const double> predicted, std::span<const double> actual);

}  // namespace acbench::metrics
