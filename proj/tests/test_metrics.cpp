#include <doctest.h>

#include <cmath>
#include <vector>

#include "acbench/errors.hpp"
#include "acbench/metrics.hpp"
#include "acbench/rng.hpp"

using namespace acbench;

namespace {

// Independent brute-force oracles, written first and kept deliberately
// separate from the library implementations.
double oracle_mape(const std::vector<double>& yh, const std::vector<double>& y) {
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += std::fabs((yh[i] - y[i]) / y[i]);
    return acc * 100.0 / static_cast<double>(y.size());
}

double oracle_mae(const std::vector<double>& yh, const std::vector<double>& y) {
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += std::fabs(yh[i] - y[i]);
    return acc / static_cast<double>(y.size());
}

double oracle_rmse(const std::vector<double>& yh, const std::vector<double>& y) {
    double acc = 0;
    for (size_t i = 0; i < y.size(); ++i) acc += (yh[i] - y[i]) * (yh[i] - y[i]);
    return std::sqrt(acc / static_cast<double>(y.size()));
}

}  // namespace

TEST_CASE("mape hand examples") {
    CHECK(metrics::mape(std::vector<double>{100, 200}, std::vector<double>{100, 200}) ==
          doctest::Approx(0.0));
    CHECK(metrics::mape(std::vector<double>{110, 90}, std::vector<double>{100, 100}) ==
          doctest::Approx(10.0));
    CHECK(metrics::mape(std::vector<double>{50}, std::vector<double>{100}) ==
          doctest::Approx(50.0));
}

TEST_CASE("mape rejects nonpositive actuals") {
    CHECK_THROWS_AS(metrics::mape(std::vector<double>{1.0}, std::vector<double>{0.0}), Error);
    CHECK_THROWS_AS(metrics::mape(std::vector<double>{1.0}, std::vector<double>{-2.0}), Error);
}

TEST_CASE("mae / rmse hand examples") {
    const std::vector<double> y{100, 100};
    CHECK(metrics::mae(std::vector<double>{110, 90}, y) == doctest::Approx(10.0));
    CHECK(metrics::rmse(std::vector<double>{110, 90}, y) == doctest::Approx(10.0));
    CHECK(metrics::mae(std::vector<double>{100, 120}, y) == doctest::Approx(10.0));
    CHECK(metrics::rmse(std::vector<double>{100, 120}, y) ==
          doctest::Approx(14.142135623730951));
    CHECK(metrics::mae(y, y) == doctest::Approx(0.0));
    CHECK(metrics::rmse(y, y) == doctest::Approx(0.0));
}

TEST_CASE("metrics match brute-force oracles on random vectors") {
    Rng rng(20240817);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 1 + rng.below(50);
        std::vector<double> y(n), yh(n);
        for (size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform(1.0, 1500.0);
            yh[i] = rng.uniform(0.0, 1500.0);
        }
        CHECK(metrics::mape(yh, y) == doctest::Approx(oracle_mape(yh, y)).epsilon(1e-12));
        CHECK(metrics::mae(yh, y) == doctest::Approx(oracle_mae(yh, y)).epsilon(1e-12));
        CHECK(metrics::rmse(yh, y) == doctest::Approx(oracle_rmse(yh, y)).epsilon(1e-12));
        CHECK(metrics::rmse(yh, y) >= metrics::mae(yh, y));
    }
}

TEST_CASE("mape is scale-invariant") {
    Rng rng(7);
    std::vector<double> y(20), yh(20), yc(20), yhc(20);
    const double c = 7.25;
    for (size_t i = 0; i < y.size(); ++i) {
        y[i] = rng.uniform(1.0, 800.0);
        yh[i] = rng.uniform(0.5, 900.0);
        yc[i] = c * y[i];
        yhc[i] = c * yh[i];
    }
    CHECK(metrics::mape(yhc, yc) == doctest::Approx(metrics::mape(yh, y)).epsilon(1e-12));
}
