#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "acbench/errors.hpp"
#include "acbench/residual.hpp"
#include "acbench/rng.hpp"

using namespace acbench;

namespace {

// Trapezoid quadrature of the fitted pdf, the unit-mass oracle.
double integrate_pdf(const residual::ResidualModel& m, double lo, double hi, int steps) {
    const double dx = (hi - lo) / steps;
    double acc = 0.5 * (m.pdf(lo) + m.pdf(hi));
    for (int i = 1; i < steps; ++i) acc += m.pdf(lo + i * dx);
    return acc * dx;
}

// Analytic mixture CDF of the Gaussian-kernel KDE.
double mixture_cdf(const residual::ResidualModel& m, double x) {
    double acc = 0;
    for (const double e : m.points())
        acc += 0.5 * (1.0 + std::erf((x - e) / (m.bandwidth() * std::sqrt(2.0))));
    return acc / static_cast<double>(m.points().size());
}

}  // namespace

TEST_CASE("percent residuals") {
    const std::vector<double> y{100, 100, 100};
    CHECK(residual::percent_residuals({{100, 100, 100}}, y) ==
          std::vector<double>{0.0, 0.0, 0.0});
    const auto eps = residual::percent_residuals({{110, 0, 150}}, y);
    CHECK(eps[0] == doctest::Approx(0.10));
    CHECK(eps[1] == doctest::Approx(-1.0));  // lower bound attained
    CHECK(eps[2] == doctest::Approx(0.50));
    CHECK_THROWS_AS(residual::percent_residuals({{1.0}}, {{0.0}}), Error);
}

TEST_CASE("kde_fit bandwidth follows Silverman's rule") {
    SUBCASE("standard-normal sample, n=1000") {
        Rng rng(4711);
        std::vector<double> sample(1000);
        for (auto& v : sample) v = rng.normal();
        const auto model = residual::ResidualModel::fit(sample);
        const double expected = 0.9 * std::pow(1000.0, -0.2);  // spread ~ 1
        CHECK(model.bandwidth() == doctest::Approx(expected).epsilon(0.2));
    }
    SUBCASE("identical values floor at 1e-4") {
        const auto model = residual::ResidualModel::fit(std::vector<double>(12, 0.2));
        CHECK(model.bandwidth() == doctest::Approx(1e-4));
        // pdf is maximized at the common value
        CHECK(model.pdf(0.2) > model.pdf(0.21));
        CHECK(model.pdf(0.2) > model.pdf(0.19));
    }
    SUBCASE("too few residuals") {
        CHECK_THROWS_AS(residual::ResidualModel::fit(std::vector<double>(9, 0.1)), Error);
    }
}

TEST_CASE("bimodal symmetry") {
    std::vector<double> sample;
    for (int i = 0; i < 40; ++i) sample.push_back(i % 2 ? 0.5 : -0.5);
    const auto model = residual::ResidualModel::fit(sample);
    CHECK(model.pdf(-0.5) == doctest::Approx(model.pdf(0.5)).epsilon(0.01));
}

TEST_CASE("kde_pdf matches the closed form for one point") {
    const auto model = residual::ResidualModel::from_params({0.0}, 1.0);
    CHECK(model.pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-9));
    // Far tail decays to numerical zero.
    CHECK(model.pdf(100.0) < 1e-12);
}

TEST_CASE("pdf integrates to one") {
    Rng rng(31337);
    std::vector<double> sample(200);
    for (auto& v : sample) v = 0.15 * rng.normal() + 0.02;
    const auto model = residual::ResidualModel::fit(sample);

    const double lo = *std::min_element(sample.begin(), sample.end()) - 10 * model.bandwidth();
    const double hi = *std::max_element(sample.begin(), sample.end()) + 10 * model.bandwidth();
    CHECK(integrate_pdf(model, lo, hi, 20000) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sampling: degenerate kernel pins draws to the point") {
    const auto model = residual::ResidualModel::from_params({0.2}, 1e-4);
    Rng rng(5);
    for (int i = 0; i < 200; ++i) CHECK(std::fabs(model.sample_one(rng) - 0.2) < 1e-3);
}

TEST_CASE("sampling: mean matches the sample mean within Monte Carlo error") {
    Rng data_rng(17);
    std::vector<double> sample(100);
    double mean = 0;
    for (auto& v : sample) {
        v = 0.1 * data_rng.normal() - 0.01;
        mean += v;
    }
    mean /= static_cast<double>(sample.size());
    double ss = 0;
    for (const double v : sample) ss += (v - mean) * (v - mean);
    const double std = std::sqrt(ss / (sample.size() - 1.0));

    const auto model = residual::ResidualModel::fit(sample);
    Rng rng(18);
    const size_t n = 100000;
    double draw_mean = 0;
    for (size_t i = 0; i < n; ++i) draw_mean += model.sample_one(rng);
    draw_mean /= static_cast<double>(n);
    CHECK(std::fabs(draw_mean - mean) <= 3.0 * std / std::sqrt(static_cast<double>(n)) + 1e-3);
}

TEST_CASE("sampling is deterministic and truncated at -1") {
    std::vector<double> sample(20, -0.999);  // kernel mass dips below -1
    const auto model = residual::ResidualModel::from_params(sample, 0.05);
    Rng a(9), b(9);
    const auto va = model.sample(1000, a);
    const auto vb = model.sample(1000, b);
    CHECK(va == vb);
    for (const double v : va) CHECK(v >= -1.0);
}

TEST_CASE("KS statistic of draws against the mixture CDF") {
    Rng data_rng(23);
    std::vector<double> sample(150);
    for (auto& v : sample) v = 0.12 * data_rng.normal();
    const auto model = residual::ResidualModel::fit(sample);

    Rng rng(24);
    const size_t n = 100000;
    auto draws = model.sample(n, rng);
    std::sort(draws.begin(), draws.end());
    double ks = 0;
    for (size_t i = 0; i < n; ++i) {
        const double cdf = mixture_cdf(model, draws[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        ks = std::max(ks, std::max(std::fabs(cdf - lo), std::fabs(cdf - hi)));
    }
    CHECK(ks < 0.01);
}
