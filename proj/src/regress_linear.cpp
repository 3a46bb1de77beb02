#include <algorithm>
#include <cmath>
#include <vector>

#include "acbench/errors.hpp"
#include "acbench/regressors.hpp"

namespace acbench::regress::detail {

namespace {

constexpr int kDim = kNumFactors + 1;  // features + bias

/// Gaussian elimination with partial pivoting; returns false when singular.
bool solve_inplace(std::vector<double>& a, std::vector<double>& b, int dim) {
    for (int col = 0; col < dim; ++col) {
        int pivot = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(a[static_cast<size_t>(r * dim + col)]) >
                std::abs(a[static_cast<size_t>(pivot * dim + col)]))
                pivot = r;
        if (std::abs(a[static_cast<size_t>(pivot * dim + col)]) < 1e-12) return false;
        if (pivot != col) {
            for (int c = 0; c < dim; ++c)
                std::swap(a[static_cast<size_t>(col * dim + c)],
                          a[static_cast<size_t>(pivot * dim + c)]);
            std::swap(b[static_cast<size_t>(col)], b[static_cast<size_t>(pivot)]);
        }
        const double inv = 1.0 / a[static_cast<size_t>(col * dim + col)];
        for (int r = col + 1; r < dim; ++r) {
            const double factor = a[static_cast<size_t>(r * dim + col)] * inv;
            if (factor == 0.0) continue;
            for (int c = col; c < dim; ++c)
                a[static_cast<size_t>(r * dim + c)] -=
                    factor * a[static_cast<size_t>(col * dim + c)];
            b[static_cast<size_t>(r)] -= factor * b[static_cast<size_t>(col)];
        }
    }
    for (int r = dim - 1; r >= 0; --r) {
        double v = b[static_cast<size_t>(r)];
        for (int c = r + 1; c < dim; ++c)
            v -= a[static_cast<size_t>(r * dim + c)] * b[static_cast<size_t>(c)];
        b[static_cast<size_t>(r)] = v / a[static_cast<size_t>(r * dim + r)];
    }
    return true;
}

/// Weighted least squares via normal equations; ridge fallback on rank
/// deficiency (reported through *degenerate).
LinearModel weighted_ols(const std::vector<FeatureVector>& x, const std::vector<double>& y,
                         const std::vector<double>& w, bool* degenerate) {
    const size_t n = x.size();
    std::vector<double> xtx(kDim * kDim, 0.0);
    std::vector<double> xty(kDim, 0.0);
    for (size_t i = 0; i < n; ++i) {
        double row[kDim];
        for (int f = 0; f < kNumFactors; ++f) row[f] = x[i][static_cast<size_t>(f)];
        row[kNumFactors] = 1.0;
        const double wi = w.empty() ? 1.0 : w[i];
        for (int a = 0; a < kDim; ++a) {
            for (int b = a; b < kDim; ++b)
                xtx[static_cast<size_t>(a * kDim + b)] += wi * row[a] * row[b];
            xty[static_cast<size_t>(a)] += wi * row[a] * y[i];
        }
    }
    for (int a = 1; a < kDim; ++a)
        for (int b = 0; b < a; ++b)
            xtx[static_cast<size_t>(a * kDim + b)] = xtx[static_cast<size_t>(b * kDim + a)];

    auto a_copy = xtx;
    auto rhs = xty;
    if (!solve_inplace(a_copy, rhs, kDim)) {
        if (degenerate) *degenerate = true;
        double trace = 0.0;
        for (int d = 0; d < kDim; ++d) trace += xtx[static_cast<size_t>(d * kDim + d)];
        const double ridge = 1e-8 * (trace > 0 ? trace : 1.0);
        a_copy = xtx;
        rhs = xty;
        for (int d = 0; d < kDim; ++d) a_copy[static_cast<size_t>(d * kDim + d)] += ridge;
        if (!solve_inplace(a_copy, rhs, kDim))
            throw Error(ErrorKind::Numeric, "linear solve failed even with ridge");
    }

    LinearModel m;
    for (int f = 0; f < kNumFactors; ++f) m.weights[static_cast<size_t>(f)] = rhs[static_cast<size_t>(f)];
    m.bias = rhs[kNumFactors];
    return m;
}

double median_abs(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

LinearModel fit_ols(const std::vector<FeatureVector>& x, const std::vector<double>& y,
                    bool* degenerate) {
    return weighted_ols(x, y, {}, degenerate);
}

// IRLS with bisquare weights, tuning constant 4.685 on MAD-scaled residuals.
LinearModel fit_robust(const std::vector<FeatureVector>& x, const std::vector<double>& y,
                       bool* degenerate, bool* converged) {
    constexpr double kTuning = 4.685;
    constexpr double kTolerance = 1e-8;
    constexpr int kMaxIterations = 50;

    LinearModel m = weighted_ols(x, y, {}, degenerate);
    const size_t n = x.size();
    std::vector<double> weights(n, 1.0);
    std::vector<double> residuals(n);
    if (converged) *converged = false;

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        for (size_t i = 0; i < n; ++i) {
            double pred = m.bias;
            for (int f = 0; f < kNumFactors; ++f)
                pred += m.weights[static_cast<size_t>(f)] * x[i][static_cast<size_t>(f)];
            residuals[i] = y[i] - pred;
        }
        std::vector<double> abs_res(n);
        for (size_t i = 0; i < n; ++i) abs_res[i] = std::abs(residuals[i]);
        double scale = median_abs(abs_res) / 0.6745;
        if (scale < 1e-12) {  // (near-)exact fit; weights stay meaningful
            if (converged) *converged = true;
            return m;
        }
        for (size_t i = 0; i < n; ++i) {
            const double u = residuals[i] / (kTuning * scale);
            const double t = 1.0 - u * u;
            weights[i] = std::abs(u) < 1.0 ? t * t : 0.0;
        }
        const LinearModel next = weighted_ols(x, y, weights, degenerate);
        double max_change = std::abs(next.bias - m.bias);
        for (int f = 0; f < kNumFactors; ++f)
            max_change = std::max(max_change,
                                  std::abs(next.weights[static_cast<size_t>(f)] -
                                           m.weights[static_cast<size_t>(f)]));
        m = next;
        if (max_change < kTolerance) {
            if (converged) *converged = true;
            break;
        }
    }
    return m;
}

}  // namespace acbench::regress::detail
