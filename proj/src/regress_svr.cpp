#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "acbench/regressors.hpp"

namespace acbench::regress::detail {

namespace {

double kernel(const FeatureVector& a, const FeatureVector& b, bool gaussian, double gamma) {
    if (gaussian) {
        double d2 = 0.0;
        for (size_t f = 0; f < kNumFactors; ++f) {
            const double d = a[f] - b[f];
            d2 += d * d;
        }
        return std::exp(-gamma * d2);
    }
    double dot = 0.0;
    for (size_t f = 0; f < kNumFactors; ++f) dot += a[f] * b[f];
    return dot;
}

}  // namespace

double svr_predict_std(const SvrModel& m, const FeatureVector& x_normalized) {
    double y = m.bias;
    for (size_t i = 0; i < m.support_x.size(); ++i)
        y += m.beta[i] * kernel(m.support_x[i], x_normalized, m.gaussian, m.gamma);
    return y;
}

/**
 * epsilon-SVR trained by SMO over the 2n dual variables a = [alpha; alpha*]
 * with labels z = [+1; -1], Q_st = z_s z_t K(s mod n, t mod n) and
 * p_s = eps - z_s y_s, subject to z'a = 0 and 0 <= a <= C.
 * Maximal-violating-pair selection; stops when the KKT gap drops below
 * opts.kkt_tolerance or the iteration cap hits (reported via *converged).
 * Targets are standardized; the model keeps y_mean / y_std for prediction.
 */
SvrModel fit_svr(const std::vector<FeatureVector>& x, const std::vector<double>& y_raw,
                 bool gaussian, const SvrOptions& opts, bool* converged) {
    const size_t n = x.size();
    SvrModel model;
    model.gaussian = gaussian;
    model.gamma = 1.0 / kNumFactors;

    double mean = 0.0, std = 1.0;
    if (opts.standardize_targets) {
        for (const double v : y_raw) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const double v : y_raw) ss += (v - mean) * (v - mean);
        std = std::sqrt(ss / static_cast<double>(n > 1 ? n - 1 : 1));
        if (!(std > 0.0)) std = 1.0;  // constant targets: solve with all-zero y
    }
    model.y_mean = mean;
    model.y_std = std;

    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = (y_raw[i] - mean) / std;

    std::vector<double> k_cache(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j)
            k_cache[i * n + j] = k_cache[j * n + i] = kernel(x[i], x[j], gaussian, model.gamma);
    const auto kij = [&](size_t s, size_t t) { return k_cache[(s % n) * n + (t % n)]; };

    const size_t m = 2 * n;
    const double c = opts.cost;
    const double eps = opts.epsilon;
    std::vector<double> a(m, 0.0);
    std::vector<double> grad(m);  // G_t = sum_s Q_ts a_s + p_t; at a = 0, G = p
    for (size_t t = 0; t < m; ++t) {
        const double z = t < n ? 1.0 : -1.0;
        grad[t] = eps - z * y[t % n];
    }

    bool hit_cap = true;
    double last_up = 0.0, last_low = 0.0;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        // i maximizes -z G over I_up, j minimizes it over I_low.
        int i = -1, j = -1;
        double best_up = -std::numeric_limits<double>::infinity();
        double best_low = std::numeric_limits<double>::infinity();
        for (size_t t = 0; t < m; ++t) {
            const double z = t < n ? 1.0 : -1.0;
            const double v = -z * grad[t];
            if (((z > 0 && a[t] < c) || (z < 0 && a[t] > 0)) && v > best_up) {
                best_up = v;
                i = static_cast<int>(t);
            }
            if (((z > 0 && a[t] > 0) || (z < 0 && a[t] < c)) && v < best_low) {
                best_low = v;
                j = static_cast<int>(t);
            }
        }
        last_up = best_up;
        last_low = best_low;
        if (i < 0 || j < 0 || best_up - best_low < opts.kkt_tolerance) {
            hit_cap = false;
            break;
        }

        const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
        const bool same_label = (si < n) == (sj < n);
        const double old_ai = a[si], old_aj = a[sj];
        double quad = kij(si, si) + kij(sj, sj) - 2.0 * kij(si, sj);
        if (quad <= 0.0) quad = 1e-12;

        if (!same_label) {
            const double delta = (-grad[si] - grad[sj]) / quad;
            const double diff = a[si] - a[sj];
            a[si] += delta;
            a[sj] += delta;
            if (diff > 0) {
                if (a[sj] < 0) {
                    a[sj] = 0;
                    a[si] = diff;
                }
                if (a[si] > c) {
                    a[si] = c;
                    a[sj] = c - diff;
                }
            } else {
                if (a[si] < 0) {
                    a[si] = 0;
                    a[sj] = -diff;
                }
                if (a[sj] > c) {
                    a[sj] = c;
                    a[si] = c + diff;
                }
            }
        } else {
            const double delta = (grad[si] - grad[sj]) / quad;
            const double sum = a[si] + a[sj];
            a[si] -= delta;
            a[sj] += delta;
            if (sum > c) {
                if (a[si] > c) {
                    a[si] = c;
                    a[sj] = sum - c;
                }
                if (a[sj] > c) {
                    a[sj] = c;
                    a[si] = sum - c;
                }
            } else {
                if (a[sj] < 0) {
                    a[sj] = 0;
                    a[si] = sum;
                }
                if (a[si] < 0) {
                    a[si] = 0;
                    a[sj] = sum;
                }
            }
        }

        const double d_ai = a[si] - old_ai;
        const double d_aj = a[sj] - old_aj;
        if (d_ai == 0.0 && d_aj == 0.0) {
            hit_cap = false;  // boundary-stuck; gap already at numeric floor
            break;
        }
        const double zi = si < n ? 1.0 : -1.0;
        const double zj = sj < n ? 1.0 : -1.0;
        for (size_t t = 0; t < m; ++t) {
            const double zt = t < n ? 1.0 : -1.0;
            grad[t] += zt * (zi * kij(t, si) * d_ai + zj * kij(t, sj) * d_aj);
        }
    }
    if (converged) *converged = !hit_cap;

    // Bias from free variables' KKT equations; else the gap midpoint.
    double bias_sum = 0.0;
    int bias_count = 0;
    for (size_t t = 0; t < m; ++t) {
        if (a[t] > 1e-12 && a[t] < c - 1e-12) {
            const double z = t < n ? 1.0 : -1.0;
            bias_sum += -z * grad[t];
            ++bias_count;
        }
    }
    model.bias = bias_count > 0 ? bias_sum / bias_count : 0.5 * (last_up + last_low);
    if (!std::isfinite(model.bias)) model.bias = 0.0;

    for (size_t i = 0; i < n; ++i) {
        const double beta = a[i] - a[i + n];
        if (beta != 0.0) {
            model.support_x.push_back(x[i]);
            model.beta.push_back(beta);
        }
    }
    return model;
}

}  // namespace acbench::regress::detail
