#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "acbench/regressors.hpp"

namespace acbench::regress::detail {

// Fully connected MLP, tanh hidden / linear output, trained with mini-batch
// SGD: batch 16, step 1e-2 decayed 0.99 per epoch, 500 epochs. Weights start
// normal-distributed scaled by 1/sqrt(fan-in); targets are standardized.
AnnModel fit_ann(const std::vector<FeatureVector>& x, const std::vector<double>& y_raw,
                 int hidden_layers, int hidden_nodes, Rng& rng) {
    constexpr int kEpochs = 500;
    constexpr size_t kBatch = 16;
    constexpr double kDecay = 0.99;
    double learning_rate = 1e-2;

    const size_t n = x.size();
    AnnModel model;
    model.layer_sizes.push_back(kNumFactors);
    for (int l = 0; l < hidden_layers; ++l) model.layer_sizes.push_back(hidden_nodes);
    model.layer_sizes.push_back(1);

    double mean = 0.0;
    for (const double v : y_raw) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const double v : y_raw) ss += (v - mean) * (v - mean);
    const bool constant_target = !(ss > 0.0);
    double std = std::sqrt(ss / static_cast<double>(n > 1 ? n - 1 : 1));
    if (!(std > 0.0)) std = 1.0;
    model.y_mean = mean;
    model.y_std = std;
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = (y_raw[i] - mean) / std;

    const size_t n_layers = model.layer_sizes.size() - 1;
    model.weights.resize(n_layers);
    model.biases.resize(n_layers);
    for (size_t l = 0; l < n_layers; ++l) {
        const int n_in = model.layer_sizes[l];
        const int n_out = model.layer_sizes[l + 1];
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_in));
        model.weights[l].resize(static_cast<size_t>(n_in * n_out));
        model.biases[l].assign(static_cast<size_t>(n_out), 0.0);
        for (auto& w : model.weights[l]) w = rng.normal() * scale;
    }

    if (constant_target) {
        // No training signal: the all-zero network already outputs the
        // target mean exactly everywhere.
        for (auto& layer : model.weights) std::fill(layer.begin(), layer.end(), 0.0);
        return model;
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});

    // Per-sample activation/delta buffers reused across steps.
    std::vector<std::vector<double>> act(n_layers + 1);
    std::vector<std::vector<double>> delta(n_layers);
    for (size_t l = 0; l <= n_layers; ++l)
        act[l].resize(static_cast<size_t>(model.layer_sizes[l]));
    for (size_t l = 0; l < n_layers; ++l)
        delta[l].resize(static_cast<size_t>(model.layer_sizes[l + 1]));

    std::vector<std::vector<double>> grad_w(n_layers), grad_b(n_layers);
    for (size_t l = 0; l < n_layers; ++l) {
        grad_w[l].resize(model.weights[l].size());
        grad_b[l].resize(model.biases[l].size());
    }

    for (int epoch = 0; epoch < kEpochs; ++epoch) {
        rng.shuffle(order);
        for (size_t start = 0; start < n; start += kBatch) {
            const size_t stop = std::min(start + kBatch, n);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            for (size_t l = 0; l < n_layers; ++l) {
                std::fill(grad_w[l].begin(), grad_w[l].end(), 0.0);
                std::fill(grad_b[l].begin(), grad_b[l].end(), 0.0);
            }

            for (size_t b = start; b < stop; ++b) {
                const size_t row = order[b];
                for (int f = 0; f < kNumFactors; ++f)
                    act[0][static_cast<size_t>(f)] = x[row][static_cast<size_t>(f)];
                for (size_t l = 0; l < n_layers; ++l) {
                    const int n_in = model.layer_sizes[l];
                    const int n_out = model.layer_sizes[l + 1];
                    const bool hidden = l + 1 < n_layers;
                    for (int o = 0; o < n_out; ++o) {
                        double v = model.biases[l][static_cast<size_t>(o)];
                        const double* w = &model.weights[l][static_cast<size_t>(o * n_in)];
                        for (int i = 0; i < n_in; ++i) v += w[i] * act[l][static_cast<size_t>(i)];
                        act[l + 1][static_cast<size_t>(o)] = hidden ? std::tanh(v) : v;
                    }
                }

                // Backprop of squared-error loss (d = pred - target at output).
                delta[n_layers - 1][0] = act[n_layers][0] - y[row];
                for (size_t l = n_layers - 1; l-- > 0;) {
                    const int n_out = model.layer_sizes[l + 1];
                    const int n_next = model.layer_sizes[l + 2];
                    for (int o = 0; o < n_out; ++o) {
                        double v = 0.0;
                        for (int k = 0; k < n_next; ++k)
                            v += model.weights[l + 1][static_cast<size_t>(k * n_out + o)] *
                                 delta[l + 1][static_cast<size_t>(k)];
                        const double a = act[l + 1][static_cast<size_t>(o)];
                        delta[l][static_cast<size_t>(o)] = v * (1.0 - a * a);
                    }
                }

                for (size_t l = 0; l < n_layers; ++l) {
                    const int n_in = model.layer_sizes[l];
                    const int n_out = model.layer_sizes[l + 1];
                    for (int o = 0; o < n_out; ++o) {
                        const double d = delta[l][static_cast<size_t>(o)];
                        grad_b[l][static_cast<size_t>(o)] += d;
                        double* gw = &grad_w[l][static_cast<size_t>(o * n_in)];
                        for (int i = 0; i < n_in; ++i)
                            gw[i] += d * act[l][static_cast<size_t>(i)];
                    }
                }
            }

            for (size_t l = 0; l < n_layers; ++l) {
                for (size_t i = 0; i < model.weights[l].size(); ++i)
                    model.weights[l][i] -= learning_rate * inv_batch * grad_w[l][i];
                for (size_t i = 0; i < model.biases[l].size(); ++i)
                    model.biases[l][i] -= learning_rate * inv_batch * grad_b[l][i];
            }
        }
        learning_rate *= kDecay;
    }
    return model;
}

}  // namespace acbench::regress::detail
