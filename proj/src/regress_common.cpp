#include <cmath>

#include "acbench/errors.hpp"
#include "acbench/regressors.hpp"

namespace acbench::regress {

namespace {
const std::array<std::string, kNumStructures> kStructureNames = {
    "lr-normal", "lr-robust", "svr-lkn",  "svr-gkn",  "rt-full",  "rt-pb3l",  "rt-pb5l",
    "ann-l1s5",  "ann-l1s10", "ann-l1s15", "ann-l2s5", "ann-l2s10", "ann-l2s15",
};
}  // namespace

const std::string& structure_name(ModelStructure s) {
    return kStructureNames[static_cast<size_t>(s)];
}

std::optional<ModelStructure> structure_from_name(const std::string& name) {
    for (int i = 0; i < kNumStructures; ++i)
        if (kStructureNames[static_cast<size_t>(i)] == name)
            return static_cast<ModelStructure>(i);
    return std::nullopt;
}

std::vector<ModelStructure> all_structures() {
    std::vector<ModelStructure> out;
    out.reserve(kNumStructures);
    for (int i = 0; i < kNumStructures; ++i) out.push_back(static_cast<ModelStructure>(i));
    return out;
}

Normalizer Normalizer::fit(const std::vector<FeatureVector>& rows) {
    if (rows.size() < 2)
        throw Error(ErrorKind::TooFewRows, "normalizer needs at least 2 rows");
    Normalizer n;
    const double count = static_cast<double>(rows.size());
    for (int f = 0; f < kNumFactors; ++f) {
        double sum = 0.0;
        for (const auto& r : rows) sum += r[static_cast<size_t>(f)];
        const double mean = sum / count;
        double ss = 0.0;
        for (const auto& r : rows) {
            const double d = r[static_cast<size_t>(f)] - mean;
            ss += d * d;
        }
        const double std = std::sqrt(ss / (count - 1.0));
        n.mean_[static_cast<size_t>(f)] = mean;
        n.std_[static_cast<size_t>(f)] = std > 0.0 ? std : 1.0;
    }
    return n;
}

FeatureVector Normalizer::apply(const FeatureVector& x) const {
    FeatureVector z;
    for (size_t f = 0; f < kNumFactors; ++f) z[f] = (x[f] - mean_[f]) / std_[f];
    return z;
}

FeatureVector Normalizer::invert(const FeatureVector& z) const {
    FeatureVector x;
    for (size_t f = 0; f < kNumFactors; ++f) x[f] = z[f] * std_[f] + mean_[f];
    return x;
}

Normalizer Normalizer::from_params(const FeatureVector& mean, const FeatureVector& std) {
    Normalizer n;
    n.mean_ = mean;
    n.std_ = std;
    return n;
}

int TreeModel::depth() const {
    if (nodes.empty()) return 0;
    // Iterative depth over the flat node array.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int depth = 0;
    while (!stack.empty()) {
        const auto [idx, d] = stack.back();
        stack.pop_back();
        depth = std::max(depth, d);
        const auto& node = nodes[static_cast<size_t>(idx)];
        if (node.feature >= 0) {
            stack.push_back({node.left, d + 1});
            stack.push_back({node.right, d + 1});
        }
    }
    return depth;
}

int TreeModel::leaf_count() const {
    int leaves = 0;
    for (const auto& node : nodes)
        if (node.feature < 0) ++leaves;
    return leaves;
}

namespace {

double predict_linear(const LinearModel& m, const FeatureVector& z) {
    double y = m.bias;
    for (size_t f = 0; f < kNumFactors; ++f) y += m.weights[f] * z[f];
    return y;
}

double predict_tree(const TreeModel& m, const FeatureVector& z) {
    int idx = 0;
    while (m.nodes[static_cast<size_t>(idx)].feature >= 0) {
        const auto& node = m.nodes[static_cast<size_t>(idx)];
        idx = z[static_cast<size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return m.nodes[static_cast<size_t>(idx)].value;
}

double predict_ann(const AnnModel& m, const FeatureVector& z) {
    std::vector<double> act(z.begin(), z.end());
    for (size_t l = 0; l < m.weights.size(); ++l) {
        const int n_in = m.layer_sizes[l];
        const int n_out = m.layer_sizes[l + 1];
        std::vector<double> next(static_cast<size_t>(n_out));
        const bool hidden = l + 1 < m.weights.size();
        for (int o = 0; o < n_out; ++o) {
            double v = m.biases[l][static_cast<size_t>(o)];
            const double* w = &m.weights[l][static_cast<size_t>(o * n_in)];
            for (int i = 0; i < n_in; ++i) v += w[i] * act[static_cast<size_t>(i)];
            next[static_cast<size_t>(o)] = hidden ? std::tanh(v) : v;
        }
        act = std::move(next);
    }
    return act[0] * m.y_std + m.y_mean;
}

}  // namespace

double TrainedPredictor::predict(const FeatureVector& x) const {
    const FeatureVector z = normalizer.apply(x);
    double y = 0.0;
    if (const auto* lin = std::get_if<LinearModel>(&params)) {
        y = predict_linear(*lin, z);
    } else if (const auto* svr = std::get_if<SvrModel>(&params)) {
        y = detail::svr_predict_std(*svr, z) * svr->y_std + svr->y_mean;
    } else if (const auto* tree = std::get_if<TreeModel>(&params)) {
        y = predict_tree(*tree, z);
    } else if (const auto* ann = std::get_if<AnnModel>(&params)) {
        y = predict_ann(*ann, z);
    }
    return y > 0.0 ? y : 0.0;  // power cannot go negative
}

namespace detail {
AnnModel fit_ann(const std::vector<FeatureVector>& x, const std::vector<double>& y,
                 int hidden_layers, int hidden_nodes, Rng& rng);
}

TrainedPredictor train(ModelStructure structure, const std::vector<FeatureVector>& x,
                       const std::vector<double>& y, Rng rng) {
    if (x.size() != y.size())
        throw Error(ErrorKind::SampleSizeMismatch, "train: x/y length mismatch");
    if (x.size() < 10)
        throw Error(ErrorKind::TooFewRows, "train needs at least 10 rows");
    for (const double v : y)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::ZeroActual, "train: targets must be finite and >= 0");

    TrainedPredictor p;
    p.structure = structure;
    p.normalizer = Normalizer::fit(x);
    p.training_rows = x.size();

    std::vector<FeatureVector> z;
    z.reserve(x.size());
    for (const auto& row : x) z.push_back(p.normalizer.apply(row));

    bool converged = true;
    switch (structure) {
        case ModelStructure::LrNormal:
            p.params = detail::fit_ols(z, y, &p.flags.degenerate_design);
            break;
        case ModelStructure::LrRobust:
            p.params = detail::fit_robust(z, y, &p.flags.degenerate_design, &converged);
            break;
        case ModelStructure::SvrLkn:
        case ModelStructure::SvrGkn: {
            detail::SvrOptions opts;
            p.params = detail::fit_svr(z, y, structure == ModelStructure::SvrGkn, opts,
                                       &converged);
            break;
        }
        case ModelStructure::RtFull:
            p.params = detail::fit_tree(z, y);
            break;
        case ModelStructure::RtPb3l:
            p.params = detail::prune_by_levels(detail::fit_tree(z, y), 3);
            break;
        case ModelStructure::RtPb5l:
            p.params = detail::prune_by_levels(detail::fit_tree(z, y), 5);
            break;
        case ModelStructure::AnnL1S5:
            p.params = detail::fit_ann(z, y, 1, 5, rng);
            break;
        case ModelStructure::AnnL1S10:
            p.params = detail::fit_ann(z, y, 1, 10, rng);
            break;
        case ModelStructure::AnnL1S15:
            p.params = detail::fit_ann(z, y, 1, 15, rng);
            break;
        case ModelStructure::AnnL2S5:
            p.params = detail::fit_ann(z, y, 2, 5, rng);
            break;
        case ModelStructure::AnnL2S10:
            p.params = detail::fit_ann(z, y, 2, 10, rng);
            break;
        case ModelStructure::AnnL2S15:
            p.params = detail::fit_ann(z, y, 2, 15, rng);
            break;
    }
    p.flags.solver_nonconvergence = !converged;
    return p;
}

}  // namespace acbench::regress
