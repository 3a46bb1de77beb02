#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "acbench/rng.hpp"
#include "acbench/types.hpp"

namespace acbench::regress {

/// The 13 candidate model structures, in tie-breaking order.
enum class ModelStructure : int {
    LrNormal = 0,
    LrRobust,
    SvrLkn,
    SvrGkn,
    RtFull,
    RtPb3l,
    RtPb5l,
    AnnL1S5,
    AnnL1S10,
    AnnL1S15,
    AnnL2S5,
    AnnL2S10,
    AnnL2S15,
};

inline constexpr int kNumStructures = 13;

const std::string& structure_name(ModelStructure s);
std::optional<ModelStructure> structure_from_name(const std::string& name);
std::vector<ModelStructure> all_structures();

/// Per-feature z-score transform fitted on a training set (sample std).
class Normalizer {
public:
    Normalizer() = default;

    /// Fits means/stds over the rows. Zero-variance features pass through
    /// centered with unit scale. Throws TooFewRows when n < 2.
    static Normalizer fit(const std::vector<FeatureVector>& rows);

    FeatureVector apply(const FeatureVector& x) const;
    FeatureVector invert(const FeatureVector& z) const;

    const FeatureVector& means() const { return mean_; }
    const FeatureVector& stds() const { return std_; }

    static Normalizer from_params(const FeatureVector& mean, const FeatureVector& std);

private:
    FeatureVector mean_{};
    FeatureVector std_{{1, 1, 1, 1, 1, 1, 1}};
};

// --- structure-specific parameter blocks ------------------------------

struct LinearModel {
    std::array<double, kNumFactors> weights{};
    double bias = 0.0;
};

struct SvrModel {
    bool gaussian = false;
    double gamma = 1.0 / kNumFactors;
    std::vector<FeatureVector> support_x;  // normalized inputs with beta != 0
    std::vector<double> beta;              // alpha - alpha*
    double bias = 0.0;                     // on standardized targets
    double y_mean = 0.0;
    double y_std = 1.0;
};

struct TreeNode {
    int feature = -1;       // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;     // mean y of the node's training rows
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    int depth() const;
    int leaf_count() const;
};

struct AnnModel {
    std::vector<int> layer_sizes;  // e.g. {7, 5, 1}
    // weights[l] is (out x in) row-major, biases[l] length out.
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    double y_mean = 0.0;
    double y_std = 1.0;
};

struct TrainingFlags {
    bool solver_nonconvergence = false;  // iteration cap hit
    bool degenerate_design = false;      // rank-deficient LR, ridge fallback
};

/**
 * A fitted predictor: structure tag, its normalizer, and the structure's
 * parameters. Immutable after training; predictions are deterministic and
 * clamped below at 0 W.
 */
struct TrainedPredictor {
    ModelStructure structure = ModelStructure::LrNormal;
    Normalizer normalizer;
    std::variant<LinearModel, SvrModel, TreeModel, AnnModel> params;
    size_t training_rows = 0;
    TrainingFlags flags;

    double predict(const FeatureVector& x) const;
};

/**
 * Trains one structure on raw features/targets. Requires n >= 10 and all
 * y >= 0. The rng drives ANN init/shuffling only; other structures are
 * rng-free. Deterministic for a fixed rng stream.
 */
TrainedPredictor train(ModelStructure structure, const std::vector<FeatureVector>& x,
                       const std::vector<double>& y, Rng rng);

// Internals exposed for property tests.
namespace detail {

struct SvrOptions {
    double epsilon = 0.1;  // on standardized targets
    double cost = 1.0;
    double kkt_tolerance = 1e-3;
    int max_iterations = 10000;
    bool standardize_targets = true;  // tests may pass pre-scaled targets
};

SvrModel fit_svr(const std::vector<FeatureVector>& x_normalized, const std::vector<double>& y,
                 bool gaussian, const SvrOptions& opts, bool* converged);

double svr_predict_std(const SvrModel& m, const FeatureVector& x_normalized);

TreeModel fit_tree(const std::vector<FeatureVector>& x_normalized, const std::vector<double>& y);

/// Truncates the tree to depth max(1, depth - levels); levels <= 0 is a no-op.
TreeModel prune_by_levels(const TreeModel& tree, int levels);

LinearModel fit_ols(const std::vector<FeatureVector>& x_normalized,
                    const std::vector<double>& y, bool* degenerate);

LinearModel fit_robust(const std::vector<FeatureVector>& x_normalized,
                       const std::vector<double>& y, bool* degenerate, bool* converged);

}  // namespace detail

}  // namespace acbench::regress
