#pragma once

#include <string>
#include <vector>

#include "acbench/regressors.hpp"
#include "acbench/rng.hpp"
#include "acbench/types.hpp"

namespace acbench::selection {

struct CVConfig {
    int k_folds = 10;   // K_cv
    int n_trials = 10;  // N_cv
    uint64_t seed = 0;
    std::vector<regress::ModelStructure> structures = regress::all_structures();
};

/**
 * Random partition into k folds whose sizes differ by at most one.
 * Returns a fold label in [0, k) per point. Throws TooFewSegments if n < k.
 */
std::vector<int> cv_partition(size_t n, int k_folds, Rng& rng);

struct CvRun {
    double mape = 0.0;                 // pooled over all out-of-fold predictions
    std::vector<int> fold_labels;      // the partition used
    std::vector<double> predictions;   // out-of-fold prediction per point
};

/**
 * One k-fold CV trial of a structure: every point is predicted exactly once
 * by a model whose training folds exclude it (the fold normalizer is refit
 * per training set), and the MAPE pools all n predictions. Fold trainings
 * draw rng streams from (seed, room, structure_idx, trial, fold) so results
 * are schedule-independent.
 */
CvRun cross_validate(regress::ModelStructure structure, const RoomDataset& dataset,
                     const CVConfig& cfg, const std::string& rng_scope, int trial);

struct SelectionRecord {
    std::string room_id;
    std::vector<double> mean_mape;                // one per tested structure
    std::vector<std::vector<double>> trial_mape;  // structures x N_cv
    std::vector<regress::ModelStructure> structures;
    regress::ModelStructure winner = regress::ModelStructure::LrNormal;
    double winner_mean_mape = 0.0;
    // Dedicated extra CV run of the winner, feeding residual modeling.
    std::vector<double> oof_predicted;
    std::vector<double> oof_actual;
    // Wall-clock mean training seconds per structure. Lives outside the
    // deterministic artifacts (timing.json), never in selection.json.
    std::vector<double> train_seconds;
};

/**
 * Algorithm: every structure gets n_trials CV runs; the structure with the
 * lowest mean MAPE wins, ties broken by enumeration order. Throws
 * AllStructuresFailed when no structure completes a single trial.
 */
SelectionRecord select_structure(const RoomDataset& dataset, const CVConfig& cfg);

/// N_rooms * K_cv * N_cv * sum(t_train), in seconds.
double estimate_total_time(int n_rooms, const CVConfig& cfg,
                           const std::vector<double>& train_seconds);

}  // namespace acbench::selection
