#include "acbench/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "acbench/errors.hpp"
#include "acbench/metrics.hpp"

namespace acbench::selection {

std::vector<int> cv_partition(size_t n, int k_folds, Rng& rng) {
    if (k_folds < 2) throw Error(ErrorKind::InvalidSpec, "cv_partition needs k >= 2");
    if (n < static_cast<size_t>(k_folds))
        throw Error(ErrorKind::TooFewSegments, "fewer points than folds");

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    rng.shuffle(order);

    // First (n mod k) folds take the extra point.
    std::vector<int> labels(n);
    const size_t base = n / static_cast<size_t>(k_folds);
    const size_t extra = n % static_cast<size_t>(k_folds);
    size_t pos = 0;
    for (int fold = 0; fold < k_folds; ++fold) {
        const size_t size = base + (static_cast<size_t>(fold) < extra ? 1 : 0);
        for (size_t i = 0; i < size; ++i) labels[order[pos++]] = fold;
    }
    return labels;
}

CvRun cross_validate(regress::ModelStructure structure, const RoomDataset& dataset,
                     const CVConfig& cfg, const std::string& rng_scope, int trial) {
    const auto x = dataset.feature_matrix();
    const auto y = dataset.epi_values();
    const size_t n = x.size();
    const int structure_idx = static_cast<int>(structure);

    Rng partition_rng =
        Rng::stream(cfg.seed, rng_scope, dataset.room_id, structure_idx, trial, "partition");
    CvRun run;
    run.fold_labels = cv_partition(n, cfg.k_folds, partition_rng);
    run.predictions.assign(n, 0.0);

    for (int fold = 0; fold < cfg.k_folds; ++fold) {
        std::vector<FeatureVector> train_x;
        std::vector<double> train_y;
        std::vector<size_t> test_rows;
        for (size_t i = 0; i < n; ++i) {
            if (run.fold_labels[i] == fold) {
                test_rows.push_back(i);
            } else {
                train_x.push_back(x[i]);
                train_y.push_back(y[i]);
            }
        }
        const auto model = regress::train(
            structure, train_x, train_y,
            Rng::stream(cfg.seed, rng_scope, dataset.room_id, structure_idx, trial, fold));
        for (const size_t row : test_rows) run.predictions[row] = model.predict(x[row]);
    }

    run.mape = metrics::mape(run.predictions, y);
    return run;
}

SelectionRecord select_structure(const RoomDataset& dataset, const CVConfig& cfg) {
    if (cfg.structures.empty())
        throw Error(ErrorKind::InvalidSpec, "select_structure with empty structure list");

    SelectionRecord rec;
    rec.room_id = dataset.room_id;
    rec.structures = cfg.structures;
    rec.mean_mape.assign(cfg.structures.size(), std::numeric_limits<double>::quiet_NaN());
    rec.trial_mape.assign(cfg.structures.size(), {});
    rec.train_seconds.assign(cfg.structures.size(), 0.0);

    bool any_ok = false;
    for (size_t s = 0; s < cfg.structures.size(); ++s) {
        const auto structure = cfg.structures[s];
        std::vector<double> trials;
        const auto t0 = std::chrono::steady_clock::now();
        int trainings = 0;
        try {
            for (int trial = 0; trial < cfg.n_trials; ++trial) {
                trials.push_back(cross_validate(structure, dataset, cfg, "cv", trial).mape);
                trainings += cfg.k_folds;
            }
        } catch (const Error&) {
            // A failed fold fails the trial and disqualifies the structure.
            trials.clear();
        }
        const auto t1 = std::chrono::steady_clock::now();
        if (trainings > 0)
            rec.train_seconds[s] =
                std::chrono::duration<double>(t1 - t0).count() / trainings;

        rec.trial_mape[s] = trials;
        if (!trials.empty()) {
            rec.mean_mape[s] =
                std::accumulate(trials.begin(), trials.end(), 0.0) /
                static_cast<double>(trials.size());
            any_ok = true;
        }
    }
    if (!any_ok)
        throw Error(ErrorKind::AllStructuresFailed, dataset.room_id + ": every structure failed");

    size_t best = 0;
    bool have = false;
    for (size_t s = 0; s < cfg.structures.size(); ++s) {
        if (std::isnan(rec.mean_mape[s])) continue;
        if (!have || rec.mean_mape[s] < rec.mean_mape[best]) {  // ties keep enum order
            best = s;
            have = true;
        }
    }
    rec.winner = cfg.structures[best];
    rec.winner_mean_mape = rec.mean_mape[best];

    // One dedicated CV run of the winner, on a fresh stream, supplies the
    // out-of-fold sample for residual modeling.
    const auto residual_run = cross_validate(rec.winner, dataset, cfg, "residual-cv", 0);
    rec.oof_predicted = residual_run.predictions;
    rec.oof_actual = dataset.epi_values();
    return rec;
}

double estimate_total_time(int n_rooms, const CVConfig& cfg,
                           const std::vector<double>& train_seconds) {
    for (const double t : train_seconds)
        if (t < 0) throw Error(ErrorKind::InvalidSpec, "negative training time");
    const double total = std::accumulate(train_seconds.begin(), train_seconds.end(), 0.0);
    return static_cast<double>(n_rooms) * cfg.k_folds * cfg.n_trials * total;
}

}  // namespace acbench::selection
