#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "acbench/errors.hpp"
#include "acbench/selection.hpp"

using namespace acbench;
using regress::ModelStructure;

namespace {

RoomDataset linear_room(size_t n, double noise_std, uint64_t seed,
                        const std::string& id = "room") {
    Rng rng(seed);
    RoomDataset ds;
    ds.room_id = id;
    ds.area_m2 = 15.0;
    for (size_t i = 0; i < n; ++i) {
        OperationSegment s;
        s.room_id = id;
        s.start = static_cast<Timestamp>(i) * 20000;
        s.end = s.start + 7200;
        s.t_seg_s = rng.uniform(3600, 20000);
        s.t_a_mean_c = rng.uniform(26, 36);
        s.h_a_mean_pct = rng.uniform(40, 95);
        s.p_si_mean_wm2 = rng.uniform(0, 700);
        s.t_ri_c = rng.uniform(25, 33);
        s.t_r_mean_c = rng.uniform(20, 27);
        s.t_set_mean_c = rng.uniform(18, 28);
        s.p_ac_mean_w = 60.0 + 14.0 * s.t_a_mean_c + 0.2 * s.p_si_mean_wm2;
        if (noise_std > 0) s.p_ac_mean_w += rng.normal() * noise_std;
        s.p_ac_mean_w = std::max(s.p_ac_mean_w, 1.0);
        ds.segments.push_back(std::move(s));
    }
    return ds;
}

selection::CVConfig quick_cfg(uint64_t seed) {
    selection::CVConfig cfg;
    cfg.k_folds = 5;
    cfg.n_trials = 3;
    cfg.seed = seed;
    cfg.structures = {ModelStructure::LrNormal, ModelStructure::LrRobust,
                      ModelStructure::SvrLkn, ModelStructure::SvrGkn,
                      ModelStructure::RtFull};
    return cfg;
}

}  // namespace

TEST_CASE("cv_partition sizes and determinism") {
    SUBCASE("n=10, k=10: singleton folds") {
        Rng rng(1);
        const auto labels = selection::cv_partition(10, 10, rng);
        std::vector<int> counts(10, 0);
        for (const int l : labels) ++counts[static_cast<size_t>(l)];
        for (const int c : counts) CHECK(c == 1);
    }
    SUBCASE("n=23, k=10: three folds of 3, seven of 2") {
        Rng rng(2);
        const auto labels = selection::cv_partition(23, 10, rng);
        std::vector<int> counts(10, 0);
        for (const int l : labels) ++counts[static_cast<size_t>(l)];
        CHECK(std::count(counts.begin(), counts.end(), 3) == 3);
        CHECK(std::count(counts.begin(), counts.end(), 2) == 7);
    }
    SUBCASE("same seed, same partition") {
        Rng a(77), b(77);
        CHECK(selection::cv_partition(40, 10, a) == selection::cv_partition(40, 10, b));
    }
    SUBCASE("too few points") {
        Rng rng(3);
        CHECK_THROWS_AS(selection::cv_partition(5, 10, rng), Error);
    }
}

TEST_CASE("cross_validate pools every point exactly once") {
    const auto room = linear_room(37, 20.0, 99);
    const auto cfg = quick_cfg(5);
    const auto run = selection::cross_validate(ModelStructure::LrNormal, room, cfg, "cv", 0);
    CHECK(run.predictions.size() == 37);
    CHECK(run.fold_labels.size() == 37);
    // Every fold label appears, sizes within one of each other.
    std::vector<int> counts(static_cast<size_t>(cfg.k_folds), 0);
    for (const int l : run.fold_labels) ++counts[static_cast<size_t>(l)];
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    CHECK(*hi - *lo <= 1);
    CHECK(std::isfinite(run.mape));
}

TEST_CASE("out-of-fold predictions come from models that never saw the point") {
    // Reconstruct each fold's training run with the same derived streams and
    // confirm the pooled predictions match the instrumented recomputation.
    const auto room = linear_room(30, 15.0, 123);
    selection::CVConfig cfg = quick_cfg(42);
    const auto structure = ModelStructure::LrNormal;
    const auto run = selection::cross_validate(structure, room, cfg, "cv", 2);

    const auto x = room.feature_matrix();
    const auto y = room.epi_values();
    for (int fold = 0; fold < cfg.k_folds; ++fold) {
        std::vector<FeatureVector> train_x;
        std::vector<double> train_y;
        std::vector<size_t> test_rows;
        for (size_t i = 0; i < x.size(); ++i) {
            if (run.fold_labels[i] == fold) {
                test_rows.push_back(i);
            } else {
                train_x.push_back(x[i]);
                train_y.push_back(y[i]);
            }
        }
        // Membership check: the fold's training set excludes its test rows.
        for (const size_t row : test_rows) {
            for (size_t j = 0; j < train_x.size(); ++j) CHECK(train_x[j] != x[row]);
        }
        const auto model = regress::train(
            structure, train_x, train_y,
            Rng::stream(cfg.seed, "cv", room.room_id, static_cast<int>(structure), 2, fold));
        for (const size_t row : test_rows)
            CHECK(model.predict(x[row]) == doctest::Approx(run.predictions[row]).epsilon(1e-15));
    }
}

TEST_CASE("cross_validate on noiseless linear data is near-exact") {
    const auto room = linear_room(50, 0.0, 7);
    const auto cfg = quick_cfg(8);
    const auto run = selection::cross_validate(ModelStructure::LrNormal, room, cfg, "cv", 0);
    CHECK(run.mape <= 0.01);
}

TEST_CASE("constant target: trial MAPE vanishes") {
    auto room = linear_room(30, 0.0, 9);
    for (auto& s : room.segments) s.p_ac_mean_w = 555.0;
    const auto cfg = quick_cfg(10);
    for (const auto structure : cfg.structures) {
        const auto run = selection::cross_validate(structure, room, cfg, "cv", 0);
        CHECK(run.mape <= 1e-6);
    }
}

TEST_CASE("select_structure: linear ground truth picks a linear-family winner") {
    const auto room = linear_room(60, 0.0, 11);
    const auto cfg = quick_cfg(12);
    const auto rec = selection::select_structure(room, cfg);

    const std::set<ModelStructure> linear_family{
        ModelStructure::LrNormal, ModelStructure::LrRobust, ModelStructure::SvrLkn};
    CHECK(linear_family.count(rec.winner) == 1);
    CHECK(rec.winner_mean_mape <= 0.5);

    // Record shape: one mean and N_cv trials per structure.
    CHECK(rec.mean_mape.size() == cfg.structures.size());
    for (const auto& trials : rec.trial_mape)
        CHECK(trials.size() == static_cast<size_t>(cfg.n_trials));
    CHECK(rec.oof_predicted.size() == room.segments.size());

    // The winner attains the minimum of the means.
    double best = rec.mean_mape[0];
    for (const double m : rec.mean_mape) best = std::min(best, m);
    CHECK(rec.winner_mean_mape == doctest::Approx(best));
}

TEST_CASE("selection is deterministic under a fixed seed") {
    const auto room = linear_room(30, 25.0, 13);
    const auto cfg = quick_cfg(99);
    const auto a = selection::select_structure(room, cfg);
    const auto b = selection::select_structure(room, cfg);
    CHECK(a.winner == b.winner);
    REQUIRE(a.mean_mape.size() == b.mean_mape.size());
    for (size_t i = 0; i < a.mean_mape.size(); ++i)
        CHECK(a.mean_mape[i] == doctest::Approx(b.mean_mape[i]).epsilon(1e-15));
    CHECK(a.oof_predicted == b.oof_predicted);
}

TEST_CASE("argmin ties break by enumeration order") {
    // A constant target makes both pruned-tree variants collapse to the same
    // single leaf, giving bit-identical MAPE vectors: the earlier structure
    // in the list must win the exact tie.
    auto room = linear_room(30, 0.0, 14);
    for (auto& s : room.segments) s.p_ac_mean_w = 700.0;
    auto cfg = quick_cfg(15);
    cfg.structures = {ModelStructure::RtFull, ModelStructure::RtPb3l,
                      ModelStructure::RtPb5l};
    const auto rec = selection::select_structure(room, cfg);
    CHECK(rec.mean_mape[0] == rec.mean_mape[1]);  // genuinely tied
    CHECK(rec.winner == ModelStructure::RtFull);
}

TEST_CASE("rising noise never lowers the winner's mean CV MAPE (trend)") {
    const double noise_levels[] = {0.0, 15.0, 30.0, 45.0, 60.0};
    std::vector<double> winner_mape;
    for (const double noise : noise_levels) {
        const auto room = linear_room(40, noise, 31);  // same seed: same scenarios
        auto cfg = quick_cfg(32);
        cfg.structures = {ModelStructure::LrNormal};
        const auto rec = selection::select_structure(room, cfg);
        winner_mape.push_back(rec.winner_mean_mape);
    }
    int inversions = 0;
    for (size_t i = 1; i < winner_mape.size(); ++i)
        if (winner_mape[i] < winner_mape[i - 1]) ++inversions;
    CHECK(inversions <= 1);

    // OLS slope of MAPE against the noise level must be positive.
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    const double n = static_cast<double>(winner_mape.size());
    for (size_t i = 0; i < winner_mape.size(); ++i) {
        sx += noise_levels[i];
        sy += winner_mape[i];
        sxy += noise_levels[i] * winner_mape[i];
        sxx += noise_levels[i] * noise_levels[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope > 0.0);
}

TEST_CASE("estimate_total_time reproduces the reported scale") {
    selection::CVConfig cfg;
    cfg.k_folds = 10;
    cfg.n_trials = 10;
    // 44 rooms, 1.568 s summed training time: about 1.92 hours.
    const double t_all = selection::estimate_total_time(44, cfg, {1.568});
    CHECK(t_all / 3600.0 == doctest::Approx(1.92).epsilon(0.01));
    // Without the ANN members (0.093 s): about 6.8 minutes.
    const double t_fast = selection::estimate_total_time(44, cfg, {0.093});
    CHECK(t_fast / 60.0 == doctest::Approx(6.82).epsilon(0.01));
    CHECK(selection::estimate_total_time(0, cfg, {1.0}) == 0.0);
    CHECK(selection::estimate_total_time(44, cfg, {0.0}) == 0.0);
}
