#include "acbench/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "acbench/clustering.hpp"
#include "acbench/conditions.hpp"
#include "acbench/csv.hpp"
#include "acbench/errors.hpp"
#include "acbench/metrics.hpp"
#include "acbench/regressors.hpp"
#include "acbench/residual.hpp"
#include "acbench/scoring.hpp"

namespace acbench::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string RunConfig::canonical() const {
    json doc;
    doc["filter"] = {{"t_seg_min_s", filter.t_seg_min_s},
                     {"t_seg_max_s", filter.t_seg_max_s},
                     {"n_seg_min", filter.n_seg_min},
                     {"exclusive_multisplit", filter.exclusive_multisplit}};
    doc["cooling_only"] = segment_options.cooling_only;
    doc["cv"] = {{"k_folds", cv.k_folds}, {"n_trials", cv.n_trials}};
    json names = json::array();
    for (const auto s : cv.structures) names.push_back(regress::structure_name(s));
    doc["structures"] = names;
    doc["k_range"] = {k_min, k_max};
    doc["sample_size"] = sample_size;
    doc["seed"] = seed;
    return doc.dump();
}

serialize::Provenance RunConfig::provenance() const {
    return {seed, serialize::hash_hex(canonical())};
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Schema, path + ": " + e.what());
    }

    RunConfig cfg;
    cfg.telemetry_path = doc.value("telemetry", "");
    cfg.weather_path = doc.value("weather", "");
    cfg.rooms_path = doc.value("rooms", "");
    cfg.out_dir = doc.value("out", "");
    if (doc.contains("filter")) {
        const auto& f = doc["filter"];
        cfg.filter.t_seg_min_s = f.value("t_seg_min_s", cfg.filter.t_seg_min_s);
        cfg.filter.t_seg_max_s = f.value("t_seg_max_s", cfg.filter.t_seg_max_s);
        cfg.filter.n_seg_min = f.value("n_seg_min", cfg.filter.n_seg_min);
        cfg.filter.exclusive_multisplit =
            f.value("exclusive_multisplit", cfg.filter.exclusive_multisplit);
    }
    cfg.segment_options.cooling_only = doc.value("cooling_only", false);
    if (doc.contains("cv")) {
        cfg.cv.k_folds = doc["cv"].value("k_folds", cfg.cv.k_folds);
        cfg.cv.n_trials = doc["cv"].value("n_trials", cfg.cv.n_trials);
    }
    if (doc.contains("structures")) {
        cfg.cv.structures.clear();
        for (const auto& name : doc["structures"]) {
            const auto s = regress::structure_from_name(name.get<std::string>());
            if (!s) throw Error(ErrorKind::InvalidSpec,
                                "unknown structure " + name.get<std::string>());
            cfg.cv.structures.push_back(*s);
        }
    }
    cfg.k_min = doc.value("k_min", cfg.k_min);
    cfg.k_max = doc.value("k_max", cfg.k_max);
    cfg.sample_size = doc.value("sample_size", cfg.sample_size);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.threads = doc.value("threads", cfg.threads);
    cfg.write_draws = doc.value("write_draws", cfg.write_draws);
    return cfg;
}

void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const size_t n_workers = std::min<size_t>(static_cast<size_t>(threads), count);
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (size_t i = w; i < count; i += n_workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

StagePaths StagePaths::in(const std::string& out_dir) {
    const auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
    StagePaths p;
    p.segments_csv = path("segments.csv");
    p.ingest_report_json = path("ingest_report.json");
    p.predictors_json = path("predictors.json");
    p.selection_json = path("selection.json");
    p.timing_json = path("timing.json");
    p.clusters_json = path("clusters.json");
    p.conditions_json = path("conditions.json");
    p.scores_csv = path("scores.csv");
    p.score_draws_csv = path("scores_draws.csv");
    return p;
}

namespace {

void ensure_out_dir(const RunConfig& cfg) {
    if (cfg.out_dir.empty()) throw Error(ErrorKind::InvalidSpec, "output directory not set");
    fs::create_directories(cfg.out_dir);
}

json reject_counts_json(const ingest::RejectCounts& c) {
    return {{"malformed", c.malformed},
            {"invalid_value", c.invalid_value},
            {"duplicate_timestamp", c.duplicate_timestamp}};
}

}  // namespace

void cmd_ingest(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto paths = StagePaths::in(cfg.out_dir);
    const auto prov = cfg.provenance();

    const auto inputs =
        ingest::parse_inputs(cfg.telemetry_path, cfg.weather_path, cfg.rooms_path);
    ingest::IngestReport report;
    const auto datasets = ingest::run_ingest(inputs, cfg.filter, cfg.segment_options, &report);

    std::vector<OperationSegment> all_segments;
    for (const auto& ds : datasets)
        all_segments.insert(all_segments.end(), ds.segments.begin(), ds.segments.end());
    serialize::write_segments_csv(paths.segments_csv, all_segments, prov);

    json doc;
    doc["version"] = 1;
    doc["provenance"] = {{"seed", prov.seed}, {"config_hash", prov.config_hash}};
    doc["telemetry"] = {{"rows", report.counts.telemetry_rows},
                        {"rejects", reject_counts_json(report.counts.telemetry_rejects)}};
    doc["weather"] = {{"rows", report.counts.weather_rows},
                      {"rejects", reject_counts_json(report.counts.weather_rejects)}};
    doc["rooms_file"] = {{"rows", report.counts.room_rows},
                         {"rejects", reject_counts_json(report.counts.room_rejects)}};
    doc["segments"] = {{"extracted", report.segments_extracted},
                       {"no_weather_coverage", report.segments_no_weather},
                       {"rejected_duration", report.segments_rejected_duration},
                       {"rejected_invalid_factor", report.segments_rejected_invalid_factor},
                       {"rejected_low_power", report.segments_rejected_low_power},
                       {"dropped_multisplit", report.segments_dropped_multisplit},
                       {"kept", report.segments_kept}};
    json dropped = json::array();
    for (const auto& d : report.dropped_rooms)
        dropped.push_back({{"room_id", d.room_id}, {"n_seg", d.n_seg}, {"reason", d.reason}});
    doc["dropped_rooms"] = std::move(dropped);
    doc["rooms_kept"] = report.rooms_kept;

    std::ofstream out(paths.ingest_report_json);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + paths.ingest_report_json);
    out << doc.dump(2) << "\n";
}

void cmd_model(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    if (cfg.filter.n_seg_min < 2 * cfg.cv.k_folds)
        throw Error(ErrorKind::InvalidSpec,
                    "n_seg_min must be at least twice K_cv so folds stay populated");
    const auto paths = StagePaths::in(cfg.out_dir);
    const auto prov = cfg.provenance();

    const auto segments = serialize::read_segments_csv(paths.segments_csv);
    const auto rooms = serialize::read_rooms_csv(cfg.rooms_path);
    auto datasets = serialize::datasets_from_segments(segments, rooms, cfg.filter);
    std::sort(datasets.begin(), datasets.end(),
              [](const auto& a, const auto& b) { return a.room_id < b.room_id; });

    selection::CVConfig cv = cfg.cv;
    cv.seed = cfg.seed;

    std::vector<selection::SelectionRecord> records(datasets.size());
    std::vector<serialize::PredictorBundle> bundles(datasets.size());
    parallel_for(datasets.size(), cfg.threads, [&](size_t i) {
        const auto& ds = datasets[i];
        auto rec = selection::select_structure(ds, cv);

        // Final predictor: the winning structure retrained on all data.
        serialize::PredictorBundle bundle;
        bundle.room_id = ds.room_id;
        bundle.predictor =
            regress::train(rec.winner, ds.feature_matrix(), ds.epi_values(),
                           Rng::stream(cfg.seed, "final", ds.room_id));
        bundle.residuals = residual::ResidualModel::fit(
            residual::percent_residuals(rec.oof_predicted, rec.oof_actual));
        records[i] = std::move(rec);
        bundles[i] = std::move(bundle);
    });

    serialize::write_predictors_json(paths.predictors_json, bundles, prov);
    serialize::write_selection_json(paths.selection_json, records, cv, prov);
    serialize::write_timing_json(paths.timing_json, records, cv, prov);
}

void cmd_cluster(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto paths = StagePaths::in(cfg.out_dir);
    const auto prov = cfg.provenance();

    const auto segments = serialize::read_segments_csv(paths.segments_csv);
    const auto rooms = serialize::read_rooms_csv(cfg.rooms_path);
    auto datasets = serialize::datasets_from_segments(segments, rooms, cfg.filter);
    std::sort(datasets.begin(), datasets.end(),
              [](const auto& a, const auto& b) { return a.room_id < b.room_id; });

    serialize::ClusterArtifact artifact;
    artifact.features = clustering::build_features(datasets);
    std::vector<clustering::Point> points;
    points.reserve(artifact.features.size());
    for (const auto& f : artifact.features) points.push_back(f.normalized);

    if (points.size() == 1) {
        // One qualified room: a degenerate single cluster, flagged by k=1.
        artifact.clustering.k = 1;
        artifact.clustering.labels = {0};
        artifact.clustering.centroids = {points[0]};
        artifact.clustering.mean_silhouette = 0.0;
    } else {
        artifact.clustering =
            clustering::select_k(points, cfg.k_min, cfg.k_max, cfg.seed);
    }
    serialize::write_clusters_json(paths.clusters_json, artifact, prov);
}

void cmd_conditions(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto paths = StagePaths::in(cfg.out_dir);
    const auto prov = cfg.provenance();

    const auto segments = serialize::read_segments_csv(paths.segments_csv);
    const auto rooms = serialize::read_rooms_csv(cfg.rooms_path);
    auto datasets = serialize::datasets_from_segments(segments, rooms, cfg.filter);
    std::sort(datasets.begin(), datasets.end(),
              [](const auto& a, const auto& b) { return a.room_id < b.room_id; });
    const auto clusters = serialize::read_clusters_json(paths.clusters_json);

    std::map<std::string, const RoomDataset*> by_id;
    for (const auto& ds : datasets) by_id[ds.room_id] = &ds;

    std::vector<conditions::UniformConditions> all;
    for (int c = 0; c < clusters.clustering.k; ++c) {
        std::vector<const RoomDataset*> members;
        for (size_t i = 0; i < clusters.features.size(); ++i) {
            if (clusters.clustering.labels[i] != c) continue;
            const auto it = by_id.find(clusters.features[i].room_id);
            if (it == by_id.end())
                throw Error(ErrorKind::Schema,
                            "clusters.json references unknown room " +
                                clusters.features[i].room_id);
            members.push_back(it->second);
        }
        all.push_back(conditions::uniform_conditions(c, members));
    }
    serialize::write_conditions_json(paths.conditions_json, all, prov);
}

void cmd_score(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto paths = StagePaths::in(cfg.out_dir);
    const auto prov = cfg.provenance();

    const auto bundles = serialize::read_predictors_json(paths.predictors_json);
    const auto clusters = serialize::read_clusters_json(paths.clusters_json);
    const auto all_conditions = serialize::read_conditions_json(paths.conditions_json);

    std::map<std::string, const serialize::PredictorBundle*> by_id;
    for (const auto& b : bundles) by_id[b.room_id] = &b;

    std::vector<scoring::ScoreReport> reports;
    for (const auto& uc : all_conditions) {
        std::vector<scoring::StochasticEpi> cluster_samples;
        const FeatureVector uniform = uc.uniform_vector();
        for (size_t i = 0; i < clusters.features.size(); ++i) {
            if (clusters.clustering.labels[i] != uc.cluster_id) continue;
            const auto& room_id = clusters.features[i].room_id;
            const auto it = by_id.find(room_id);
            if (it == by_id.end())
                throw Error(ErrorKind::Schema, "no predictor for room " + room_id);
            const double det = scoring::deterministic_epi(it->second->predictor, uniform);
            Rng rng = Rng::stream(cfg.seed, "score", room_id);
            cluster_samples.push_back(scoring::stochastic_epi(
                room_id, det, it->second->residuals, cfg.sample_size, rng));
        }
        if (cluster_samples.empty()) continue;
        auto cluster_reports = scoring::benchmark_scores(uc.cluster_id, cluster_samples);
        reports.insert(reports.end(), cluster_reports.begin(), cluster_reports.end());
    }
    std::sort(reports.begin(), reports.end(),
              [](const auto& a, const auto& b) { return a.room_id < b.room_id; });

    serialize::write_scores_csv(paths.scores_csv, reports, prov);
    if (cfg.write_draws)
        serialize::write_score_draws_csv(paths.score_draws_csv, reports, prov);
}

void cmd_sweep(const RunConfig& cfg, const SweepRequest& req) {
    ensure_out_dir(cfg);
    const auto paths = StagePaths::in(cfg.out_dir);
    const auto prov = cfg.provenance();

    const auto bundles = serialize::read_predictors_json(paths.predictors_json);
    const auto clusters = serialize::read_clusters_json(paths.clusters_json);
    const auto all_conditions = serialize::read_conditions_json(paths.conditions_json);

    const serialize::PredictorBundle* bundle = nullptr;
    for (const auto& b : bundles)
        if (b.room_id == req.room_id) bundle = &b;
    if (!bundle)
        throw Error(ErrorKind::InvalidSpec, "no predictor for room " + req.room_id);

    int cluster_id = -1;
    for (size_t i = 0; i < clusters.features.size(); ++i)
        if (clusters.features[i].room_id == req.room_id)
            cluster_id = clusters.clustering.labels[i];
    const conditions::UniformConditions* uc = nullptr;
    for (const auto& c : all_conditions)
        if (c.cluster_id == cluster_id) uc = &c;
    if (!uc)
        throw Error(ErrorKind::InvalidSpec, "room " + req.room_id + " not in conditions.json");

    const int factor = factor_index(req.factor);
    if (factor < 0) throw Error(ErrorKind::UnknownFactor, "unknown factor " + req.factor);

    // Historical tier-(d) range of this room, for out-of-range warnings.
    const double* warn_lo = nullptr;
    const double* warn_hi = nullptr;
    double lo = 0, hi = 0;
    for (const auto& table : uc->room_tables) {
        if (table[0].room_id == req.room_id) {
            lo = table[static_cast<size_t>(factor)].quantiles.front();
            hi = table[static_cast<size_t>(factor)].quantiles.back();
            warn_lo = &lo;
            warn_hi = &hi;
        }
    }

    if (req.steps < 1) throw Error(ErrorKind::InvalidSpec, "sweep needs at least one step");
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(req.steps));
    for (int i = 0; i < req.steps; ++i)
        grid.push_back(req.steps == 1
                           ? req.from
                           : req.from + (req.to - req.from) * i / (req.steps - 1));

    int outside = 0;
    const auto points = scoring::factor_sweep(bundle->predictor, uc->uniform_vector(),
                                              req.factor, grid, warn_lo, warn_hi, &outside);

    const std::string out_path =
        req.out_csv.empty() ? (fs::path(cfg.out_dir) / "sweep.csv").string() : req.out_csv;
    csv::Writer w(out_path);
    w.comment(prov.comment());
    if (outside > 0)
        w.comment("warning: " + std::to_string(outside) +
                  " grid points outside the room's historical range");
    w.row({"room_id", "factor", "value", "p_hat_w"});
    for (const auto& p : points)
        w.row({req.room_id, req.factor, csv::format_double(p.factor_value),
               csv::format_double(p.predicted_w)});
}

void cmd_run(const RunConfig& cfg) {
    cmd_ingest(cfg);
    cmd_model(cfg);
    cmd_cluster(cfg);
    cmd_conditions(cfg);
    cmd_score(cfg);
}

void cmd_report(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto paths = StagePaths::in(cfg.out_dir);
    const auto prov = cfg.provenance();

    // CV-MAPE quantile table per structure (box-plot data).
    {
        std::ifstream in(paths.selection_json);
        if (!in) throw Error(ErrorKind::Io, "cannot open " + paths.selection_json);
        json doc;
        in >> doc;
        const auto names = doc.at("structures").get<std::vector<std::string>>();
        std::vector<std::vector<double>> per_structure(names.size());
        for (const auto& room : doc.at("rooms")) {
            const auto& means = room.at("mean_cv_mape");
            // Failed structures serialize as null; they drop out of the table.
            for (size_t s = 0; s < means.size() && s < names.size(); ++s)
                if (means[s].is_number() && std::isfinite(means[s].get<double>()))
                    per_structure[s].push_back(means[s].get<double>());
        }
        csv::Writer w((fs::path(cfg.out_dir) / "report_mape_quantiles.csv").string());
        w.comment(prov.comment());
        w.row({"structure", "min", "p25", "p50", "p75", "max", "rooms"});
        for (size_t s = 0; s < names.size(); ++s) {
            if (per_structure[s].empty()) {
                w.row({names[s], "", "", "", "", "", "0"});
                continue;
            }
            const auto& v = per_structure[s];
            w.row({names[s], csv::format_double(conditions::percentile(v, 0)),
                   csv::format_double(conditions::percentile(v, 25)),
                   csv::format_double(conditions::percentile(v, 50)),
                   csv::format_double(conditions::percentile(v, 75)),
                   csv::format_double(conditions::percentile(v, 100)),
                   std::to_string(v.size())});
        }
    }

    // Score comparison: historical-ratio diagnostics vs. the stochastic score.
    {
        const auto segments = serialize::read_segments_csv(paths.segments_csv);
        const auto clusters = serialize::read_clusters_json(paths.clusters_json);
        const auto scores = serialize::read_scores_csv(paths.scores_csv);

        std::map<std::string, std::vector<double>> hist;
        for (const auto& s : segments) hist[s.room_id].push_back(s.p_ac_mean_w);
        std::map<std::string, double> median_hist;
        for (auto& [room_id, v] : hist)
            median_hist[room_id] = conditions::percentile(v, 50);

        std::map<std::string, int> cluster_of;
        for (size_t i = 0; i < clusters.features.size(); ++i)
            cluster_of[clusters.features[i].room_id] = clusters.clustering.labels[i];

        double global_best = std::numeric_limits<double>::infinity();
        std::map<int, double> cluster_best;
        for (const auto& [room_id, median] : median_hist) {
            global_best = std::min(global_best, median);
            const auto it = cluster_of.find(room_id);
            if (it != cluster_of.end()) {
                const auto c = cluster_best.find(it->second);
                if (c == cluster_best.end() || median < c->second)
                    cluster_best[it->second] = median;
            }
        }

        csv::Writer w((fs::path(cfg.out_dir) / "report_scores.csv").string());
        w.comment(prov.comment());
        w.comment("type_a/type_b are min-median-over-median historical power ratios "
                  "(global / per cluster); eta_median is the stochastic score");
        w.row({"room_id", "cluster_id", "type_a", "type_b", "eta_median", "eta_minus_type_b"});
        for (const auto& row : scores) {
            const double median = median_hist.count(row.room_id)
                                      ? median_hist[row.room_id]
                                      : std::numeric_limits<double>::quiet_NaN();
            const double type_a = global_best / median;
            const double type_b = cluster_best.count(row.cluster_id)
                                      ? cluster_best[row.cluster_id] / median
                                      : std::numeric_limits<double>::quiet_NaN();
            w.row({row.room_id, std::to_string(row.cluster_id), csv::format_double(type_a),
                   csv::format_double(type_b), csv::format_double(row.median),
                   csv::format_double(row.median - type_b)});
        }
    }
}

}  // namespace acbench::pipeline
