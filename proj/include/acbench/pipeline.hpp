#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acbench/ingest.hpp"
#include "acbench/selection.hpp"
#include "acbench/serialize.hpp"
#include "acbench/types.hpp"

namespace acbench::pipeline {

/**
 * Effective configuration of a run. Stage artifacts are the only interface
 * between stages; cmd_run chains the stage functions through the files they
 * write, so a composed run and a staged run are identical by construction.
 * The thread count is excluded from the config hash: it must never change
 * results.
 */
struct RunConfig {
    std::string telemetry_path;
    std::string weather_path;
    std::string rooms_path;
    std::string out_dir;

    FilterConfig filter;
    ingest::SegmentOptions segment_options;
    selection::CVConfig cv;
    int k_min = 2;
    int k_max = 10;
    size_t sample_size = 1000;  // S
    uint64_t seed = 0;
    int threads = 1;
    bool write_draws = false;

    /// Canonical string of everything that may alter numeric outputs.
    std::string canonical() const;
    serialize::Provenance provenance() const;
};

/// Reads a JSON config file into a RunConfig (missing keys keep defaults).
RunConfig load_run_config(const std::string& path);

/// Deterministic parallel loop: indices are pre-chunked, results must be
/// written by index. Rethrows the first worker exception.
void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn);

struct StagePaths {
    std::string segments_csv;
    std::string ingest_report_json;
    std::string predictors_json;
    std::string selection_json;
    std::string timing_json;
    std::string clusters_json;
    std::string conditions_json;
    std::string scores_csv;
    std::string score_draws_csv;

    static StagePaths in(const std::string& out_dir);
};

/// ingest: input CSVs -> segments.csv + ingest_report.json
void cmd_ingest(const RunConfig& cfg);

/// model: segments.csv -> predictors.json + selection.json + timing.json
void cmd_model(const RunConfig& cfg);

/// cluster: segments.csv + rooms.csv -> clusters.json
void cmd_cluster(const RunConfig& cfg);

/// conditions: segments.csv + clusters.json -> conditions.json
void cmd_conditions(const RunConfig& cfg);

/// score: predictors.json + clusters.json + conditions.json -> scores.csv
void cmd_score(const RunConfig& cfg);

struct SweepRequest {
    std::string room_id;
    std::string factor;
    double from = 0.0;
    double to = 0.0;
    int steps = 11;
    std::string out_csv;
};

/// sweep: predictors.json + conditions.json + segments.csv -> sweep CSV
void cmd_sweep(const RunConfig& cfg, const SweepRequest& req);

/// run: the full composition, each stage consuming the previous artifacts.
void cmd_run(const RunConfig& cfg);

/// report: plot-data quantile tables (CV-MAPE per structure, score comparison).
void cmd_report(const RunConfig& cfg);

}  // namespace acbench::pipeline
