#pragma once

#include <map>
#include <string>
#include <vector>

#include "acbench/clustering.hpp"
#include "acbench/conditions.hpp"
#include "acbench/ingest.hpp"
#include "acbench/regressors.hpp"
#include "acbench/residual.hpp"
#include "acbench/scoring.hpp"
#include "acbench/selection.hpp"
#include "acbench/types.hpp"

namespace acbench::serialize {

/// Seed + config-hash line embedded at the top of every artifact.
struct Provenance {
    uint64_t seed = 0;
    std::string config_hash;

    std::string comment() const { return "seed=" + std::to_string(seed) + " config_hash=" + config_hash; }
};

/// FNV-1a over a canonical string; used to stamp artifacts with the config.
std::string hash_hex(const std::string& canonical);

// --- segments.csv ------------------------------------------------------

void write_segments_csv(const std::string& path, const std::vector<OperationSegment>& segments,
                        const Provenance& prov);
std::vector<OperationSegment> read_segments_csv(const std::string& path);

/// Groups segments by room and joins room areas; same checks as filter_rooms.
std::vector<RoomDataset> datasets_from_segments(const std::vector<OperationSegment>& segments,
                                                const std::vector<RoomMeta>& rooms,
                                                const FilterConfig& cfg);

std::vector<RoomMeta> read_rooms_csv(const std::string& path);

// --- predictors.json ----------------------------------------------------

struct PredictorBundle {
    std::string room_id;
    regress::TrainedPredictor predictor;
    residual::ResidualModel residuals;
};

void write_predictors_json(const std::string& path, const std::vector<PredictorBundle>& bundles,
                           const Provenance& prov);
std::vector<PredictorBundle> read_predictors_json(const std::string& path);

// --- selection.json / timing.json ----------------------------------------

void write_selection_json(const std::string& path,
                          const std::vector<selection::SelectionRecord>& records,
                          const selection::CVConfig& cfg, const Provenance& prov);

void write_timing_json(const std::string& path,
                       const std::vector<selection::SelectionRecord>& records,
                       const selection::CVConfig& cfg, const Provenance& prov);

// --- clusters.json --------------------------------------------------------

struct ClusterArtifact {
    clustering::Clustering clustering;
    std::vector<clustering::RoomFeature> features;  // row-aligned with labels
};

void write_clusters_json(const std::string& path, const ClusterArtifact& artifact,
                         const Provenance& prov);
ClusterArtifact read_clusters_json(const std::string& path);

// --- conditions.json -------------------------------------------------------

void write_conditions_json(const std::string& path,
                           const std::vector<conditions::UniformConditions>& all,
                           const Provenance& prov);
std::vector<conditions::UniformConditions> read_conditions_json(const std::string& path);

// --- scores.csv -------------------------------------------------------------

void write_scores_csv(const std::string& path, const std::vector<scoring::ScoreReport>& reports,
                      const Provenance& prov);
void write_score_draws_csv(const std::string& path,
                           const std::vector<scoring::ScoreReport>& reports,
                           const Provenance& prov);

struct ScoreRow {
    std::string room_id;
    int cluster_id = 0;
    double median = 0, mean = 0, p5 = 0, p95 = 0, share_best = 0;
    bool comparative = true;
};
std::vector<ScoreRow> read_scores_csv(const std::string& path);

}  // namespace acbench::serialize
