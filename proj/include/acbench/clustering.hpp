#pragma once

#include <string>
#include <vector>

#include "acbench/rng.hpp"
#include "acbench/types.hpp"

namespace acbench::clustering {

using Point = std::array<double, 2>;

struct RoomFeature {
    std::string room_id;
    double area_m2 = 0.0;
    double median_set_c = 0.0;  // lower-middle median of historical T_set means
    Point normalized{};         // z-scored across rooms
};

/// Lower-middle median: for even counts the lower of the two middle values,
/// so the median is always an observed historical value.
double median_lower(std::vector<double> values);

/// [A_r, median(T_set)] per room, z-scored across rooms (zero-variance
/// features pass through centered).
std::vector<RoomFeature> build_features(const std::vector<RoomDataset>& rooms);

struct KmeansResult {
    std::vector<int> labels;         // in [0, k)
    std::vector<Point> centroids;    // size k
    double inertia = 0.0;
    std::vector<double> inertia_trace;  // per accepted Lloyd iteration
};

/**
 * Lloyd's k-means with k-means++ seeding, 10 restarts (lowest inertia wins,
 * ties to the earlier restart), at most 300 iterations per restart, empty
 * clusters repaired by stealing the farthest point. Deterministic for a
 * fixed rng. Throws KExceedsN when k > n.
 */
KmeansResult kmeans(const std::vector<Point>& points, int k, Rng rng);

/**
 * Mean silhouette over all points: s = (b-a)/max(a,b) with a the mean
 * intra-cluster distance (excluding self) and b the best neighboring
 * cluster's mean distance. Singletons score 0; 0/0 counts as 0.
 * Throws SingleCluster when fewer than 2 clusters are present.
 */
double silhouette_mean(const std::vector<Point>& points, const std::vector<int>& labels);

struct Clustering {
    int k = 0;
    std::vector<int> labels;
    std::vector<Point> centroids;            // normalized space
    double mean_silhouette = 0.0;
    std::vector<std::pair<int, double>> silhouette_by_k;  // the full table
};

/**
 * Runs kmeans for each k in [k_min, k_max] and keeps the best mean
 * silhouette (ties prefer the smaller k). k_max is clamped to n.
 */
Clustering select_k(const std::vector<Point>& points, int k_min, int k_max, uint64_t seed);

}  // namespace acbench::clustering
