#include "acbench/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acbench/errors.hpp"

namespace acbench::clustering {

double median_lower(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorKind::EmptySample, "median of empty sample");
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

std::vector<RoomFeature> build_features(const std::vector<RoomDataset>& rooms) {
    std::vector<RoomFeature> features;
    features.reserve(rooms.size());
    for (const auto& room : rooms) {
        RoomFeature f;
        f.room_id = room.room_id;
        f.area_m2 = room.area_m2;
        f.median_set_c = median_lower(room.factor_history(kSetPoint));
        features.push_back(std::move(f));
    }

    // z-score each coordinate across rooms; zero variance passes through
    // centered (a single room lands exactly on the origin).
    const double n = static_cast<double>(features.size());
    for (int coord = 0; coord < 2; ++coord) {
        double mean = 0.0;
        for (const auto& f : features) mean += (coord == 0 ? f.area_m2 : f.median_set_c);
        mean /= n;
        double ss = 0.0;
        for (const auto& f : features) {
            const double d = (coord == 0 ? f.area_m2 : f.median_set_c) - mean;
            ss += d * d;
        }
        const double std = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        const double scale = std > 0.0 ? std : 1.0;
        for (auto& f : features)
            f.normalized[static_cast<size_t>(coord)] =
                ((coord == 0 ? f.area_m2 : f.median_set_c) - mean) / scale;
    }
    return features;
}

namespace {

double sq_dist(const Point& a, const Point& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

std::vector<Point> seed_plus_plus(const std::vector<Point>& points, int k, Rng& rng) {
    std::vector<Point> centroids;
    centroids.reserve(static_cast<size_t>(k));
    centroids.push_back(points[static_cast<size_t>(rng.below(points.size()))]);

    std::vector<double> d2(points.size());
    while (centroids.size() < static_cast<size_t>(k)) {
        double total = 0.0;
        for (size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // All remaining mass sits on existing centroids; any point works.
            centroids.push_back(points[static_cast<size_t>(rng.below(points.size()))]);
            continue;
        }
        double target = rng.uniform() * total;
        size_t chosen = points.size() - 1;
        for (size_t i = 0; i < points.size(); ++i) {
            target -= d2[i];
            if (target <= 0.0) {
                chosen = i;
                break;
            }
        }
        centroids.push_back(points[chosen]);
    }
    return centroids;
}

KmeansResult lloyd(const std::vector<Point>& points, int k, Rng& rng) {
    constexpr int kMaxIterations = 300;
    const size_t n = points.size();

    KmeansResult result;
    result.centroids = seed_plus_plus(points, k, rng);
    result.labels.assign(n, -1);

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        bool changed = false;
        for (size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(points[i], result.centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = sq_dist(points[i], result.centroids[static_cast<size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (result.labels[i] != best) {
                result.labels[i] = best;
                changed = true;
            }
        }

        // Empty clusters steal the point farthest from its centroid.
        std::vector<int> counts(static_cast<size_t>(k), 0);
        for (const int l : result.labels) ++counts[static_cast<size_t>(l)];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) continue;
            size_t farthest = 0;
            double far_d = -1.0;
            for (size_t i = 0; i < n; ++i) {
                if (counts[static_cast<size_t>(result.labels[i])] <= 1) continue;
                const double d =
                    sq_dist(points[i],
                            result.centroids[static_cast<size_t>(result.labels[i])]);
                if (d > far_d) {
                    far_d = d;
                    farthest = i;
                }
            }
            --counts[static_cast<size_t>(result.labels[farthest])];
            result.labels[farthest] = c;
            ++counts[static_cast<size_t>(c)];
            changed = true;
        }

        for (int c = 0; c < k; ++c) result.centroids[static_cast<size_t>(c)] = {0.0, 0.0};
        for (size_t i = 0; i < n; ++i) {
            result.centroids[static_cast<size_t>(result.labels[i])][0] += points[i][0];
            result.centroids[static_cast<size_t>(result.labels[i])][1] += points[i][1];
        }
        for (int c = 0; c < k; ++c) {
            result.centroids[static_cast<size_t>(c)][0] /= counts[static_cast<size_t>(c)];
            result.centroids[static_cast<size_t>(c)][1] /= counts[static_cast<size_t>(c)];
        }

        double inertia = 0.0;
        for (size_t i = 0; i < n; ++i)
            inertia += sq_dist(points[i],
                               result.centroids[static_cast<size_t>(result.labels[i])]);
        result.inertia = inertia;
        result.inertia_trace.push_back(inertia);

        if (!changed) break;
    }
    return result;
}

}  // namespace

KmeansResult kmeans(const std::vector<Point>& points, int k, Rng rng) {
    if (k < 1) throw Error(ErrorKind::InvalidSpec, "kmeans needs k >= 1");
    if (static_cast<size_t>(k) > points.size())
        throw Error(ErrorKind::KExceedsN, "kmeans with k larger than point count");

    constexpr int kRestarts = 10;
    KmeansResult best;
    bool have = false;
    for (int restart = 0; restart < kRestarts; ++restart) {
        KmeansResult candidate = lloyd(points, k, rng);
        if (!have || candidate.inertia < best.inertia) {
            best = std::move(candidate);
            have = true;
        }
    }
    return best;
}

double silhouette_mean(const std::vector<Point>& points, const std::vector<int>& labels) {
    const size_t n = points.size();
    if (n != labels.size())
        throw Error(ErrorKind::SampleSizeMismatch, "silhouette labels/points mismatch");

    int k = 0;
    for (const int l : labels) k = std::max(k, l + 1);
    std::vector<int> counts(static_cast<size_t>(k), 0);
    for (const int l : labels) ++counts[static_cast<size_t>(l)];
    int nonempty = 0;
    for (const int c : counts)
        if (c > 0) ++nonempty;
    if (nonempty < 2) throw Error(ErrorKind::SingleCluster, "silhouette needs >= 2 clusters");

    double total = 0.0;
    std::vector<double> mean_dist(static_cast<size_t>(k));
    for (size_t i = 0; i < n; ++i) {
        const int own = labels[i];
        if (counts[static_cast<size_t>(own)] == 1) continue;  // singleton scores 0

        std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            mean_dist[static_cast<size_t>(labels[j])] += std::sqrt(sq_dist(points[i], points[j]));
        }
        const double a =
            mean_dist[static_cast<size_t>(own)] / (counts[static_cast<size_t>(own)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own || counts[static_cast<size_t>(c)] == 0) continue;
            b = std::min(b, mean_dist[static_cast<size_t>(c)] / counts[static_cast<size_t>(c)]);
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;  // 0/0 := 0
    }
    return total / static_cast<double>(n);
}

Clustering select_k(const std::vector<Point>& points, int k_min, int k_max, uint64_t seed) {
    const int n = static_cast<int>(points.size());
    k_max = std::min(k_max, n);
    if (k_min < 2) k_min = 2;
    if (k_max < k_min)
        throw Error(ErrorKind::KExceedsN, "select_k: no feasible k in range");

    Clustering best;
    for (int k = k_min; k <= k_max; ++k) {
        auto result = kmeans(points, k, Rng::stream(seed, "kmeans", k));
        const double sil = silhouette_mean(points, result.labels);
        best.silhouette_by_k.emplace_back(k, sil);
        if (best.k == 0 || sil > best.mean_silhouette) {  // ties keep the smaller k
            best.k = k;
            best.labels = std::move(result.labels);
            best.centroids = std::move(result.centroids);
            best.mean_silhouette = sil;
        }
    }
    return best;
}

}  // namespace acbench::clustering
