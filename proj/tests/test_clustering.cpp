#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "acbench/clustering.hpp"
#include "acbench/errors.hpp"

using namespace acbench;
using clustering::Point;

namespace {

// Exhaustive 2-partition search: the inertia oracle for small n.
double brute_force_inertia_k2(const std::vector<Point>& pts) {
    const size_t n = pts.size();
    double best = std::numeric_limits<double>::infinity();
    for (uint32_t mask = 1; mask < (1u << n) - 1; ++mask) {
        Point c0{0, 0}, c1{0, 0};
        int n0 = 0, n1 = 0;
        for (size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                c0[0] += pts[i][0];
                c0[1] += pts[i][1];
                ++n0;
            } else {
                c1[0] += pts[i][0];
                c1[1] += pts[i][1];
                ++n1;
            }
        }
        c0[0] /= n0;
        c0[1] /= n0;
        c1[0] /= n1;
        c1[1] /= n1;
        double inertia = 0;
        for (size_t i = 0; i < n; ++i) {
            const Point& c = (mask & (1u << i)) ? c0 : c1;
            inertia += (pts[i][0] - c[0]) * (pts[i][0] - c[0]) +
                       (pts[i][1] - c[1]) * (pts[i][1] - c[1]);
        }
        best = std::min(best, inertia);
    }
    return best;
}

RoomDataset room_with_setpoints(const std::string& id, double area,
                                std::vector<double> setpoints) {
    RoomDataset ds;
    ds.room_id = id;
    ds.area_m2 = area;
    for (const double sp : setpoints) {
        OperationSegment s;
        s.room_id = id;
        s.t_set_mean_c = sp;
        s.p_ac_mean_w = 500;
        s.t_seg_s = 7200;
        s.h_a_mean_pct = 70;
        ds.segments.push_back(s);
    }
    return ds;
}

}  // namespace

TEST_CASE("median_lower conventions") {
    CHECK(clustering::median_lower({24, 25, 26}) == doctest::Approx(25));
    CHECK(clustering::median_lower({24, 25, 26, 27}) == doctest::Approx(25));  // lower middle
    CHECK(clustering::median_lower({26, 24, 27, 25}) == doctest::Approx(25));
    CHECK(clustering::median_lower({5}) == doctest::Approx(5));
    CHECK_THROWS_AS(clustering::median_lower({}), Error);
}

TEST_CASE("build_features z-scores across rooms") {
    std::vector<RoomDataset> rooms{room_with_setpoints("a", 10, {24, 25, 26}),
                                   room_with_setpoints("b", 20, {25, 26, 27, 28}),
                                   room_with_setpoints("c", 30, {26, 27, 28})};
    const auto features = clustering::build_features(rooms);
    REQUIRE(features.size() == 3);
    CHECK(features[0].median_set_c == doctest::Approx(25));
    CHECK(features[1].median_set_c == doctest::Approx(26));  // lower-middle of 4

    double mean0 = 0, mean1 = 0;
    for (const auto& f : features) {
        mean0 += f.normalized[0];
        mean1 += f.normalized[1];
    }
    CHECK(mean0 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mean1 == doctest::Approx(0.0).epsilon(1e-12));

    SUBCASE("one room lands at the origin") {
        const auto solo = clustering::build_features({rooms[0]});
        CHECK(solo[0].normalized[0] == doctest::Approx(0.0));
        CHECK(solo[0].normalized[1] == doctest::Approx(0.0));
    }
}

TEST_CASE("kmeans separates two obvious blobs") {
    const std::vector<Point> pts{{0, 0}, {0, 0.1}, {10, 10}, {10, 10.1}};
    const auto result = clustering::kmeans(pts, 2, Rng(1));
    CHECK(result.labels[0] == result.labels[1]);
    CHECK(result.labels[2] == result.labels[3]);
    CHECK(result.labels[0] != result.labels[2]);
    CHECK(result.inertia == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("kmeans k=n gives zero inertia") {
    const std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const auto result = clustering::kmeans(pts, 4, Rng(2));
    CHECK(result.inertia == doctest::Approx(0.0));
    std::vector<int> sorted = result.labels;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("kmeans inertia is non-increasing across Lloyd iterations") {
    Rng rng(33);
    std::vector<Point> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
    const auto result = clustering::kmeans(pts, 4, Rng(3));
    for (size_t i = 1; i < result.inertia_trace.size(); ++i)
        CHECK(result.inertia_trace[i] <= result.inertia_trace[i - 1] + 1e-9);
}

TEST_CASE("kmeans equals brute force on small instances") {
    Rng rng(44);
    for (int instance = 0; instance < 50; ++instance) {
        const size_t n = 4 + rng.below(5);  // 4..8
        std::vector<Point> pts;
        for (size_t i = 0; i < n; ++i)
            pts.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
        const auto result = clustering::kmeans(pts, 2, Rng(100 + instance));
        const double oracle = brute_force_inertia_k2(pts);
        CHECK(result.inertia == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("duplicated dataset keeps the same centroids") {
    const std::vector<Point> pts{{0, 0}, {0.2, 0}, {7, 7}, {7.3, 7}, {3, 9}, {3.1, 9.2}};
    std::vector<Point> doubled = pts;
    doubled.insert(doubled.end(), pts.begin(), pts.end());

    auto sorted_centroids = [](clustering::KmeansResult r) {
        std::sort(r.centroids.begin(), r.centroids.end());
        return r.centroids;
    };
    const auto a = sorted_centroids(clustering::kmeans(pts, 2, Rng(7)));
    const auto b = sorted_centroids(clustering::kmeans(doubled, 2, Rng(8)));
    for (size_t c = 0; c < 2; ++c) {
        CHECK(a[c][0] == doctest::Approx(b[c][0]).epsilon(1e-9));
        CHECK(a[c][1] == doctest::Approx(b[c][1]).epsilon(1e-9));
    }
}

TEST_CASE("kmeans rejects k > n") {
    CHECK_THROWS_AS(clustering::kmeans({{0, 0}, {1, 1}}, 3, Rng(1)), Error);
}

TEST_CASE("silhouette: two tight far-apart blobs approach 1") {
    std::vector<Point> pts;
    std::vector<int> labels;
    Rng rng(55);
    for (int i = 0; i < 10; ++i) {
        pts.push_back({rng.uniform(0, 0.2), rng.uniform(0, 0.2)});
        labels.push_back(0);
        pts.push_back({rng.uniform(50, 50.2), rng.uniform(50, 50.2)});
        labels.push_back(1);
    }
    CHECK(clustering::silhouette_mean(pts, labels) > 0.95);
}

TEST_CASE("silhouette: identical points split arbitrarily score 0") {
    const std::vector<Point> pts{{1, 1}, {1, 1}, {1, 1}, {1, 1}};
    const std::vector<int> labels{0, 1, 0, 1};
    CHECK(clustering::silhouette_mean(pts, labels) == doctest::Approx(0.0));
}

TEST_CASE("silhouette hand fixture {0,1,10,11}") {
    // s(0)=9.5/10.5, s(1)=8.5/9.5, s(10)=8.5/9.5, s(11)=9.5/10.5
    // mean = 0.8997494...; frozen from the hand arithmetic.
    const std::vector<Point> pts{{0, 0}, {1, 0}, {10, 0}, {11, 0}};
    const std::vector<int> labels{0, 0, 1, 1};
    const double expected = 0.5 * (9.5 / 10.5 + 8.5 / 9.5);
    CHECK(clustering::silhouette_mean(pts, labels) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(clustering::silhouette_mean(pts, labels) == doctest::Approx(0.8997494).epsilon(1e-6));
}

TEST_CASE("silhouette is invariant under label permutation") {
    Rng rng(66);
    std::vector<Point> pts;
    for (int i = 0; i < 30; ++i) pts.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
    const auto result = clustering::kmeans(pts, 3, Rng(9));
    std::vector<int> permuted = result.labels;
    for (auto& l : permuted) l = (l + 1) % 3;
    CHECK(clustering::silhouette_mean(pts, result.labels) ==
          doctest::Approx(clustering::silhouette_mean(pts, permuted)).epsilon(1e-12));
}

TEST_CASE("silhouette needs two clusters") {
    CHECK_THROWS_AS(clustering::silhouette_mean({{0, 0}, {1, 1}}, {0, 0}), Error);
}

TEST_CASE("select_k finds planted structure") {
    SUBCASE("three separated blobs -> k = 3") {
        std::vector<Point> pts;
        Rng rng(77);
        const Point centers[] = {{0, 0}, {10, 0}, {5, 9}};
        for (const auto& c : centers)
            for (int i = 0; i < 5; ++i)
                pts.push_back({c[0] + 0.2 * rng.normal(), c[1] + 0.2 * rng.normal()});
        const auto result = clustering::select_k(pts, 2, 10, 123);
        CHECK(result.k == 3);
        CHECK(result.silhouette_by_k.size() == 9);  // grid 2..10
    }
    SUBCASE("two identical blobs -> k = 2") {
        std::vector<Point> pts;
        Rng rng(88);
        for (int i = 0; i < 6; ++i) {
            pts.push_back({0.05 * rng.normal(), 0.05 * rng.normal()});
            pts.push_back({8 + 0.05 * rng.normal(), 8 + 0.05 * rng.normal()});
        }
        const auto result = clustering::select_k(pts, 2, 10, 124);
        CHECK(result.k == 2);
    }
    SUBCASE("mean silhouette stays within [-1, 1]") {
        std::vector<Point> pts;
        Rng rng(99);
        for (int i = 0; i < 25; ++i) pts.push_back({rng.uniform(0, 4), rng.uniform(0, 4)});
        const auto result = clustering::select_k(pts, 2, 10, 125);
        for (const auto& [k, sil] : result.silhouette_by_k) {
            CHECK(sil >= -1.0);
            CHECK(sil <= 1.0);
        }
    }
}
