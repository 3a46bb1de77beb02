#include <doctest.h>

#include <filesystem>
#include <vector>

#include "acbench/rng.hpp"
#include "acbench/serialize.hpp"

using namespace acbench;

namespace {

namespace fs = std::filesystem;

struct TmpDir {
    fs::path dir;
    TmpDir() {
        dir = fs::temp_directory_path() /
              ("acbench_ser_" + std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::create_directories(dir);
    }
    ~TmpDir() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::vector<FeatureVector> random_features(size_t n, Rng& rng) {
    std::vector<FeatureVector> x(n);
    for (auto& row : x)
        row = {rng.uniform(26, 36), rng.uniform(40, 95),    rng.uniform(0, 800),
               rng.uniform(25, 34), rng.uniform(20, 28),    rng.uniform(3600, 30000),
               rng.uniform(18, 28)};
    return x;
}

}  // namespace

TEST_CASE("segments.csv round trip is exact") {
    TmpDir tmp;
    Rng rng(1);
    std::vector<OperationSegment> segments;
    for (int i = 0; i < 25; ++i) {
        OperationSegment s;
        s.room_id = i % 2 ? "a" : "b";
        s.start = 1000 + i * 50000;
        s.end = s.start + 7200;
        s.t_seg_s = 7200;
        s.p_ac_mean_w = rng.uniform(1, 900);
        s.t_a_mean_c = rng.uniform(26, 36);
        s.h_a_mean_pct = rng.uniform(40, 95);
        s.p_si_mean_wm2 = rng.uniform(0, 800);
        s.t_ri_c = rng.uniform(25, 34);
        s.t_r_mean_c = rng.uniform(20, 28);
        s.t_set_mean_c = rng.uniform(18, 28);
        segments.push_back(s);
    }
    const auto path = tmp.path("segments.csv");
    serialize::write_segments_csv(path, segments, {42, "cafe"});
    const auto back = serialize::read_segments_csv(path);
    REQUIRE(back.size() == segments.size());
    for (size_t i = 0; i < segments.size(); ++i) {
        CHECK(back[i].room_id == segments[i].room_id);
        CHECK(back[i].start == segments[i].start);
        // Shortest-round-trip formatting: doubles come back bit-identical.
        CHECK(back[i].p_ac_mean_w == segments[i].p_ac_mean_w);
        CHECK(back[i].t_a_mean_c == segments[i].t_a_mean_c);
        CHECK(back[i].t_seg_s == segments[i].t_seg_s);
    }
}

TEST_CASE("predictor JSON round trip preserves predictions bit-exactly") {
    TmpDir tmp;
    Rng rng(2);
    const auto x = random_features(30, rng);
    std::vector<double> y;
    for (const auto& row : x) y.push_back(120.0 + 9.0 * row[0] + 0.05 * row[5]);

    const regress::ModelStructure structures[] = {
        regress::ModelStructure::LrNormal, regress::ModelStructure::LrRobust,
        regress::ModelStructure::SvrGkn, regress::ModelStructure::RtFull,
        regress::ModelStructure::AnnL1S5};

    std::vector<serialize::PredictorBundle> bundles;
    int idx = 0;
    for (const auto s : structures) {
        serialize::PredictorBundle b;
        b.room_id = "room" + std::to_string(idx++);
        b.predictor = regress::train(s, x, y, Rng::stream(3, "t", idx));
        std::vector<double> sample(20);
        for (auto& v : sample) v = 0.1 * rng.normal();
        b.residuals = residual::ResidualModel::fit(sample);
        bundles.push_back(std::move(b));
    }

    const auto path = tmp.path("predictors.json");
    serialize::write_predictors_json(path, bundles, {7, "beef"});
    const auto back = serialize::read_predictors_json(path);
    REQUIRE(back.size() == bundles.size());

    Rng probe_rng(4);
    const auto probes = random_features(10, probe_rng);
    for (size_t i = 0; i < bundles.size(); ++i) {
        CHECK(back[i].room_id == bundles[i].room_id);
        CHECK(back[i].predictor.structure == bundles[i].predictor.structure);
        for (const auto& probe : probes)
            CHECK(back[i].predictor.predict(probe) == bundles[i].predictor.predict(probe));
        CHECK(back[i].residuals.bandwidth() == bundles[i].residuals.bandwidth());
        CHECK(back[i].residuals.points() == bundles[i].residuals.points());
    }
}

TEST_CASE("clusters and conditions JSON round trips") {
    TmpDir tmp;

    serialize::ClusterArtifact artifact;
    artifact.features = {{"a", 12.0, 24.0, {-1.0, -0.5}},
                         {"b", 13.0, 24.5, {-0.8, 0.5}},
                         {"c", 30.0, 26.0, {1.8, 0.0}}};
    artifact.clustering.k = 2;
    artifact.clustering.labels = {0, 0, 1};
    artifact.clustering.centroids = {{-0.9, 0.0}, {1.8, 0.0}};
    artifact.clustering.mean_silhouette = 0.83;
    artifact.clustering.silhouette_by_k = {{2, 0.83}, {3, 0.4}};

    const auto cpath = tmp.path("clusters.json");
    serialize::write_clusters_json(cpath, artifact, {1, "aa"});
    const auto cback = serialize::read_clusters_json(cpath);
    CHECK(cback.clustering.k == 2);
    CHECK(cback.clustering.labels == artifact.clustering.labels);
    CHECK(cback.features.size() == 3);
    CHECK(cback.features[2].room_id == "c");
    CHECK(cback.clustering.mean_silhouette == doctest::Approx(0.83));
    CHECK(cback.clustering.silhouette_by_k.size() == 2);

    // conditions.json
    RoomDataset a, b;
    a.room_id = "a";
    b.room_id = "b";
    Rng rng(5);
    for (int i = 0; i < 15; ++i) {
        OperationSegment s;
        s.t_a_mean_c = rng.uniform(28, 33);
        s.h_a_mean_pct = rng.uniform(50, 90);
        s.p_si_mean_wm2 = rng.uniform(0, 600);
        s.t_ri_c = rng.uniform(26, 32);
        s.t_r_mean_c = rng.uniform(21, 27);
        s.t_seg_s = rng.uniform(3600, 30000);
        s.t_set_mean_c = rng.uniform(20, 27);
        a.segments.push_back(s);
        s.t_a_mean_c += 0.3;
        b.segments.push_back(s);
    }
    const auto uc = conditions::uniform_conditions(0, {&a, &b});
    const auto upath = tmp.path("conditions.json");
    serialize::write_conditions_json(upath, {uc}, {1, "aa"});
    const auto uback = serialize::read_conditions_json(upath);
    REQUIRE(uback.size() == 1);
    for (int f = 0; f < kNumFactors; ++f) {
        CHECK(uback[0].factors[static_cast<size_t>(f)].uniform ==
              uc.factors[static_cast<size_t>(f)].uniform);
        CHECK(uback[0].factors[static_cast<size_t>(f)].range.tier ==
              uc.factors[static_cast<size_t>(f)].range.tier);
    }
    CHECK(uback[0].room_tables.size() == 2);
}

TEST_CASE("config hash is stable and sensitive") {
    const auto h1 = serialize::hash_hex("abc");
    const auto h2 = serialize::hash_hex("abc");
    const auto h3 = serialize::hash_hex("abd");
    CHECK(h1 == h2);
    CHECK(h1 != h3);
    CHECK(h1.size() == 16);
}
