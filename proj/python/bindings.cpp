#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acbench/errors.hpp"
#include "acbench/clustering.hpp"
#include "acbench/conditions.hpp"
#include "acbench/metrics.hpp"
#include "acbench/pipeline.hpp"
#include "acbench/regressors.hpp"
#include "acbench/residual.hpp"
#include "acbench/rng.hpp"
#include "acbench/scoring.hpp"
#include "acbench/selection.hpp"
#include "acbench/thermsim.hpp"

namespace py = pybind11;
using namespace acbench;

namespace {

FeatureVector to_features(const std::vector<double>& v) {
    if (v.size() != kNumFactors)
        throw Error(ErrorKind::InvalidSpec, "feature vector must have 7 entries");
    FeatureVector out;
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

regress::TrainedPredictor train_predictor(const std::string& structure,
                                          const std::vector<std::vector<double>>& x,
                                          const std::vector<double>& y, uint64_t seed) {
    const auto s = regress::structure_from_name(structure);
    if (!s) throw Error(ErrorKind::InvalidSpec, "unknown structure " + structure);
    std::vector<FeatureVector> features;
    features.reserve(x.size());
    for (const auto& row : x) features.push_back(to_features(row));
    return regress::train(*s, features, y, Rng::stream(seed, "py-train"));
}

}  // namespace

PYBIND11_MODULE(acbench_py, m) {
    m.doc() = "AC energy-performance benchmarking core (segment physics, "
              "regression zoo, KDE residuals, clustering, scoring)";

    py::register_exception<Error>(m, "AcbenchError");

    // Physics oracle.
    py::class_<thermsim::RoomPhysical>(m, "RoomPhysical")
        .def(py::init<>())
        .def_readwrite("area_m2", &thermsim::RoomPhysical::area_m2)
        .def_readwrite("height_m", &thermsim::RoomPhysical::height_m)
        .def_readwrite("wall_area_m2", &thermsim::RoomPhysical::wall_area_m2)
        .def_readwrite("wall_thickness_m", &thermsim::RoomPhysical::wall_thickness_m)
        .def_readwrite("wall_conductivity", &thermsim::RoomPhysical::wall_conductivity)
        .def_readwrite("eer", &thermsim::RoomPhysical::eer)
        .def_readwrite("solar_to_heat", &thermsim::RoomPhysical::solar_to_heat)
        .def_readwrite("human_heat_w", &thermsim::RoomPhysical::human_heat_w);

    py::class_<thermsim::SegmentScenario>(m, "SegmentScenario")
        .def(py::init<>())
        .def_readwrite("t_seg_s", &thermsim::SegmentScenario::t_seg_s)
        .def_readwrite("t_set_mean_c", &thermsim::SegmentScenario::t_set_mean_c)
        .def_readwrite("t_ri_c", &thermsim::SegmentScenario::t_ri_c)
        .def_readwrite("t_a_mean_c", &thermsim::SegmentScenario::t_a_mean_c)
        .def_readwrite("t_r_mean_c", &thermsim::SegmentScenario::t_r_mean_c)
        .def_readwrite("p_si_mean_wm2", &thermsim::SegmentScenario::p_si_mean_wm2)
        .def_readwrite("h_a_mean_pct", &thermsim::SegmentScenario::h_a_mean_pct);

    m.def("segment_power", &thermsim::segment_power, py::arg("room"), py::arg("scenario"),
          "Segment-average AC power (W) from the integrated thermal balance");

    // Accuracy metrics.
    m.def("mape", [](const std::vector<double>& yh, const std::vector<double>& y) {
        return metrics::mape(yh, y);
    });
    m.def("mae", [](const std::vector<double>& yh, const std::vector<double>& y) {
        return metrics::mae(yh, y);
    });
    m.def("rmse", [](const std::vector<double>& yh, const std::vector<double>& y) {
        return metrics::rmse(yh, y);
    });

    m.def("percentile", [](const std::vector<double>& sample, double p) {
        return conditions::percentile(sample, p);
    });
    m.def("common_range", [](const std::vector<std::vector<double>>& samples) {
        const auto r = conditions::common_range(samples);
        return py::make_tuple(conditions::tier_name(r.tier), r.lo, r.hi);
    });

    // Residual KDE.
    py::class_<residual::ResidualModel>(m, "ResidualModel")
        .def_static("fit", &residual::ResidualModel::fit, py::arg("sample"))
        .def("pdf", &residual::ResidualModel::pdf)
        .def("bandwidth", &residual::ResidualModel::bandwidth)
        .def("sample", [](const residual::ResidualModel& self, size_t count, uint64_t seed) {
            Rng rng(seed);
            return self.sample(count, rng);
        });
    m.def("percent_residuals",
          [](const std::vector<double>& yh, const std::vector<double>& y) {
              return residual::percent_residuals(yh, y);
          });

    // Clustering.
    m.def("kmeans", [](const std::vector<std::vector<double>>& pts, int k, uint64_t seed) {
        std::vector<clustering::Point> points;
        for (const auto& p : pts) {
            if (p.size() != 2) throw Error(ErrorKind::InvalidSpec, "points must be 2-d");
            points.push_back({p[0], p[1]});
        }
        const auto r = clustering::kmeans(points, k, Rng(seed));
        std::vector<std::vector<double>> centroids;
        for (const auto& c : r.centroids) centroids.push_back({c[0], c[1]});
        return py::make_tuple(r.labels, centroids, r.inertia);
    });
    m.def("silhouette_mean",
          [](const std::vector<std::vector<double>>& pts, const std::vector<int>& labels) {
              std::vector<clustering::Point> points;
              for (const auto& p : pts) points.push_back({p[0], p[1]});
              return clustering::silhouette_mean(points, labels);
          });
    m.def("select_k",
          [](const std::vector<std::vector<double>>& pts, int k_min, int k_max, uint64_t seed) {
              std::vector<clustering::Point> points;
              for (const auto& p : pts) points.push_back({p[0], p[1]});
              const auto r = clustering::select_k(points, k_min, k_max, seed);
              return py::make_tuple(r.k, r.labels, r.mean_silhouette, r.silhouette_by_k);
          });

    // Regression zoo.
    py::class_<regress::TrainedPredictor>(m, "TrainedPredictor")
        .def("predict",
             [](const regress::TrainedPredictor& self, const std::vector<double>& x) {
                 return self.predict(to_features(x));
             })
        .def_property_readonly("structure", [](const regress::TrainedPredictor& self) {
            return regress::structure_name(self.structure);
        });
    m.def("train", &train_predictor, py::arg("structure"), py::arg("x"), py::arg("y"),
          py::arg("seed") = 0);
    m.def("structures", [] {
        std::vector<std::string> names;
        for (const auto s : regress::all_structures())
            names.push_back(regress::structure_name(s));
        return names;
    });

    // Scoring.
    m.def("benchmark_scores",
          [](const std::vector<std::vector<double>>& draws_per_room) {
              std::vector<scoring::StochasticEpi> cluster;
              int i = 0;
              for (const auto& draws : draws_per_room) {
                  scoring::StochasticEpi s;
                  s.room_id = "room" + std::to_string(i++);
                  s.draws_w = draws;
                  cluster.push_back(std::move(s));
              }
              const auto reports = scoring::benchmark_scores(0, cluster);
              py::list out;
              for (const auto& r : reports) {
                  py::dict d;
                  d["room_id"] = r.room_id;
                  d["median"] = r.median;
                  d["mean"] = r.mean;
                  d["p5"] = r.p5;
                  d["p95"] = r.p95;
                  d["share_of_draws_best"] = r.share_of_draws_best;
                  d["comparative"] = r.comparative;
                  out.append(std::move(d));
              }
              return out;
          },
          "Per-draw minimum benchmarking over a cluster of draw vectors");

    // Pipeline entry point (paths in, artifacts out).
    m.def("run_pipeline",
          [](const std::string& telemetry, const std::string& weather, const std::string& rooms,
             const std::string& out_dir, uint64_t seed,
             const std::vector<std::string>& structures, int k_folds, int n_trials,
             size_t sample_size, int threads) {
              pipeline::RunConfig cfg;
              cfg.telemetry_path = telemetry;
              cfg.weather_path = weather;
              cfg.rooms_path = rooms;
              cfg.out_dir = out_dir;
              cfg.seed = seed;
              cfg.cv.k_folds = k_folds;
              cfg.cv.n_trials = n_trials;
              cfg.sample_size = sample_size;
              cfg.threads = threads;
              if (!structures.empty()) {
                  cfg.cv.structures.clear();
                  for (const auto& name : structures) {
                      const auto s = regress::structure_from_name(name);
                      if (!s)
                          throw Error(ErrorKind::InvalidSpec, "unknown structure " + name);
                      cfg.cv.structures.push_back(*s);
                  }
              }
              pipeline::cmd_run(cfg);
          },
          py::arg("telemetry"), py::arg("weather"), py::arg("rooms"), py::arg("out_dir"),
          py::arg("seed") = 0, py::arg("structures") = std::vector<std::string>{},
          py::arg("k_folds") = 10, py::arg("n_trials") = 10, py::arg("sample_size") = 1000,
          py::arg("threads") = 1);

    m.def(
        "generate_fleet",
        [](const std::string& out_dir, uint64_t seed, double sigma) {
            thermsim::FleetSpec spec;
            spec.seed = seed;
            spec.sigma = sigma;
            const auto fleet = thermsim::generate_fleet(spec);
            thermsim::write_fleet_csvs(fleet, out_dir, "seed=" + std::to_string(seed));
            return py::make_tuple(fleet.rooms.size(), fleet.segments.size());
        },
        py::arg("out_dir"), py::arg("seed") = 0, py::arg("sigma") = 0.1);
}
