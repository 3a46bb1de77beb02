#include "acbench/serialize.hpp"

#include <fstream>

#include <json.hpp>

#include "acbench/csv.hpp"
#include "acbench/errors.hpp"

namespace acbench::serialize {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Schema, path + ": " + e.what());
    }
    return doc;
}

void dump_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
    out << doc.dump(2) << "\n";
}

json provenance_json(const Provenance& prov) {
    return json{{"seed", prov.seed}, {"config_hash", prov.config_hash}};
}

json feature_vector_json(const FeatureVector& v) {
    return json(std::vector<double>(v.begin(), v.end()));
}

FeatureVector feature_vector_from(const json& j) {
    const auto vec = j.get<std::vector<double>>();
    if (vec.size() != kNumFactors)
        throw Error(ErrorKind::Schema, "feature vector must have 7 entries");
    FeatureVector out;
    std::copy(vec.begin(), vec.end(), out.begin());
    return out;
}

}  // namespace

std::string hash_hex(const std::string& canonical) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : canonical) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_segments_csv(const std::string& path, const std::vector<OperationSegment>& segments,
                        const Provenance& prov) {
    csv::Writer w(path);
    w.comment(prov.comment());
    w.row({"room_id", "start", "end", "t_seg_s", "p_ac_w", "t_a_c", "h_a_pct", "p_si_wm2",
           "t_ri_c", "t_r_c", "t_set_c"});
    for (const auto& s : segments) {
        w.row({s.room_id, std::to_string(s.start), std::to_string(s.end),
               csv::format_double(s.t_seg_s), csv::format_double(s.p_ac_mean_w),
               csv::format_double(s.t_a_mean_c), csv::format_double(s.h_a_mean_pct),
               csv::format_double(s.p_si_mean_wm2), csv::format_double(s.t_ri_c),
               csv::format_double(s.t_r_mean_c), csv::format_double(s.t_set_mean_c)});
    }
}

std::vector<OperationSegment> read_segments_csv(const std::string& path) {
    csv::Reader r(path);
    const size_t c_room = r.require_column("room_id");
    const size_t c_start = r.require_column("start");
    const size_t c_end = r.require_column("end");
    const size_t c_tseg = r.require_column("t_seg_s");
    const size_t c_p = r.require_column("p_ac_w");
    const size_t c_ta = r.require_column("t_a_c");
    const size_t c_ha = r.require_column("h_a_pct");
    const size_t c_si = r.require_column("p_si_wm2");
    const size_t c_tri = r.require_column("t_ri_c");
    const size_t c_tr = r.require_column("t_r_c");
    const size_t c_tset = r.require_column("t_set_c");

    std::vector<OperationSegment> out;
    while (auto row = r.next_row()) {
        if (row->size() < 11)
            throw Error(ErrorKind::Schema, path + ": short row at line " +
                                               std::to_string(r.line_number()));
        const auto field = [&](size_t c) {
            const auto v = csv::parse_double((*row)[c]);
            if (!v)
                throw Error(ErrorKind::Schema, path + ": bad number at line " +
                                                   std::to_string(r.line_number()));
            return *v;
        };
        OperationSegment s;
        s.room_id = (*row)[c_room];
        s.start = static_cast<Timestamp>(field(c_start));
        s.end = static_cast<Timestamp>(field(c_end));
        s.t_seg_s = field(c_tseg);
        s.p_ac_mean_w = field(c_p);
        s.t_a_mean_c = field(c_ta);
        s.h_a_mean_pct = field(c_ha);
        s.p_si_mean_wm2 = field(c_si);
        s.t_ri_c = field(c_tri);
        s.t_r_mean_c = field(c_tr);
        s.t_set_mean_c = field(c_tset);
        out.push_back(std::move(s));
    }
    if (out.empty()) throw Error(ErrorKind::EmptyInput, path + ": no segments");
    return out;
}

std::vector<RoomDataset> datasets_from_segments(const std::vector<OperationSegment>& segments,
                                                const std::vector<RoomMeta>& rooms,
                                                const FilterConfig& cfg) {
    std::map<std::string, std::vector<OperationSegment>> per_room;
    for (const auto& s : segments) per_room[s.room_id].push_back(s);
    return ingest::filter_rooms(per_room, rooms, cfg, nullptr);
}

std::vector<RoomMeta> read_rooms_csv(const std::string& path) {
    csv::Reader r(path);
    const size_t c_room = r.require_column("room_id");
    const size_t c_area = r.require_column("area_m2");
    const auto c_orient = r.find_column("orientation");
    std::vector<RoomMeta> out;
    while (auto row = r.next_row()) {
        if (row->size() <= std::max(c_room, c_area)) continue;
        const auto area = csv::parse_double((*row)[c_area]);
        if (!area || !((*area) > 0)) continue;
        RoomMeta meta;
        meta.room_id = (*row)[c_room];
        meta.area_m2 = *area;
        if (c_orient && row->size() > *c_orient) meta.orientation = (*row)[*c_orient];
        out.push_back(std::move(meta));
    }
    if (out.empty()) throw Error(ErrorKind::EmptyInput, path + ": no rooms");
    return out;
}

namespace {

json predictor_json(const regress::TrainedPredictor& p) {
    json doc;
    doc["structure"] = regress::structure_name(p.structure);
    doc["normalizer"] = {{"mean", feature_vector_json(p.normalizer.means())},
                         {"std", feature_vector_json(p.normalizer.stds())}};
    doc["training_rows"] = p.training_rows;
    doc["flags"] = {{"solver_nonconvergence", p.flags.solver_nonconvergence},
                    {"degenerate_design", p.flags.degenerate_design}};

    if (const auto* lin = std::get_if<regress::LinearModel>(&p.params)) {
        doc["kind"] = "linear";
        doc["weights"] = std::vector<double>(lin->weights.begin(), lin->weights.end());
        doc["bias"] = lin->bias;
    } else if (const auto* svr = std::get_if<regress::SvrModel>(&p.params)) {
        doc["kind"] = "svr";
        doc["gaussian"] = svr->gaussian;
        doc["gamma"] = svr->gamma;
        doc["bias"] = svr->bias;
        doc["y_mean"] = svr->y_mean;
        doc["y_std"] = svr->y_std;
        doc["beta"] = svr->beta;
        json sv = json::array();
        for (const auto& x : svr->support_x) sv.push_back(feature_vector_json(x));
        doc["support_x"] = std::move(sv);
    } else if (const auto* tree = std::get_if<regress::TreeModel>(&p.params)) {
        doc["kind"] = "tree";
        json nodes = json::array();
        for (const auto& n : tree->nodes)
            nodes.push_back({{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"value", n.value}});
        doc["nodes"] = std::move(nodes);
    } else if (const auto* ann = std::get_if<regress::AnnModel>(&p.params)) {
        doc["kind"] = "ann";
        doc["layer_sizes"] = ann->layer_sizes;
        doc["weights"] = ann->weights;
        doc["biases"] = ann->biases;
        doc["y_mean"] = ann->y_mean;
        doc["y_std"] = ann->y_std;
    }
    return doc;
}

regress::TrainedPredictor predictor_from_json(const json& doc) {
    regress::TrainedPredictor p;
    const auto structure = regress::structure_from_name(doc.at("structure").get<std::string>());
    if (!structure) throw Error(ErrorKind::Schema, "unknown structure in predictors.json");
    p.structure = *structure;
    p.normalizer = regress::Normalizer::from_params(
        feature_vector_from(doc.at("normalizer").at("mean")),
        feature_vector_from(doc.at("normalizer").at("std")));
    p.training_rows = doc.at("training_rows").get<size_t>();
    p.flags.solver_nonconvergence = doc.at("flags").at("solver_nonconvergence").get<bool>();
    p.flags.degenerate_design = doc.at("flags").at("degenerate_design").get<bool>();

    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "linear") {
        regress::LinearModel m;
        const auto w = doc.at("weights").get<std::vector<double>>();
        if (w.size() != kNumFactors) throw Error(ErrorKind::Schema, "bad linear weights");
        std::copy(w.begin(), w.end(), m.weights.begin());
        m.bias = doc.at("bias").get<double>();
        p.params = m;
    } else if (kind == "svr") {
        regress::SvrModel m;
        m.gaussian = doc.at("gaussian").get<bool>();
        m.gamma = doc.at("gamma").get<double>();
        m.bias = doc.at("bias").get<double>();
        m.y_mean = doc.at("y_mean").get<double>();
        m.y_std = doc.at("y_std").get<double>();
        m.beta = doc.at("beta").get<std::vector<double>>();
        for (const auto& sv : doc.at("support_x")) m.support_x.push_back(feature_vector_from(sv));
        if (m.support_x.size() != m.beta.size())
            throw Error(ErrorKind::Schema, "svr beta/support size mismatch");
        p.params = m;
    } else if (kind == "tree") {
        regress::TreeModel m;
        for (const auto& n : doc.at("nodes")) {
            regress::TreeNode node;
            node.feature = n.at("feature").get<int>();
            node.threshold = n.at("threshold").get<double>();
            node.left = n.at("left").get<int>();
            node.right = n.at("right").get<int>();
            node.value = n.at("value").get<double>();
            m.nodes.push_back(node);
        }
        if (m.nodes.empty()) throw Error(ErrorKind::Schema, "tree with no nodes");
        p.params = m;
    } else if (kind == "ann") {
        regress::AnnModel m;
        m.layer_sizes = doc.at("layer_sizes").get<std::vector<int>>();
        m.weights = doc.at("weights").get<std::vector<std::vector<double>>>();
        m.biases = doc.at("biases").get<std::vector<std::vector<double>>>();
        m.y_mean = doc.at("y_mean").get<double>();
        m.y_std = doc.at("y_std").get<double>();
        p.params = m;
    } else {
        throw Error(ErrorKind::Schema, "unknown predictor kind " + kind);
    }
    return p;
}

}  // namespace

void write_predictors_json(const std::string& path, const std::vector<PredictorBundle>& bundles,
                           const Provenance& prov) {
    json doc;
    doc["version"] = 1;
    doc["provenance"] = provenance_json(prov);
    json rooms = json::array();
    for (const auto& b : bundles) {
        json entry;
        entry["room_id"] = b.room_id;
        entry["predictor"] = predictor_json(b.predictor);
        entry["residual"] = {{"sample", b.residuals.points()},
                             {"bandwidth", b.residuals.bandwidth()}};
        rooms.push_back(std::move(entry));
    }
    doc["predictors"] = std::move(rooms);
    dump_json(path, doc);
}

std::vector<PredictorBundle> read_predictors_json(const std::string& path) {
    const json doc = load_json(path);
    if (doc.value("version", 0) != 1)
        throw Error(ErrorKind::Schema, path + ": unsupported predictors version");
    std::vector<PredictorBundle> out;
    for (const auto& entry : doc.at("predictors")) {
        PredictorBundle b;
        b.room_id = entry.at("room_id").get<std::string>();
        b.predictor = predictor_from_json(entry.at("predictor"));
        b.residuals = residual::ResidualModel::from_params(
            entry.at("residual").at("sample").get<std::vector<double>>(),
            entry.at("residual").at("bandwidth").get<double>());
        out.push_back(std::move(b));
    }
    if (out.empty()) throw Error(ErrorKind::EmptyInput, path + ": no predictors");
    return out;
}

void write_selection_json(const std::string& path,
                          const std::vector<selection::SelectionRecord>& records,
                          const selection::CVConfig& cfg, const Provenance& prov) {
    json doc;
    doc["version"] = 1;
    doc["provenance"] = provenance_json(prov);
    doc["cv"] = {{"k_folds", cfg.k_folds}, {"n_trials", cfg.n_trials}};
    json names = json::array();
    for (const auto s : cfg.structures) names.push_back(regress::structure_name(s));
    doc["structures"] = names;

    std::map<std::string, int> adoption;
    for (const auto s : cfg.structures) adoption[regress::structure_name(s)] = 0;
    json rooms = json::array();
    for (const auto& rec : records) {
        json entry;
        entry["room_id"] = rec.room_id;
        entry["mean_cv_mape"] = rec.mean_mape;
        entry["trial_cv_mape"] = rec.trial_mape;
        entry["winner"] = regress::structure_name(rec.winner);
        entry["winner_mean_cv_mape"] = rec.winner_mean_mape;
        rooms.push_back(std::move(entry));
        ++adoption[regress::structure_name(rec.winner)];
    }
    doc["rooms"] = std::move(rooms);
    doc["adoption_counts"] = adoption;
    dump_json(path, doc);
}

void write_timing_json(const std::string& path,
                       const std::vector<selection::SelectionRecord>& records,
                       const selection::CVConfig& cfg, const Provenance& prov) {
    json doc;
    doc["version"] = 1;
    doc["provenance"] = provenance_json(prov);
    doc["n_rooms"] = records.size();
    doc["k_folds"] = cfg.k_folds;
    doc["n_trials"] = cfg.n_trials;

    // Mean measured training seconds per structure over rooms.
    std::map<std::string, double> mean_seconds;
    std::vector<double> sums(cfg.structures.size(), 0.0);
    std::vector<int> counts(cfg.structures.size(), 0);
    for (const auto& rec : records) {
        for (size_t s = 0; s < rec.train_seconds.size() && s < sums.size(); ++s) {
            if (rec.train_seconds[s] > 0) {
                sums[s] += rec.train_seconds[s];
                ++counts[s];
            }
        }
    }
    std::vector<double> means;
    for (size_t s = 0; s < cfg.structures.size(); ++s) {
        const double mean = counts[s] ? sums[s] / counts[s] : 0.0;
        mean_seconds[regress::structure_name(cfg.structures[s])] = mean;
        means.push_back(mean);
    }
    doc["mean_train_seconds"] = mean_seconds;
    doc["t_a1_estimate_seconds"] =
        selection::estimate_total_time(static_cast<int>(records.size()), cfg, means);
    dump_json(path, doc);
}

void write_clusters_json(const std::string& path, const ClusterArtifact& artifact,
                         const Provenance& prov) {
    json doc;
    doc["version"] = 1;
    doc["provenance"] = provenance_json(prov);
    doc["k"] = artifact.clustering.k;
    doc["mean_silhouette"] = artifact.clustering.mean_silhouette;
    json table = json::array();
    for (const auto& [k, sil] : artifact.clustering.silhouette_by_k)
        table.push_back({{"k", k}, {"silhouette", sil}});
    doc["silhouette_by_k"] = std::move(table);

    json features = json::array();
    for (size_t i = 0; i < artifact.features.size(); ++i) {
        const auto& f = artifact.features[i];
        features.push_back({{"room_id", f.room_id},
                            {"area_m2", f.area_m2},
                            {"median_set_c", f.median_set_c},
                            {"normalized", {f.normalized[0], f.normalized[1]}},
                            {"cluster", artifact.clustering.labels[i]}});
    }
    doc["rooms"] = std::move(features);

    json clusters = json::array();
    for (int c = 0; c < artifact.clustering.k; ++c) {
        json members = json::array();
        for (size_t i = 0; i < artifact.features.size(); ++i)
            if (artifact.clustering.labels[i] == c)
                members.push_back(artifact.features[i].room_id);
        clusters.push_back(
            {{"cluster_id", c},
             {"members", std::move(members)},
             {"centroid_normalized",
              {artifact.clustering.centroids[static_cast<size_t>(c)][0],
               artifact.clustering.centroids[static_cast<size_t>(c)][1]}}});
    }
    doc["clusters"] = std::move(clusters);
    dump_json(path, doc);
}

ClusterArtifact read_clusters_json(const std::string& path) {
    const json doc = load_json(path);
    if (doc.value("version", 0) != 1)
        throw Error(ErrorKind::Schema, path + ": unsupported clusters version");
    ClusterArtifact out;
    out.clustering.k = doc.at("k").get<int>();
    out.clustering.mean_silhouette = doc.at("mean_silhouette").get<double>();
    for (const auto& row : doc.at("silhouette_by_k"))
        out.clustering.silhouette_by_k.emplace_back(row.at("k").get<int>(),
                                                    row.at("silhouette").get<double>());
    for (const auto& room : doc.at("rooms")) {
        clustering::RoomFeature f;
        f.room_id = room.at("room_id").get<std::string>();
        f.area_m2 = room.at("area_m2").get<double>();
        f.median_set_c = room.at("median_set_c").get<double>();
        f.normalized = {room.at("normalized")[0].get<double>(),
                        room.at("normalized")[1].get<double>()};
        out.features.push_back(std::move(f));
        out.clustering.labels.push_back(room.at("cluster").get<int>());
    }
    for (const auto& cluster : doc.at("clusters"))
        out.clustering.centroids.push_back(
            {cluster.at("centroid_normalized")[0].get<double>(),
             cluster.at("centroid_normalized")[1].get<double>()});
    return out;
}

void write_conditions_json(const std::string& path,
                           const std::vector<conditions::UniformConditions>& all,
                           const Provenance& prov) {
    json doc;
    doc["version"] = 1;
    doc["provenance"] = provenance_json(prov);
    json clusters = json::array();
    for (const auto& uc : all) {
        json factors = json::array();
        for (int f = 0; f < kNumFactors; ++f) {
            const auto& fc = uc.factors[static_cast<size_t>(f)];
            factors.push_back({{"name", kFactorNames[static_cast<size_t>(f)]},
                               {"tier", conditions::tier_name(fc.range.tier)},
                               {"lo", fc.range.lo},
                               {"hi", fc.range.hi},
                               {"uniform", fc.uniform}});
        }
        json rooms = json::array();
        for (const auto& table : uc.room_tables) {
            json per_factor;
            for (int f = 0; f < kNumFactors; ++f) {
                const auto& q = table[static_cast<size_t>(f)];
                per_factor[kFactorNames[static_cast<size_t>(f)]] =
                    std::vector<double>(q.quantiles.begin(), q.quantiles.end());
            }
            rooms.push_back(
                {{"room_id", table[0].room_id}, {"quantiles", std::move(per_factor)}});
        }
        clusters.push_back({{"cluster_id", uc.cluster_id},
                            {"factors", std::move(factors)},
                            {"rooms", std::move(rooms)}});
    }
    doc["clusters"] = std::move(clusters);
    dump_json(path, doc);
}

std::vector<conditions::UniformConditions> read_conditions_json(const std::string& path) {
    const json doc = load_json(path);
    if (doc.value("version", 0) != 1)
        throw Error(ErrorKind::Schema, path + ": unsupported conditions version");
    std::vector<conditions::UniformConditions> out;
    for (const auto& cluster : doc.at("clusters")) {
        conditions::UniformConditions uc;
        uc.cluster_id = cluster.at("cluster_id").get<int>();
        size_t f = 0;
        for (const auto& factor : cluster.at("factors")) {
            if (f >= kNumFactors) throw Error(ErrorKind::Schema, "too many factors");
            conditions::FactorConditions fc;
            const auto tier = factor.at("tier").get<std::string>();
            fc.range.tier = tier == "a"   ? conditions::Tier::A
                            : tier == "b" ? conditions::Tier::B
                            : tier == "c" ? conditions::Tier::C
                                          : conditions::Tier::D;
            fc.range.lo = factor.at("lo").get<double>();
            fc.range.hi = factor.at("hi").get<double>();
            fc.uniform = factor.at("uniform").get<double>();
            uc.factors[f++] = fc;
        }
        if (f != kNumFactors) throw Error(ErrorKind::Schema, "expected 7 factors per cluster");
        for (const auto& room : cluster.at("rooms")) {
            std::array<conditions::RoomPercentiles, kNumFactors> table;
            for (int i = 0; i < kNumFactors; ++i) {
                table[static_cast<size_t>(i)].room_id = room.at("room_id").get<std::string>();
                const auto q = room.at("quantiles")
                                   .at(kFactorNames[static_cast<size_t>(i)])
                                   .get<std::vector<double>>();
                if (q.size() != 9) throw Error(ErrorKind::Schema, "bad quantile table");
                std::copy(q.begin(), q.end(), table[static_cast<size_t>(i)].quantiles.begin());
            }
            uc.room_tables.push_back(std::move(table));
        }
        out.push_back(std::move(uc));
    }
    return out;
}

void write_scores_csv(const std::string& path, const std::vector<scoring::ScoreReport>& reports,
                      const Provenance& prov) {
    csv::Writer w(path);
    w.comment(prov.comment());
    w.row({"room_id", "cluster_id", "eta_median", "eta_mean", "eta_p5", "eta_p95",
           "share_of_draws_best", "comparative"});
    for (const auto& r : reports) {
        w.row({r.room_id, std::to_string(r.cluster_id), csv::format_double(r.median),
               csv::format_double(r.mean), csv::format_double(r.p5), csv::format_double(r.p95),
               csv::format_double(r.share_of_draws_best), r.comparative ? "true" : "false"});
    }
}

void write_score_draws_csv(const std::string& path,
                           const std::vector<scoring::ScoreReport>& reports,
                           const Provenance& prov) {
    csv::Writer w(path);
    w.comment(prov.comment());
    w.row({"room_id", "draw", "eta"});
    for (const auto& r : reports)
        for (size_t s = 0; s < r.eta.size(); ++s)
            w.row({r.room_id, std::to_string(s), csv::format_double(r.eta[s])});
}

std::vector<ScoreRow> read_scores_csv(const std::string& path) {
    csv::Reader r(path);
    const size_t c_room = r.require_column("room_id");
    const size_t c_cluster = r.require_column("cluster_id");
    const size_t c_median = r.require_column("eta_median");
    const size_t c_mean = r.require_column("eta_mean");
    const size_t c_p5 = r.require_column("eta_p5");
    const size_t c_p95 = r.require_column("eta_p95");
    const size_t c_share = r.require_column("share_of_draws_best");
    const size_t c_comp = r.require_column("comparative");
    std::vector<ScoreRow> out;
    while (auto row = r.next_row()) {
        const auto field = [&](size_t c) {
            if (row->size() <= c)
                throw Error(ErrorKind::Schema, path + ": short row at line " +
                                                   std::to_string(r.line_number()));
            const auto v = csv::parse_double((*row)[c]);
            if (!v)
                throw Error(ErrorKind::Schema, path + ": bad number at line " +
                                                   std::to_string(r.line_number()));
            return *v;
        };
        ScoreRow s;
        s.room_id = (*row)[c_room];
        s.cluster_id = static_cast<int>(field(c_cluster));
        s.median = field(c_median);
        s.mean = field(c_mean);
        s.p5 = field(c_p5);
        s.p95 = field(c_p95);
        s.share_best = field(c_share);
        s.comparative = (*row)[c_comp] == "true";
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace acbench::serialize
