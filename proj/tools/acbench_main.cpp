#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "acbench/errors.hpp"
#include "acbench/pipeline.hpp"
#include "acbench/thermsim.hpp"

namespace {

using acbench::Error;
using acbench::pipeline::RunConfig;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::string structures;
    uint64_t seed = 0;
    int threads = 0;
    bool seed_set = false;
    bool threads_set = false;
};

void apply_globals(RunConfig& cfg, const GlobalArgs& args) {
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threads_set) cfg.threads = args.threads;
    if (!args.structures.empty()) {
        cfg.cv.structures.clear();
        std::string item;
        for (const char c : args.structures + ",") {
            if (c == ',') {
                if (!item.empty()) {
                    const auto s = acbench::regress::structure_from_name(item);
                    if (!s)
                        throw Error(acbench::ErrorKind::InvalidSpec,
                                    "unknown structure '" + item + "'");
                    cfg.cv.structures.push_back(*s);
                    item.clear();
                }
            } else {
                item.push_back(c);
            }
        }
        if (cfg.cv.structures.empty())
            throw Error(acbench::ErrorKind::InvalidSpec, "--structures selected nothing");
    }
}

RunConfig make_config(const GlobalArgs& args) {
    RunConfig cfg;
    if (!args.config_path.empty()) cfg = acbench::pipeline::load_run_config(args.config_path);
    apply_globals(cfg, args);
    return cfg;
}

int fail(const Error& e) {
    nlohmann::json err{{"error", e.kind_name()}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return e.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acbench - AC energy-performance benchmarking of residential rooms"};
    app.require_subcommand(1);

    GlobalArgs globals;
    app.add_option("--config", globals.config_path, "JSON run configuration")
        ->check(CLI::ExistingFile);
    app.add_option("--out", globals.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", globals.seed, "run seed (64-bit)");
    auto* threads_opt = app.add_option("--threads", globals.threads, "worker threads");
    app.add_option("--structures", globals.structures,
                   "comma-separated structure subset (e.g. lr-normal,svr-gkn)");

    // All pipeline knobs are global so that staged invocations can carry the
    // exact configuration of a composed run (the config hash embedded in
    // every artifact depends on them).
    std::string telemetry, weather, rooms;
    double t_seg_min = -1, t_seg_max = -1;
    int n_seg_min = -1;
    bool multisplit = false, cooling_only = false;
    int k_folds = -1, n_trials = -1, k_min = -1, k_max = -1;
    long long sample_size = -1;
    bool write_draws = false;

    app.add_option("--telemetry", telemetry, "telemetry CSV");
    app.add_option("--weather", weather, "weather CSV");
    app.add_option("--rooms", rooms, "rooms CSV");
    app.add_option("--t-seg-min", t_seg_min, "minimum segment duration (s)");
    app.add_option("--t-seg-max", t_seg_max, "maximum segment duration (s)");
    app.add_option("--n-seg-min", n_seg_min, "minimum valid segments per room");
    app.add_flag("--exclusive-multisplit", multisplit,
                 "drop segments with sibling units running");
    app.add_flag("--cooling-only", cooling_only, "exclude dehumidifying segments");
    app.add_option("--k-folds", k_folds, "CV folds (K_cv)");
    app.add_option("--n-trials", n_trials, "CV trials (N_cv)");
    app.add_option("--k-min", k_min, "smallest k tested in clustering");
    app.add_option("--k-max", k_max, "largest k tested in clustering");
    app.add_option("--sample-size", sample_size, "stochastic sample size S");
    app.add_flag("--draws", write_draws, "also write scores_draws.csv");

    auto* c_ingest = app.add_subcommand("ingest", "extract and filter operation segments");
    auto* c_model = app.add_subcommand("model", "select and train per-room predictors");
    auto* c_cluster = app.add_subcommand("cluster", "cluster rooms by area and set point");
    auto* c_conditions =
        app.add_subcommand("conditions", "uniform noisy-factor values per cluster");
    auto* c_score = app.add_subcommand("score", "stochastic benchmarking scores");

    acbench::pipeline::SweepRequest sweep;
    auto* c_sweep = app.add_subcommand("sweep", "predicted power over one factor's grid");
    c_sweep->add_option("--room", sweep.room_id, "room id")->required();
    c_sweep->add_option("--factor", sweep.factor, "factor name (e.g. t_set_mean)")->required();
    c_sweep->add_option("--from", sweep.from, "grid start")->required();
    c_sweep->add_option("--to", sweep.to, "grid end")->required();
    c_sweep->add_option("--steps", sweep.steps, "grid size");
    c_sweep->add_option("--sweep-out", sweep.out_csv, "output CSV (default OUT/sweep.csv)");

    std::string fleet_spec_path;
    auto* c_simulate = app.add_subcommand("simulate", "generate a synthetic fleet");
    c_simulate->add_option("--fleet", fleet_spec_path, "fleet TOML spec")
        ->check(CLI::ExistingFile);

    auto* c_run = app.add_subcommand("run", "full pipeline (ingest through score)");
    auto* c_report = app.add_subcommand("report", "plot-data quantile tables");

    // Global flags remain usable after the subcommand name.
    for (auto* sub : {c_ingest, c_model, c_cluster, c_conditions, c_score, c_sweep,
                      c_simulate, c_run, c_report})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    globals.seed_set = seed_opt->count() > 0;
    globals.threads_set = threads_opt->count() > 0;

    try {
        RunConfig cfg = make_config(globals);
        if (!telemetry.empty()) cfg.telemetry_path = telemetry;
        if (!weather.empty()) cfg.weather_path = weather;
        if (!rooms.empty()) cfg.rooms_path = rooms;
        if (t_seg_min >= 0) cfg.filter.t_seg_min_s = t_seg_min;
        if (t_seg_max >= 0) cfg.filter.t_seg_max_s = t_seg_max;
        if (n_seg_min >= 0) cfg.filter.n_seg_min = n_seg_min;
        if (multisplit) cfg.filter.exclusive_multisplit = true;
        if (cooling_only) cfg.segment_options.cooling_only = true;
        if (k_folds > 0) cfg.cv.k_folds = k_folds;
        if (n_trials > 0) cfg.cv.n_trials = n_trials;
        if (k_min > 0) cfg.k_min = k_min;
        if (k_max > 0) cfg.k_max = k_max;
        if (sample_size > 0) cfg.sample_size = static_cast<size_t>(sample_size);
        if (write_draws) cfg.write_draws = true;

        if (c_ingest->parsed()) {
            acbench::pipeline::cmd_ingest(cfg);
        } else if (c_model->parsed()) {
            acbench::pipeline::cmd_model(cfg);
        } else if (c_cluster->parsed()) {
            acbench::pipeline::cmd_cluster(cfg);
        } else if (c_conditions->parsed()) {
            acbench::pipeline::cmd_conditions(cfg);
        } else if (c_score->parsed()) {
            acbench::pipeline::cmd_score(cfg);
        } else if (c_sweep->parsed()) {
            acbench::pipeline::cmd_sweep(cfg, sweep);
        } else if (c_simulate->parsed()) {
            if (cfg.out_dir.empty())
                throw Error(acbench::ErrorKind::InvalidSpec, "simulate needs --out");
            acbench::thermsim::FleetSpec spec;
            if (!fleet_spec_path.empty())
                spec = acbench::thermsim::load_fleet_spec(fleet_spec_path);
            if (globals.seed_set) spec.seed = cfg.seed;
            const auto fleet = acbench::thermsim::generate_fleet(spec);
            acbench::thermsim::write_fleet_csvs(fleet, cfg.out_dir,
                                                "seed=" + std::to_string(spec.seed));
            std::cout << "fleet: " << fleet.rooms.size() << " rooms, "
                      << fleet.segments.size() << " segments\n";
        } else if (c_run->parsed()) {
            acbench::pipeline::cmd_run(cfg);
        } else if (c_report->parsed()) {
            acbench::pipeline::cmd_report(cfg);
        }
    } catch (const Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", "internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 3;
    }
    return 0;
}
