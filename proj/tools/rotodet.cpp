// rotodet command-line front end: synthesize data, train a model bundle,
// denoise images, run detection, evaluate against labeled datasets.
//
// Exit codes: 0 ok, 2 bad flags, 3 I/O failure, 4 dimension/label error,
// 5 corrupt model file.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotodet/bundle.hpp"
#include "rotodet/detector.hpp"
#include "rotodet/eval.hpp"
#include "rotodet/grnn.hpp"
#include "rotodet/manifest.hpp"
#include "rotodet/pgm.hpp"
#include "rotodet/rprop.hpp"
#include "rotodet/trainer.hpp"

namespace fs = std::filesystem;
using namespace rotodet;

namespace {

constexpr int kExitFlags = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;
constexpr int kExitModel = 5;

// Flat key/value config document; flags win over config, config over defaults.
class Config {
public:
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoFailure("cannot open config " + path);
        try {
            doc_ = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw IoFailure("config " + path + ": " + e.what());
        }
        if (!doc_.is_object()) throw IoFailure("config " + path + ": not a JSON object");
    }

    template <typename T>
    T resolve(const CLI::Option* opt, const T& flag_value, const char* key, T fallback) const {
        if (opt != nullptr && opt->count() > 0) return flag_value;
        if (doc_.contains(key)) {
            try {
                return doc_.at(key).get<T>();
            } catch (const nlohmann::json::exception& e) {
                throw IoFailure(std::string("config key '") + key + "': " + e.what());
            }
        }
        return fallback;
    }

private:
    nlohmann::json doc_ = nlohmann::json::object();
};

int default_jobs() {
    if (const char* env = std::getenv("ROTODET_JOBS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoFailure("short write to " + path.string());
}

wavelet::DenoiseSettings denoise_from_names(const std::string& family, int levels,
                                            const std::string& mode,
                                            const std::string& selection, double fixed_t,
                                            const std::string& backend) {
    wavelet::DenoiseSettings s;
    s.spec.family = family == "db2" ? wavelet::Family::db2 : wavelet::Family::haar;
    s.spec.boundary = wavelet::Boundary::periodic;
    s.levels = levels;
    s.rule.mode = mode == "hard" ? wavelet::ThresholdMode::hard : wavelet::ThresholdMode::soft;
    s.rule.selection = selection == "fixed" ? wavelet::ThresholdSelection::fixed
                                            : wavelet::ThresholdSelection::universal;
    s.rule.fixed_t = fixed_t;
    s.backend = backend == "swt" ? wavelet::Backend::swt : wavelet::Backend::dwt;
    return s;
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
    std::string out_dir;
    std::string config_path;
    std::string template_path;
    std::uint64_t seed = 0;
    int count = 10, patches = -1, scenes = -1;
    int window = 15, scene_size = 64;
    double angle_min = -90.0, angle_max = 90.0;
    double noise = 0.05, jitter = 0.35;
};

int run_synth(const SynthArgs& a, const Config& cfg, const CLI::App* cmd) {
    const auto opt = [&](const char* name) { return cmd->get_option_no_throw(name); };
    const std::uint64_t seed = cfg.resolve(opt("--seed"), a.seed, "seed", std::uint64_t{0});
    const int count = cfg.resolve(opt("--count"), a.count, "count", 10);
    int n_patches = cfg.resolve(opt("--patches"), a.patches, "patches", -1);
    int n_scenes = cfg.resolve(opt("--scenes"), a.scenes, "scenes", -1);
    if (n_patches < 0) n_patches = count;
    if (n_scenes < 0) n_scenes = count;

    eval::SynthParams params;
    params.window = cfg.resolve(opt("--window"), a.window, "window", 15);
    params.scene_size = cfg.resolve(opt("--scene-size"), a.scene_size, "scene-size", 64);
    params.angle_min = cfg.resolve(opt("--angle-min"), a.angle_min, "angle-min", -90.0);
    params.angle_max = cfg.resolve(opt("--angle-max"), a.angle_max, "angle-max", 90.0);
    params.noise_sigma = cfg.resolve(opt("--noise"), a.noise, "noise", 0.05);
    params.brightness_jitter = cfg.resolve(opt("--jitter"), a.jitter, "jitter", 0.35);

    const Image tmpl = a.template_path.empty() ? eval::default_template(params.window)
                                               : load_pgm_file(a.template_path);
    if (tmpl.width() != params.window || tmpl.height() != params.window)
        throw DimensionMismatch("template " + a.template_path + " is not " +
                                std::to_string(params.window) + "x" +
                                std::to_string(params.window));

    const fs::path out_dir(a.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir / "patches", ec);
    fs::create_directories(out_dir / "scenes", ec);
    if (ec) throw IoFailure("cannot create " + a.out_dir + ": " + ec.message());

    manifest::Manifest man;
    man.seed = seed;
    man.window = params.window;
    man.noise_sigma = params.noise_sigma;
    man.angle_min = params.angle_min;
    man.angle_max = params.angle_max;

    const auto patch_set = eval::synth_patches(seed, n_patches, tmpl, params);
    char name[64];
    for (int i = 0; i < n_patches; ++i) {
        std::snprintf(name, sizeof name, "patches/patch_%04d.pgm", i);
        save_pgm_file(patch_set.patches[i], out_dir / name);
        man.patches.push_back({name, patch_set.angles[i]});
    }

    const auto scenes = eval::synth_dataset(seed, n_scenes, tmpl, params);
    for (int i = 0; i < n_scenes; ++i) {
        std::snprintf(name, sizeof name, "scenes/scene_%04d.pgm", i);
        save_pgm_file(scenes[i].image, out_dir / name);
        manifest::SceneEntry entry;
        entry.file = name;
        entry.boxes = scenes[i].boxes;
        man.scenes.push_back(std::move(entry));
    }

    manifest::save(man, out_dir / "manifest.json");
    std::cout << "wrote " << n_patches << " patches, " << n_scenes << " scenes to "
              << a.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
    std::string data;
    std::string out = "model.rdm";
    std::string config_path;
    int window = 15;
    int pca_k = 0;
    double variance = 0.95;
    double spread = 0.0;
    double theta_percentile = 1.0;
    std::string family = "haar", mode = "soft", selection = "universal", backend = "dwt";
    int levels = 2;
    double fixed_t = 0.0;
    std::uint64_t seed = 0;
};

int run_train(const TrainArgs& a, const Config& cfg, const CLI::App* cmd) {
    const auto opt = [&](const char* name) { return cmd->get_option_no_throw(name); };

    fs::path manifest_path(a.data);
    if (fs::is_directory(manifest_path)) manifest_path /= "manifest.json";
    const auto man = manifest::load(manifest_path);
    const fs::path base = manifest_path.parent_path();

    trainer::TrainOptions opts;
    opts.window = cfg.resolve(opt("--window"), a.window, "window", 15);
    opts.pca_rank = cfg.resolve(opt("--pca-k"), a.pca_k, "pca-k", 0);
    opts.variance_target = cfg.resolve(opt("--variance"), a.variance, "variance", 0.95);
    opts.spread = cfg.resolve(opt("--spread"), a.spread, "spread", 0.0);
    opts.theta_percentile =
        cfg.resolve(opt("--theta-percentile"), a.theta_percentile, "theta-percentile", 1.0);
    opts.seed = cfg.resolve(opt("--seed"), a.seed, "seed", std::uint64_t{0});
    opts.denoise = denoise_from_names(
        cfg.resolve(opt("--family"), a.family, "family", std::string("haar")),
        cfg.resolve(opt("--levels"), a.levels, "levels", 2),
        cfg.resolve(opt("--mode"), a.mode, "mode", std::string("soft")),
        cfg.resolve(opt("--selection"), a.selection, "selection", std::string("universal")),
        cfg.resolve(opt("--fixed-t"), a.fixed_t, "fixed-t", 0.0),
        cfg.resolve(opt("--backend"), a.backend, "backend", std::string("dwt")));

    if (man.patches.empty()) throw DimensionMismatch("no training patches in " +
                                                     manifest_path.string());

    std::vector<Image> patches;
    std::vector<double> angles;
    patches.reserve(man.patches.size());
    for (const auto& entry : man.patches) {
        Image img = load_pgm_file(base / entry.file);
        if (img.width() != opts.window || img.height() != opts.window)
            throw DimensionMismatch("patch " + entry.file + " is " +
                                    std::to_string(img.width()) + "x" +
                                    std::to_string(img.height()) + ", expected " +
                                    std::to_string(opts.window) + "x" +
                                    std::to_string(opts.window));
        if (entry.angle_deg < -90.0 || entry.angle_deg > 90.0)
            throw TargetOutOfRange("patch " + entry.file + " label " +
                                   std::to_string(entry.angle_deg) +
                                   " outside [-90, 90]");
        patches.push_back(std::move(img));
        angles.push_back(entry.angle_deg);
    }

    trainer::TrainSummary summary;
    const auto bundle_model = trainer::train(patches, angles, opts, &summary);
    bundle::save(bundle_model, a.out);

    std::cout << "trained on " << summary.samples << " patches\n"
              << "  pca rank k      = " << summary.pca_rank << "\n"
              << "  grnn spread     = " << summary.spread << "\n"
              << "  density theta   = " << summary.density_threshold << "\n"
              << "  train |err| avg = " << summary.mean_abs_train_error_deg << " deg\n"
              << "  model           = " << a.out << "\n";
    return 0;
}

// --------------------------------------------------------------- detect ----

struct DetectArgs {
    std::string model;
    std::string image;
    std::string json_out;
    std::string annotate_out;
    std::string config_path;
    int stride = 1;
    double scale_factor = 1.2, min_scale = 1.0, max_scale = 1e9;
    double theta = -1.0;
    int jobs = 0;
    bool whole_image = false;
};

detect::ScanConfig scan_config_from(const bundle::ModelBundle& model, const DetectArgs& a,
                                    const Config& cfg, const CLI::App* cmd) {
    const auto opt = [&](const char* name) { return cmd->get_option_no_throw(name); };
    detect::ScanConfig sc;
    sc.window = model.window;
    sc.denoise = model.denoise;
    sc.stride = cfg.resolve(opt("--stride"), a.stride, "stride", 1);
    sc.scale_factor = cfg.resolve(opt("--scale-factor"), a.scale_factor, "scale-factor", 1.2);
    sc.min_scale = cfg.resolve(opt("--min-scale"), a.min_scale, "min-scale", 1.0);
    sc.max_scale = cfg.resolve(opt("--max-scale"), a.max_scale, "max-scale", 1e9);
    const double theta = cfg.resolve(opt("--theta"), a.theta, "theta", -1.0);
    sc.density_threshold = theta >= 0.0 ? theta : model.density_threshold;
    sc.jobs = cfg.resolve(opt("--jobs"), a.jobs, "jobs", 0);
    if (sc.jobs < 1) sc.jobs = default_jobs();
    sc.whole_image_denoise =
        cfg.resolve(opt("--whole-image-denoise"), a.whole_image, "whole-image-denoise", false);
    return sc;
}

int run_detect(const DetectArgs& a, const Config& cfg, const CLI::App* cmd) {
    const auto model = bundle::load(a.model);
    const Image img = load_pgm_file(a.image);
    const auto sc = scan_config_from(model, a, cfg, cmd);

    const auto dets = detect::scan(img, model.pca, model.grnn, sc);
    const std::string json =
        detect::detections_to_json(fs::path(a.image).filename().string(), sc.window, dets);

    if (a.json_out.empty()) {
        std::cout << json;
    } else {
        write_text_file(a.json_out, json);
    }
    if (!a.annotate_out.empty())
        save_pgm_file(detect::annotate(img, dets), a.annotate_out);

    std::cerr << dets.size() << " detection(s)\n";
    return 0;
}

// ----------------------------------------------------------------- eval ----

struct EvalArgs {
    std::string model;
    std::string data;
    std::string report_out;
    std::string metrics_csv;
    std::string timing_csv;
    std::string history_csv;
    std::string config_path;
    int stride = 1;
    double theta = -1.0;
    int jobs = 0;
    bool oracle = false;
    bool baseline = false;
    int hidden = 10;
    int max_epochs = 2000;
    double target_mse = 0.01;
    std::uint64_t rprop_seed = 7;
};

int run_eval(const EvalArgs& a, const Config& cfg, const CLI::App* cmd) {
    const auto model = bundle::load(a.model);

    fs::path manifest_path(a.data);
    if (fs::is_directory(manifest_path)) manifest_path /= "manifest.json";
    const auto man = manifest::load(manifest_path);
    const fs::path base = manifest_path.parent_path();

    std::vector<eval::LabeledScene> scenes;
    for (const auto& entry : man.scenes) {
        eval::LabeledScene scene;
        scene.image = load_pgm_file(base / entry.file);
        scene.boxes = entry.boxes;
        scene.seed = man.seed;
        scenes.push_back(std::move(scene));
    }

    DetectArgs det_args;
    det_args.stride = a.stride;
    det_args.theta = a.theta;
    det_args.jobs = a.jobs;
    const auto sc = scan_config_from(model, det_args, cfg, cmd);

    std::vector<std::vector<detect::Detection>> per_scene;
    per_scene.reserve(scenes.size());
    for (const auto& scene : scenes) {
        if (a.oracle) {
            std::vector<detect::Detection> dets;
            for (const auto& box : scene.boxes)
                dets.push_back({box.x, box.y, box.size, box.angle_deg, 1.0});
            per_scene.push_back(std::move(dets));
        } else {
            per_scene.push_back(detect::scan(scene.image, model.pca, model.grnn, sc));
        }
    }

    const auto report = eval::detection_rates(scenes, per_scene);
    const std::string table = eval::render_rate_table(report);
    std::cout << table;
    if (!a.report_out.empty()) write_text_file(a.report_out, table);

    if (!a.metrics_csv.empty()) {
        // fit metrics over matched ground-truth/detection angle pairs
        std::vector<double> truth, predicted;
        const eval::MatchCriteria crit;
        for (std::size_t s = 0; s < scenes.size(); ++s) {
            for (const auto& box : scenes[s].boxes) {
                const detect::Detection* best = nullptr;
                for (const auto& d : per_scene[s]) {
                    detect::Detection gt{box.x, box.y, box.size, 0.0, 0.0};
                    if (detect::iou(d, gt) >= crit.iou &&
                        std::fabs(d.angle_deg - box.angle_deg) <= crit.angle_tol_deg &&
                        (best == nullptr || d.confidence > best->confidence))
                        best = &d;
                }
                if (best != nullptr) {
                    truth.push_back(box.angle_deg);
                    predicted.push_back(best->angle_deg);
                }
            }
        }
        eval::FitMetrics fm;
        if (truth.size() >= 2) fm = eval::fit_metrics(truth, predicted);
        else fm.degenerate = true;
        write_text_file(a.metrics_csv, eval::fit_metrics_csv(fm));
    }

    if (a.baseline) {
        if (man.patches.empty())
            throw DimensionMismatch("--baseline needs training patches in the manifest");
        std::vector<Image> patches;
        std::vector<double> angles;
        for (const auto& entry : man.patches) {
            patches.push_back(load_pgm_file(base / entry.file));
            angles.push_back(entry.angle_deg);
        }
        // features exactly as the detector sees them
        Matrix inputs(static_cast<int>(patches.size()), model.pca.rank);
        for (std::size_t i = 0; i < patches.size(); ++i) {
            const Image clean = wavelet::denoise(patches[i], model.denoise);
            const auto projected = pca::transform(model.pca, normalize_patch(clean));
            std::copy(projected.begin(), projected.end(), inputs.row(static_cast<int>(i)).begin());
        }

        const auto t0 = std::chrono::steady_clock::now();
        const auto refit = grnn::fit(inputs, angles, model.grnn.spread);
        const double grnn_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double grnn_mse = 0.0;
        for (int i = 0; i < inputs.rows(); ++i) {
            const double err =
                (grnn::predict(refit, inputs.row(i)).value - angles[static_cast<std::size_t>(i)]) / 90.0;
            grnn_mse += err * err;
        }
        grnn_mse /= inputs.rows();

        rprop::RpropConfig rc;
        rc.max_epochs = a.max_epochs;
        rc.target_mse = a.target_mse;
        const auto start = rprop::mlp_init(model.pca.rank, a.hidden, a.rprop_seed);
        const auto result = rprop::rprop_train(start, inputs, angles, rc);

        eval::TimingReport timing;
        timing.grnn_fit_seconds = grnn_seconds;
        timing.grnn_train_mse = grnn_mse;
        timing.rprop_train_seconds = result.seconds;
        timing.rprop_epochs = result.epochs;
        timing.rprop_final_mse = result.final_mse;
        if (!a.timing_csv.empty()) write_text_file(a.timing_csv, eval::timing_csv(timing));
        if (!a.history_csv.empty())
            write_text_file(a.history_csv, rprop::history_csv(result.history));
        std::cout << "baseline: grnn fit " << grnn_seconds << " s, rprop "
                  << result.seconds << " s over " << result.epochs << " epochs (final mse "
                  << result.final_mse << ")\n";
    } else if (!a.timing_csv.empty() || !a.history_csv.empty()) {
        std::cerr << "error: --timing-csv/--history-csv require --baseline\n";
        return kExitFlags;
    }
    return 0;
}

// -------------------------------------------------------------- denoise ----

struct DenoiseArgs {
    std::string in, out;
    std::string config_path;
    std::string family = "haar", mode = "soft", selection = "universal", backend = "dwt";
    int levels = 3;
    double fixed_t = 0.0;
    int maxval = 255;
};

int run_denoise(const DenoiseArgs& a, const Config& cfg, const CLI::App* cmd) {
    const auto opt = [&](const char* name) { return cmd->get_option_no_throw(name); };
    const auto settings = denoise_from_names(
        cfg.resolve(opt("--family"), a.family, "family", std::string("haar")),
        cfg.resolve(opt("--levels"), a.levels, "levels", 3),
        cfg.resolve(opt("--mode"), a.mode, "mode", std::string("soft")),
        cfg.resolve(opt("--selection"), a.selection, "selection", std::string("universal")),
        cfg.resolve(opt("--fixed-t"), a.fixed_t, "fixed-t", 0.0),
        cfg.resolve(opt("--backend"), a.backend, "backend", std::string("dwt")));
    const Image img = load_pgm_file(a.in);
    save_pgm_file(wavelet::denoise(img, settings), a.out,
                  cfg.resolve(opt("--maxval"), a.maxval, "maxval", 255));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotodet: oriented template detection "
                 "(wavelet denoise + PCA + kernel regression)"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
    synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", synth.seed, "Deterministic generator seed");
    synth_cmd->add_option("--count", synth.count, "Item count for both patches and scenes");
    synth_cmd->add_option("--patches", synth.patches, "Patch count (overrides --count)");
    synth_cmd->add_option("--scenes", synth.scenes, "Scene count (overrides --count)");
    synth_cmd->add_option("--window", synth.window, "Patch window size");
    synth_cmd->add_option("--scene-size", synth.scene_size, "Scene side length");
    synth_cmd->add_option("--angle-min", synth.angle_min, "Smallest angle, degrees");
    synth_cmd->add_option("--angle-max", synth.angle_max, "Largest angle, degrees");
    synth_cmd->add_option("--noise", synth.noise, "Gaussian pixel noise sigma");
    synth_cmd->add_option("--jitter", synth.jitter, "Brightness jitter amount (0 disables)");
    synth_cmd->add_option("--template", synth.template_path, "Template PGM (default: built-in)");
    synth_cmd->add_option("--config", synth.config_path, "Flat JSON config file");

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train a model bundle from labeled patches");
    train_cmd->add_option("--data", train.data, "Dataset manifest (or its directory)")->required();
    train_cmd->add_option("--out", train.out, "Model bundle output path");
    train_cmd->add_option("--window", train.window, "Window size");
    train_cmd->add_option("--pca-k", train.pca_k, "PCA rank (0 = pick by variance)");
    train_cmd->add_option("--variance", train.variance, "Explained-variance target for auto rank");
    train_cmd->add_option("--spread", train.spread, "GRNN spread (0 = leave-one-out selection)");
    train_cmd->add_option("--theta-percentile", train.theta_percentile,
                          "Density-threshold calibration percentile");
    train_cmd->add_option("--family", train.family, "Wavelet family")
        ->check(CLI::IsMember({"haar", "db2"}));
    train_cmd->add_option("--levels", train.levels, "Decomposition levels");
    train_cmd->add_option("--mode", train.mode, "Threshold mode")
        ->check(CLI::IsMember({"soft", "hard"}));
    train_cmd->add_option("--selection", train.selection, "Threshold selection")
        ->check(CLI::IsMember({"universal", "fixed"}));
    train_cmd->add_option("--fixed-t", train.fixed_t, "Fixed threshold value");
    train_cmd->add_option("--backend", train.backend, "Transform backend")
        ->check(CLI::IsMember({"dwt", "swt"}));
    train_cmd->add_option("--seed", train.seed, "Seed recorded in the bundle metadata");
    train_cmd->add_option("--config", train.config_path, "Flat JSON config file");

    DetectArgs detect_args;
    auto* detect_cmd = app.add_subcommand("detect", "Scan an image with a trained bundle");
    detect_cmd->add_option("--model", detect_args.model, "Model bundle path")->required();
    detect_cmd->add_option("--image", detect_args.image, "Input PGM image")->required();
    detect_cmd->add_option("--json-out", detect_args.json_out, "Detection JSON path (default: stdout)");
    detect_cmd->add_option("--annotate-out", detect_args.annotate_out, "Annotated PGM path");
    detect_cmd->add_option("--stride", detect_args.stride, "Window stride in pixels");
    detect_cmd->add_option("--scale-factor", detect_args.scale_factor, "Pyramid downscale factor");
    detect_cmd->add_option("--min-scale", detect_args.min_scale, "Smallest pyramid scale");
    detect_cmd->add_option("--max-scale", detect_args.max_scale, "Largest pyramid scale");
    detect_cmd->add_option("--theta", detect_args.theta, "Density threshold override");
    detect_cmd->add_option("--jobs", detect_args.jobs, "Worker threads (default: env/cores)");
    detect_cmd->add_flag("--whole-image-denoise", detect_args.whole_image,
                         "Denoise each pyramid level once instead of every window");
    detect_cmd->add_option("--config", detect_args.config_path, "Flat JSON config file");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a bundle on a labeled dataset");
    eval_cmd->add_option("--model", eval_args.model, "Model bundle path")->required();
    eval_cmd->add_option("--data", eval_args.data, "Dataset manifest (or its directory)")->required();
    eval_cmd->add_option("--report", eval_args.report_out, "Rate table output path");
    eval_cmd->add_option("--metrics-csv", eval_args.metrics_csv, "Fit-metrics CSV path");
    eval_cmd->add_option("--timing-csv", eval_args.timing_csv, "Timing CSV path (needs --baseline)");
    eval_cmd->add_option("--history-csv", eval_args.history_csv,
                         "Rprop epoch-history CSV path (needs --baseline)");
    eval_cmd->add_option("--stride", eval_args.stride, "Window stride in pixels");
    eval_cmd->add_option("--theta", eval_args.theta, "Density threshold override");
    eval_cmd->add_option("--jobs", eval_args.jobs, "Worker threads");
    eval_cmd->add_flag("--oracle", eval_args.oracle, "Feed ground truth as detections");
    eval_cmd->add_flag("--baseline", eval_args.baseline, "Also train the Rprop baseline");
    eval_cmd->add_option("--hidden", eval_args.hidden, "Baseline hidden units");
    eval_cmd->add_option("--max-epochs", eval_args.max_epochs, "Baseline epoch budget");
    eval_cmd->add_option("--target-mse", eval_args.target_mse, "Baseline target MSE (normalized)");
    eval_cmd->add_option("--rprop-seed", eval_args.rprop_seed, "Baseline weight-init seed");
    eval_cmd->add_option("--config", eval_args.config_path, "Flat JSON config file");

    DenoiseArgs denoise_args;
    auto* denoise_cmd = app.add_subcommand("denoise", "Wavelet-denoise a PGM image");
    denoise_cmd->add_option("--in", denoise_args.in, "Input PGM")->required();
    denoise_cmd->add_option("--out", denoise_args.out, "Output PGM")->required();
    denoise_cmd->add_option("--family", denoise_args.family, "Wavelet family")
        ->check(CLI::IsMember({"haar", "db2"}));
    denoise_cmd->add_option("--levels", denoise_args.levels, "Decomposition levels");
    denoise_cmd->add_option("--mode", denoise_args.mode, "Threshold mode")
        ->check(CLI::IsMember({"soft", "hard"}));
    denoise_cmd->add_option("--selection", denoise_args.selection, "Threshold selection")
        ->check(CLI::IsMember({"universal", "fixed"}));
    denoise_cmd->add_option("--fixed-t", denoise_args.fixed_t, "Fixed threshold value");
    denoise_cmd->add_option("--backend", denoise_args.backend, "Transform backend")
        ->check(CLI::IsMember({"dwt", "swt"}));
    denoise_cmd->add_option("--maxval", denoise_args.maxval, "Output PGM maxval");
    denoise_cmd->add_option("--config", denoise_args.config_path, "Flat JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitFlags;
    }

    try {
        Config cfg;
        if (synth_cmd->parsed() && !synth.config_path.empty()) cfg.load(synth.config_path);
        if (train_cmd->parsed() && !train.config_path.empty()) cfg.load(train.config_path);
        if (detect_cmd->parsed() && !detect_args.config_path.empty()) cfg.load(detect_args.config_path);
        if (eval_cmd->parsed() && !eval_args.config_path.empty()) cfg.load(eval_args.config_path);
        if (denoise_cmd->parsed() && !denoise_args.config_path.empty()) cfg.load(denoise_args.config_path);

        if (synth_cmd->parsed()) return run_synth(synth, cfg, synth_cmd);
        if (train_cmd->parsed()) return run_train(train, cfg, train_cmd);
        if (detect_cmd->parsed()) return run_detect(detect_args, cfg, detect_cmd);
        if (eval_cmd->parsed()) return run_eval(eval_args, cfg, eval_cmd);
        if (denoise_cmd->parsed()) return run_denoise(denoise_args, cfg, denoise_cmd);
    } catch (const CorruptModel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModel;
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
