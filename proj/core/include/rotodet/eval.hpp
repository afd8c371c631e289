#ifndef ROTODET_EVAL_HPP
#define ROTODET_EVAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotodet/detector.hpp"
#include "rotodet/image.hpp"

namespace rotodet::eval {

/// Least-squares fit of outputs against targets plus the Pearson
/// correlation: o ~ m*t + b. Perfect predictions give m=1, b=0, r=1.
struct FitMetrics {
    double m = 0.0;
    double b = 0.0;
    double r = 0.0;
    bool degenerate = false; // var(targets) == 0 or var(outputs) == 0
};

/// Throws TooFewPoints when n < 2.
FitMetrics fit_metrics(std::span<const double> targets, std::span<const double> outputs);

/// Fraction of predictions farther than tol_deg from ground truth.
double misclassification_rate(std::span<const double> ground,
                              std::span<const double> predicted, double tol_deg = 10.0);

struct GroundTruthBox {
    int x = 0;
    int y = 0;
    int size = 0;
    double angle_deg = 0.0;
};

struct LabeledScene {
    Image image;
    std::vector<GroundTruthBox> boxes;
    std::uint64_t seed = 0;
};

/// A ground-truth box counts as detected when some detection overlaps it
/// with IoU >= iou AND agrees on angle within angle_tol_deg.
struct MatchCriteria {
    double iou = 0.5;
    double angle_tol_deg = 15.0;
};

struct RateRow {
    std::string name;
    // reported == true marks static literature rows (no counts behind them)
    bool reported = false;
    double all_rate = 0.0, upright_rate = 0.0, rotated_rate = 0.0;
    int all_matched = 0, all_total = 0;
    int upright_matched = 0, upright_total = 0;
    int rotated_matched = 0, rotated_total = 0;
};

struct RateReport {
    std::vector<RateRow> rows;
    int scenes = 0;
    int false_positives = 0;       // detections matching no ground truth
    double false_per_scene = 0.0;
};

/// Match detections to ground truth per scene and split the rates at the
/// 10-degree upright/rotated boundary. Detections that match no box (by the
/// same criteria) are counted as false positives.
RateReport detection_rates(std::span<const LabeledScene> scenes,
                           std::span<const std::vector<detect::Detection>> detections,
                           const MatchCriteria& criteria = {});

/// Aligned text table in the classic three-column breakdown, with the
/// literature reference rows rendered as static text above the measured row.
std::string render_rate_table(const RateReport& report);

struct SynthParams {
    int window = 15;
    double angle_min = -90.0;
    double angle_max = 90.0;
    double noise_sigma = 0.05;
    double brightness_jitter = 0.35; // 0 disables illumination variation
    int scene_size = 64;
};

/// Deterministic procedural template: a face-like pattern with enough
/// vertical asymmetry that every orientation in (-90, 90] is distinguishable.
Image default_template(int window);

struct PatchSet {
    std::vector<Image> patches;
    std::vector<double> angles; // degrees
};

/// n rotated, brightness-jittered, noisy copies of the template with their
/// exact angles. Fully determined by (seed, params).
PatchSet synth_patches(std::uint64_t seed, int n, const Image& tmpl, const SynthParams& p);

/// Scenes with one embedded rotated template each over a smooth textured
/// background plus Gaussian pixel noise; ground truth recorded exactly.
std::vector<LabeledScene> synth_dataset(std::uint64_t seed, int n_scenes, const Image& tmpl,
                                        const SynthParams& p);

struct TimingReport {
    double grnn_fit_seconds = 0.0;
    double grnn_train_mse = 0.0;   // normalized units, on the training set
    double rprop_train_seconds = 0.0;
    int rprop_epochs = 0;
    double rprop_final_mse = 0.0;  // normalized units
};

/// "metric,value" CSV with full double precision (reparses exactly).
std::string timing_csv(const TimingReport& t);

/// "m,b,r,degenerate" CSV for a fit-metrics result.
std::string fit_metrics_csv(const FitMetrics& fm);

} // namespace rotodet::eval

#endif
