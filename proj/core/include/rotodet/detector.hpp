#ifndef ROTODET_DETECTOR_HPP
#define ROTODET_DETECTOR_HPP

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rotodet/grnn.hpp"
#include "rotodet/image.hpp"
#include "rotodet/pca.hpp"
#include "rotodet/wavelet.hpp"

namespace rotodet::detect {

struct ScanConfig {
    int window = 15;
    int stride = 1;
    double scale_factor = 1.2;
    double min_scale = 1.0;
    double max_scale = 1e9;
    double density_threshold = 0.0; // theta; windows below it are rejected
    double nms_overlap = 0.3;       // IoU above this is suppressed
    wavelet::DenoiseSettings denoise{};
    // Default is the literal per-window order crop -> denoise -> project;
    // whole-image mode denoises each pyramid level once instead, for speed.
    bool whole_image_denoise = false;
    int jobs = 1;
};

struct Detection {
    int x = 0;    // top-left, original-image coordinates
    int y = 0;
    int size = 0; // window * scale, pixels
    double angle_deg = 0.0;   // in [-90, 90]; 0 = upright, positive clockwise
    double confidence = 0.0;  // GRNN kernel density
};

/// Downscale by powers of the scale factor until a dimension drops below the
/// window. Each level is resized from the original image; scales recorded
/// exactly.
std::vector<std::pair<double, Image>> build_pyramid(const Image& img, const ScanConfig& cfg);

/// Greedy non-maximum suppression: keep the highest-confidence remaining
/// detection, drop everything overlapping it with IoU > overlap. Ties break
/// by (y, x, size) ascending, so the result is fully deterministic.
std::vector<Detection> nms(std::vector<Detection> dets, double overlap);

/// Intersection-over-union of two square detections.
double iou(const Detection& a, const Detection& b);

/// Slide the window over every pyramid level: crop, denoise, normalize,
/// PCA-project, GRNN-predict; keep windows whose kernel density reaches the
/// threshold and whose angle lies in [-90, 90]. Output is NMS-filtered and
/// sorted by confidence descending, then (y, x, size) ascending. The result
/// is identical for any cfg.jobs value, ordering included.
///
/// Throws ModelMismatch when window^2 != pca.dim or pca.rank != grnn.dim().
/// An image smaller than the window yields an empty list.
std::vector<Detection> scan(const Image& img, const pca::PcaModel& pca_model,
                            const grnn::GrnnModel& grnn_model, const ScanConfig& cfg);

/// Draw 1-pixel box borders at value 1.0 plus a radius line from the box
/// center at the detected angle (0 = vertical up, positive clockwise).
/// Everything is clipped to the image; other pixels are untouched.
Image annotate(const Image& img, std::span<const Detection> dets);

/// Detection report: {"image":..., "window":..., "detections":[...]} with
/// angles rounded to 2 decimals. Byte-stable across runs and job counts.
std::string detections_to_json(std::string_view image_name, int window,
                               std::span<const Detection> dets);

/// Parse a report produced by detections_to_json.
std::vector<Detection> detections_from_json(std::string_view json_text);

} // namespace rotodet::detect

#endif
