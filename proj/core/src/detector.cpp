#include "rotodet/detector.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <json.hpp>

namespace rotodet::detect {

namespace {

bool detection_order(const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return a.size < b.size;
}

} // namespace

std::vector<std::pair<double, Image>> build_pyramid(const Image& img, const ScanConfig& cfg) {
    std::vector<std::pair<double, Image>> levels;
    double scale = 1.0;
    while (scale < cfg.min_scale) scale *= cfg.scale_factor;
    while (scale <= cfg.max_scale) {
        const int w = static_cast<int>(std::lround(img.width() / scale));
        const int h = static_cast<int>(std::lround(img.height() / scale));
        if (w < cfg.window || h < cfg.window) break;
        levels.emplace_back(scale, scale == 1.0 ? img : resize(img, w, h));
        scale *= cfg.scale_factor;
    }
    return levels;
}

double iou(const Detection& a, const Detection& b) {
    const int x1 = std::max(a.x, b.x);
    const int y1 = std::max(a.y, b.y);
    const int x2 = std::min(a.x + a.size, b.x + b.size);
    const int y2 = std::min(a.y + a.size, b.y + b.size);
    const double inter = std::max(0, x2 - x1) * static_cast<double>(std::max(0, y2 - y1));
    const double uni = static_cast<double>(a.size) * a.size +
                       static_cast<double>(b.size) * b.size - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Detection> nms(std::vector<Detection> dets, double overlap) {
    std::sort(dets.begin(), dets.end(), detection_order);
    std::vector<Detection> kept;
    std::vector<bool> dead(dets.size(), false);
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (dead[i]) continue;
        kept.push_back(dets[i]);
        for (std::size_t j = i + 1; j < dets.size(); ++j) {
            if (!dead[j] && iou(dets[i], dets[j]) > overlap) dead[j] = true;
        }
    }
    return kept;
}

namespace {

struct LevelTask {
    int level;
    double scale;
    int y; // window row in level coordinates
};

// Evaluate one grid row of windows at one pyramid level.
void scan_row(const Image& level_img, double scale, int y, const ScanConfig& cfg,
              const pca::PcaModel& pca_model, const grnn::GrnnModel& grnn_model,
              int orig_w, int orig_h, std::vector<Detection>& out) {
    const int w = cfg.window;
    for (int x = 0; x + w <= level_img.width(); x += cfg.stride) {
        Image patch = crop(level_img, x, y, w, w);
        if (!cfg.whole_image_denoise) patch = wavelet::denoise(patch, cfg.denoise);
        const auto features = normalize_patch(patch);
        const auto projected = pca::transform(pca_model, features);
        const grnn::Prediction pred = grnn::predict(grnn_model, projected);
        if (pred.density >= cfg.density_threshold && pred.value >= -90.0 &&
            pred.value <= 90.0) {
            Detection det;
            det.size = static_cast<int>(std::lround(w * scale));
            det.size = std::min({det.size, orig_w, orig_h});
            det.x = static_cast<int>(std::lround(x * scale));
            det.y = static_cast<int>(std::lround(y * scale));
            det.x = std::clamp(det.x, 0, orig_w - det.size);
            det.y = std::clamp(det.y, 0, orig_h - det.size);
            det.angle_deg = pred.value;
            det.confidence = pred.density;
            out.push_back(det);
        }
    }
}

} // namespace

std::vector<Detection> scan(const Image& img, const pca::PcaModel& pca_model,
                            const grnn::GrnnModel& grnn_model, const ScanConfig& cfg) {
    if (cfg.window < 8) throw ModelMismatch("scan: window must be at least 8");
    if (pca_model.dim != cfg.window * cfg.window)
        throw ModelMismatch("scan: PCA input dimension != window^2");
    if (grnn_model.dim() != pca_model.rank)
        throw ModelMismatch("scan: GRNN dimension != PCA rank");
    if (cfg.stride < 1) throw ModelMismatch("scan: stride must be >= 1");

    auto pyramid = build_pyramid(img, cfg);
    if (cfg.whole_image_denoise)
        for (auto& [scale, level] : pyramid) level = wavelet::denoise(level, cfg.denoise);

    // One task per (level, grid row); results land in per-task slots so the
    // concatenation order never depends on scheduling.
    std::vector<LevelTask> tasks;
    for (std::size_t l = 0; l < pyramid.size(); ++l) {
        const auto& [scale, level_img] = pyramid[l];
        for (int y = 0; y + cfg.window <= level_img.height(); y += cfg.stride)
            tasks.push_back({static_cast<int>(l), scale, y});
    }

    std::vector<std::vector<Detection>> slots(tasks.size());
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || tasks.size() <= 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            const auto& task = tasks[t];
            scan_row(pyramid[task.level].second, task.scale, task.y, cfg, pca_model,
                     grnn_model, img.width(), img.height(), slots[t]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= tasks.size()) return;
                const auto& task = tasks[t];
                scan_row(pyramid[task.level].second, task.scale, task.y, cfg, pca_model,
                         grnn_model, img.width(), img.height(), slots[t]);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<Detection> all;
    for (auto& slot : slots)
        all.insert(all.end(), slot.begin(), slot.end());

    auto kept = nms(std::move(all), cfg.nms_overlap);
    std::sort(kept.begin(), kept.end(), detection_order);
    return kept;
}

Image annotate(const Image& img, std::span<const Detection> dets) {
    Image out = img;
    const auto mark = [&](int x, int y) {
        if (x >= 0 && y >= 0 && x < out.width() && y < out.height()) out.at(x, y) = 1.0;
    };
    for (const Detection& d : dets) {
        for (int i = 0; i < d.size; ++i) {
            mark(d.x + i, d.y);
            mark(d.x + i, d.y + d.size - 1);
            mark(d.x, d.y + i);
            mark(d.x + d.size - 1, d.y + i);
        }
        // radius line: 0 degrees points straight up, positive turns clockwise
        double s, c;
        sincos_deg(d.angle_deg, s, c);
        const int cx = d.x + d.size / 2;
        const int cy = d.y + d.size / 2;
        for (int t = 0; t <= d.size / 2; ++t) {
            mark(cx + static_cast<int>(std::lround(t * s)),
                 cy - static_cast<int>(std::lround(t * c)));
        }
    }
    return out;
}

std::string detections_to_json(std::string_view image_name, int window,
                               std::span<const Detection> dets) {
    nlohmann::ordered_json doc;
    doc["image"] = std::string(image_name);
    doc["window"] = window;
    doc["detections"] = nlohmann::ordered_json::array();
    for (const Detection& d : dets) {
        nlohmann::ordered_json j;
        j["x"] = d.x;
        j["y"] = d.y;
        j["size"] = d.size;
        j["angle_deg"] = std::round(d.angle_deg * 100.0) / 100.0;
        j["confidence"] = d.confidence;
        doc["detections"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

std::vector<Detection> detections_from_json(std::string_view json_text) {
    const auto doc = nlohmann::json::parse(json_text);
    std::vector<Detection> dets;
    for (const auto& j : doc.at("detections")) {
        Detection d;
        d.x = j.at("x").get<int>();
        d.y = j.at("y").get<int>();
        d.size = j.at("size").get<int>();
        d.angle_deg = j.at("angle_deg").get<double>();
        d.confidence = j.at("confidence").get<double>();
        dets.push_back(d);
    }
    return dets;
}

} // namespace rotodet::detect
