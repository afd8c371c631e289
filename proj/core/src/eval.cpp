#include "rotodet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rotodet/rng.hpp"

namespace rotodet::eval {

FitMetrics fit_metrics(std::span<const double> targets, std::span<const double> outputs) {
    if (targets.size() != outputs.size())
        throw DimensionMismatch("fit_metrics: length mismatch");
    const std::size_t n = targets.size();
    if (n < 2) throw TooFewPoints("fit_metrics: need at least two points");

    double mt = 0.0, mo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mt += targets[i];
        mo += outputs[i];
    }
    mt /= static_cast<double>(n);
    mo /= static_cast<double>(n);

    double vt = 0.0, vo = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = targets[i] - mt;
        const double dv = outputs[i] - mo;
        vt += dt * dt;
        vo += dv * dv;
        cov += dt * dv;
    }

    FitMetrics fm;
    if (vt == 0.0 || vo == 0.0) {
        fm.degenerate = true;
        return fm;
    }
    fm.m = cov / vt;
    fm.b = mo - fm.m * mt;
    fm.r = cov / std::sqrt(vt * vo);
    return fm;
}

double misclassification_rate(std::span<const double> ground,
                              std::span<const double> predicted, double tol_deg) {
    if (ground.size() != predicted.size())
        throw DimensionMismatch("misclassification_rate: length mismatch");
    if (ground.empty()) return 0.0;
    std::size_t miss = 0;
    for (std::size_t i = 0; i < ground.size(); ++i)
        if (std::fabs(predicted[i] - ground[i]) > tol_deg) ++miss;
    return static_cast<double>(miss) / static_cast<double>(ground.size());
}

namespace {

bool matches(const detect::Detection& det, const GroundTruthBox& box,
             const MatchCriteria& c) {
    detect::Detection gt;
    gt.x = box.x;
    gt.y = box.y;
    gt.size = box.size;
    return detect::iou(det, gt) >= c.iou &&
           std::fabs(det.angle_deg - box.angle_deg) <= c.angle_tol_deg;
}

double rate_or_full(int matched, int total) {
    // nothing to detect, nothing missed
    return total == 0 ? 1.0 : static_cast<double>(matched) / total;
}

} // namespace

RateReport detection_rates(std::span<const LabeledScene> scenes,
                           std::span<const std::vector<detect::Detection>> detections,
                           const MatchCriteria& criteria) {
    if (scenes.size() != detections.size())
        throw DimensionMismatch("detection_rates: scene/detection count mismatch");

    RateRow measured;
    measured.name = "rotodet (measured)";
    int false_positives = 0;

    for (std::size_t s = 0; s < scenes.size(); ++s) {
        const auto& boxes = scenes[s].boxes;
        const auto& dets = detections[s];
        for (const GroundTruthBox& box : boxes) {
            const bool upright = std::fabs(box.angle_deg) <= 10.0;
            const bool hit = std::any_of(dets.begin(), dets.end(), [&](const auto& d) {
                return matches(d, box, criteria);
            });
            ++measured.all_total;
            measured.all_matched += hit;
            if (upright) {
                ++measured.upright_total;
                measured.upright_matched += hit;
            } else {
                ++measured.rotated_total;
                measured.rotated_matched += hit;
            }
        }
        for (const auto& d : dets) {
            const bool any = std::any_of(boxes.begin(), boxes.end(), [&](const auto& b) {
                return matches(d, b, criteria);
            });
            if (!any) ++false_positives;
        }
    }

    measured.all_rate = rate_or_full(measured.all_matched, measured.all_total);
    measured.upright_rate = rate_or_full(measured.upright_matched, measured.upright_total);
    measured.rotated_rate = rate_or_full(measured.rotated_matched, measured.rotated_total);

    RateReport report;
    // literature reference rows, rendered as static text only
    RateRow vj;
    vj.name = "Viola-Jones (reported)";
    vj.reported = true;
    vj.all_rate = 0.921;
    vj.upright_rate = 0.930;
    vj.rotated_rate = 0.941;
    RateRow rbk;
    rbk.name = "Rowley-Baluja-Kanade (reported)";
    rbk.reported = true;
    rbk.all_rate = -1.0; // not published
    rbk.upright_rate = 0.901;
    rbk.rotated_rate = 0.899;
    report.rows.push_back(vj);
    report.rows.push_back(rbk);
    report.rows.push_back(measured);
    report.scenes = static_cast<int>(scenes.size());
    report.false_positives = false_positives;
    report.false_per_scene =
        scenes.empty() ? 0.0 : static_cast<double>(false_positives) / scenes.size();
    return report;
}

std::string render_rate_table(const RateReport& report) {
    const auto cell = [](const RateRow& row, int which) {
        char buf[64];
        double rate;
        int matched, total;
        switch (which) {
            case 0: rate = row.all_rate; matched = row.all_matched; total = row.all_total; break;
            case 1: rate = row.upright_rate; matched = row.upright_matched; total = row.upright_total; break;
            default: rate = row.rotated_rate; matched = row.rotated_matched; total = row.rotated_total; break;
        }
        if (rate < 0.0) return std::string("-");
        if (row.reported) {
            std::snprintf(buf, sizeof buf, "%.1f%%", rate * 100.0);
        } else {
            std::snprintf(buf, sizeof buf, "%.1f%% (%d/%d)", rate * 100.0, matched, total);
        }
        return std::string(buf);
    };

    const char* headers[] = {"All Faces", "Upright Faces (<= 10 deg)",
                             "Rotated Faces (> 10 deg)"};
    std::size_t name_w = std::string("Detector").size();
    for (const auto& row : report.rows) name_w = std::max(name_w, row.name.size());
    std::size_t col_w[3];
    for (int c = 0; c < 3; ++c) col_w[c] = std::string(headers[c]).size();
    for (const auto& row : report.rows)
        for (int c = 0; c < 3; ++c) col_w[c] = std::max(col_w[c], cell(row, c).size());

    const auto pad = [](const std::string& s, std::size_t w) {
        return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
    };

    std::string out = pad("Detector", name_w);
    for (int c = 0; c < 3; ++c) out += "  " + pad(headers[c], col_w[c]);
    out += "\n";
    out += std::string(out.size() - 1, '-') + "\n";
    for (const auto& row : report.rows) {
        out += pad(row.name, name_w);
        for (int c = 0; c < 3; ++c) out += "  " + pad(cell(row, c), col_w[c]);
        out += "\n";
    }
    char fp[128];
    std::snprintf(fp, sizeof fp, "False positives: %d over %d scenes (%.3f per scene)\n",
                  report.false_positives, report.scenes, report.false_per_scene);
    out += fp;
    return out;
}

Image default_template(int window) {
    if (window < 8) throw OutOfBounds("default_template: window must be at least 8");
    // face-like pattern, rendered with 4x4 supersampling; the eye/mouth
    // placement breaks vertical symmetry and the unequal eye sizes break
    // horizontal symmetry, so every rotation angle leaves a distinct patch
    const auto shade = [](double u, double v) {
        const double du = u - 0.5, dv = v - 0.5;
        double val = 0.15;
        if ((du / 0.40) * (du / 0.40) + (dv / 0.46) * (dv / 0.46) <= 1.0) val = 0.85;
        const double elx = u - 0.33, ely = v - 0.36;
        if (elx * elx + ely * ely <= 0.10 * 0.10) val = 0.10;
        const double erx = u - 0.67, ery = v - 0.36;
        if (erx * erx + ery * ery <= 0.07 * 0.07) val = 0.10;
        if (std::fabs(u - 0.52) <= 0.035 && v >= 0.44 && v <= 0.60) val = 0.45;
        if (std::fabs(u - 0.5) <= 0.16 && std::fabs(v - 0.72) <= 0.05) val = 0.20;
        return val;
    };
    Image out(window, window);
    constexpr int ss = 4;
    for (int y = 0; y < window; ++y) {
        for (int x = 0; x < window; ++x) {
            double acc = 0.0;
            for (int sy = 0; sy < ss; ++sy)
                for (int sx = 0; sx < ss; ++sx)
                    acc += shade((x + (sx + 0.5) / ss) / window,
                                 (y + (sy + 0.5) / ss) / window);
            out.at(x, y) = acc / (ss * ss);
        }
    }
    return out;
}

namespace {

// Rotated + brightness-jittered + noisy copy of the template. Draw order is
// part of the format: angle, jitter gain, jitter offset, then per-pixel noise
// row-major.
Image make_instance(Rng& rng, const Image& tmpl, const SynthParams& p, double& angle_out) {
    angle_out = rng.uniform(p.angle_min, p.angle_max);
    Image img = rotate(tmpl, angle_out);
    const double gain = 1.0 - p.brightness_jitter * rng.uniform();
    const double offset = (1.0 - gain) * rng.uniform();
    for (double& v : img.pixels()) {
        v = gain * v + offset;
        if (p.noise_sigma > 0.0) v += p.noise_sigma * rng.gaussian();
        v = std::clamp(v, 0.0, 1.0);
    }
    return img;
}

} // namespace

PatchSet synth_patches(std::uint64_t seed, int n, const Image& tmpl, const SynthParams& p) {
    if (tmpl.width() != p.window || tmpl.height() != p.window)
        throw DimensionMismatch("synth_patches: template size != window");
    PatchSet set;
    set.patches.reserve(static_cast<std::size_t>(n));
    set.angles.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
        double angle;
        set.patches.push_back(make_instance(rng, tmpl, p, angle));
        set.angles.push_back(angle);
    }
    return set;
}

std::vector<LabeledScene> synth_dataset(std::uint64_t seed, int n_scenes, const Image& tmpl,
                                        const SynthParams& p) {
    if (tmpl.width() != p.window || tmpl.height() != p.window)
        throw DimensionMismatch("synth_dataset: template size != window");
    if (p.scene_size < p.window + 2)
        throw DimensionMismatch("synth_dataset: scene too small for the window");

    std::vector<LabeledScene> scenes;
    scenes.reserve(static_cast<std::size_t>(n_scenes));
    for (int s = 0; s < n_scenes; ++s) {
        const std::uint64_t scene_seed = Rng::derive(seed, static_cast<std::uint64_t>(s));
        Rng rng(scene_seed);

        // smooth sinusoid-mixture background around mid gray
        const int size = p.scene_size;
        struct Wave {
            double amp, fx, fy, phase;
        };
        Wave waves[3];
        for (Wave& w : waves) {
            const double amp = rng.uniform(0.03, 0.09);
            const double freq = rng.uniform(1.0, 3.0);
            const double orient = rng.uniform(0.0, 6.283185307179586);
            const double phase = rng.uniform(0.0, 6.283185307179586);
            w = {amp, freq * std::cos(orient), freq * std::sin(orient), phase};
        }
        Image img(size, size);
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                double v = 0.45;
                for (const Wave& w : waves)
                    v += w.amp * std::sin(6.283185307179586 * (w.fx * x + w.fy * y) / size +
                                          w.phase);
                img.at(x, y) = std::clamp(v, 0.0, 1.0);
            }

        // embed one instance away from the borders
        double angle = rng.uniform(p.angle_min, p.angle_max);
        Image block = rotate(tmpl, angle);
        const double gain = 1.0 - p.brightness_jitter * rng.uniform();
        const double offset = (1.0 - gain) * rng.uniform();
        const int x0 = rng.uniform_int(1, size - p.window - 1);
        const int y0 = rng.uniform_int(1, size - p.window - 1);
        for (int j = 0; j < p.window; ++j)
            for (int i = 0; i < p.window; ++i)
                img.at(x0 + i, y0 + j) = gain * block.at(i, j) + offset;

        if (p.noise_sigma > 0.0)
            for (double& v : img.pixels())
                v = std::clamp(v + p.noise_sigma * rng.gaussian(), 0.0, 1.0);

        LabeledScene scene;
        scene.image = std::move(img);
        scene.boxes.push_back({x0, y0, p.window, angle});
        scene.seed = scene_seed;
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

std::string timing_csv(const TimingReport& t) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "metric,value\n"
                  "grnn_fit_seconds,%.17g\n"
                  "grnn_train_mse,%.17g\n"
                  "rprop_train_seconds,%.17g\n"
                  "rprop_epochs,%d\n"
                  "rprop_final_mse,%.17g\n",
                  t.grnn_fit_seconds, t.grnn_train_mse, t.rprop_train_seconds,
                  t.rprop_epochs, t.rprop_final_mse);
    return buf;
}

std::string fit_metrics_csv(const FitMetrics& fm) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "m,b,r,degenerate\n%.17g,%.17g,%.17g,%d\n", fm.m, fm.b,
                  fm.r, fm.degenerate ? 1 : 0);
    return buf;
}

} // namespace rotodet::eval
