#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "rotodet/eval.hpp"
#include "rotodet/rng.hpp"

using namespace rotodet;
using namespace rotodet::eval;

TEST_CASE("fit metrics: perfect predictions") {
    const double t[] = {-50, -10, 0, 25, 80};
    const auto fm = fit_metrics(t, t);
    CHECK_FALSE(fm.degenerate);
    CHECK(std::fabs(fm.m - 1.0) < 1e-12);
    CHECK(std::fabs(fm.b) < 1e-12);
    CHECK(std::fabs(fm.r - 1.0) < 1e-12);
}

TEST_CASE("fit metrics: exact affine map 2t+3") {
    const double t[] = {-30, -5, 0, 10, 40, 60};
    double o[6];
    for (int i = 0; i < 6; ++i) o[i] = 2.0 * t[i] + 3.0;
    const auto fm = fit_metrics(t, o);
    CHECK(fm.m == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fm.b == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fm.r == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit metrics: the {0,1,2} vs {0,2,2} case") {
    const double t[] = {0, 1, 2};
    const double o[] = {0, 2, 2};
    const auto fm = fit_metrics(t, o);
    CHECK(fm.m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fm.b == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(fm.r == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    CHECK(fm.r == doctest::Approx(0.8660).epsilon(1e-4));
}

TEST_CASE("fit metrics: degenerate variance and tiny inputs") {
    const double t[] = {5, 5, 5};
    const double o[] = {1, 2, 3};
    const auto fm = fit_metrics(t, o);
    CHECK(fm.degenerate);
    CHECK(fm.m == 0.0);
    CHECK(fm.b == 0.0);
    CHECK(fm.r == 0.0);
    const auto fm2 = fit_metrics(o, t); // constant outputs
    CHECK(fm2.degenerate);

    const double one[] = {1.0};
    CHECK_THROWS_AS(fit_metrics(one, one), TooFewPoints);
}

TEST_CASE("fit metrics: joint shifts move only the intercept") {
    Rng rng(71);
    std::vector<double> t(20), o(20);
    for (int i = 0; i < 20; ++i) {
        t[i] = rng.uniform(-90, 90);
        o[i] = 0.8 * t[i] + 4.0 + rng.gaussian();
    }
    const auto base = fit_metrics(t, o);
    const double c = 17.5;
    std::vector<double> ts(t), os(o);
    for (int i = 0; i < 20; ++i) {
        ts[i] += c;
        os[i] += c;
    }
    const auto moved = fit_metrics(ts, os);
    CHECK(std::fabs(moved.m - base.m) < 1e-10);
    CHECK(std::fabs(moved.r - base.r) < 1e-10);
    CHECK(std::fabs(moved.b - (base.b + c * (1.0 - base.m))) < 1e-10);
}

TEST_CASE("misclassification rate") {
    const double g[] = {0, 10, -20, 45, 90};
    CHECK(misclassification_rate(g, g) == 0.0);

    double off[5];
    for (int i = 0; i < 5; ++i) off[i] = g[i] + 180.0;
    CHECK(misclassification_rate(g, off) == 1.0);

    const double one_bad[] = {0, 10, -20, 45, 120};
    CHECK(misclassification_rate(g, one_bad) == doctest::Approx(0.2).epsilon(1e-12));

    const double close[] = {9, 19, -11, 54, 81};
    CHECK(misclassification_rate(g, close, 10.0) == 0.0);
}

namespace {

LabeledScene scene_with_box(int x, int y, double angle) {
    LabeledScene s;
    s.image = Image(64, 64, 0.5);
    s.boxes.push_back({x, y, 15, angle});
    return s;
}

} // namespace

TEST_CASE("detection rates: zero detections, oracle detections, false positives") {
    std::vector<LabeledScene> scenes = {scene_with_box(5, 5, 3.0),
                                        scene_with_box(20, 9, -48.0)};

    std::vector<std::vector<detect::Detection>> none(2);
    const auto empty = detection_rates(scenes, none);
    const auto& row = empty.rows.back();
    CHECK(row.all_rate == 0.0);
    CHECK(row.upright_rate == 0.0);
    CHECK(row.rotated_rate == 0.0);
    CHECK(empty.false_positives == 0);

    std::vector<std::vector<detect::Detection>> oracle(2);
    for (int s = 0; s < 2; ++s)
        for (const auto& b : scenes[s].boxes)
            oracle[s].push_back({b.x, b.y, b.size, b.angle_deg, 1.0});
    const auto full = detection_rates(scenes, oracle);
    CHECK(full.rows.back().all_rate == 1.0);
    CHECK(full.rows.back().upright_rate == 1.0);
    CHECK(full.rows.back().rotated_rate == 1.0);
    CHECK(full.rows.back().upright_total == 1);
    CHECK(full.rows.back().rotated_total == 1);

    // a detection in empty space counts as a false positive; a matching
    // detection with a wrong angle also fails the combined criterion
    std::vector<std::vector<detect::Detection>> noisy = oracle;
    noisy[0].push_back({40, 40, 15, 0.0, 0.9});
    noisy[1][0].angle_deg += 30.0;
    const auto mixed = detection_rates(scenes, noisy);
    CHECK(mixed.rows.back().all_matched == 1);
    CHECK(mixed.false_positives == 2);
    CHECK(mixed.false_per_scene == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adding a matching detection never lowers a rate") {
    std::vector<LabeledScene> scenes = {scene_with_box(5, 5, 30.0),
                                        scene_with_box(12, 30, -5.0)};
    std::vector<std::vector<detect::Detection>> dets(2);
    dets[0].push_back({5, 5, 15, 28.0, 0.9});
    const auto before = detection_rates(scenes, dets);
    dets[1].push_back({13, 30, 15, -6.0, 0.8});
    const auto after = detection_rates(scenes, dets);
    CHECK(after.rows.back().all_rate >= before.rows.back().all_rate);
    CHECK(after.rows.back().upright_rate >= before.rows.back().upright_rate);
    CHECK(after.rows.back().rotated_rate >= before.rows.back().rotated_rate);
}

TEST_CASE("rate table carries the literature rows as static text") {
    std::vector<LabeledScene> scenes = {scene_with_box(5, 5, 3.0)};
    std::vector<std::vector<detect::Detection>> dets(1);
    dets[0].push_back({5, 5, 15, 2.0, 1.0});
    const std::string table = render_rate_table(detection_rates(scenes, dets));
    CHECK(table.find("Viola-Jones (reported)") != std::string::npos);
    CHECK(table.find("92.1%") != std::string::npos);
    CHECK(table.find("94.1%") != std::string::npos);
    CHECK(table.find("Rowley-Baluja-Kanade (reported)") != std::string::npos);
    CHECK(table.find("90.1%") != std::string::npos);
    CHECK(table.find("89.9%") != std::string::npos);
    CHECK(table.find("100.0% (1/1)") != std::string::npos);
    CHECK(table.find("False positives: 0") != std::string::npos);
}

TEST_CASE("default template is a valid, asymmetric patch") {
    const Image tmpl = default_template(15);
    CHECK(tmpl.width() == 15);
    CHECK(tmpl.height() == 15);
    for (double p : tmpl.pixels()) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    // rotating by 180 degrees must change it (eyes above, mouth below)
    const Image flipped = oracles::rot180(tmpl);
    double diff = 0.0;
    for (int i = 0; i < 15 * 15; ++i)
        diff = std::max(diff, std::fabs(flipped.pixels()[i] - tmpl.pixels()[i]));
    CHECK(diff > 0.2);
}

TEST_CASE("synth patches: determinism, labels, exactness at zero noise") {
    const Image tmpl = default_template(15);
    SynthParams p;
    const auto a = synth_patches(11, 6, tmpl, p);
    const auto b = synth_patches(11, 6, tmpl, p);
    REQUIRE(a.patches.size() == 6);
    CHECK(a.angles == b.angles);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 15 * 15; ++j)
            CHECK(a.patches[i].pixels()[j] == b.patches[i].pixels()[j]);
    for (double angle : a.angles) {
        CHECK(angle >= -90.0);
        CHECK(angle <= 90.0);
    }

    // sigma = 0, fixed angle 0, jitter off: patches are the template exactly
    SynthParams exact;
    exact.noise_sigma = 0.0;
    exact.brightness_jitter = 0.0;
    exact.angle_min = exact.angle_max = 0.0;
    const auto clean = synth_patches(4, 2, tmpl, exact);
    for (const auto& patch : clean.patches)
        for (int j = 0; j < 15 * 15; ++j)
            CHECK(patch.pixels()[j] == doctest::Approx(tmpl.pixels()[j]).epsilon(1e-12));
}

TEST_CASE("synth scenes: determinism and exact embedding at zero noise") {
    const Image tmpl = default_template(15);
    SynthParams p;
    const auto a = synth_dataset(13, 3, tmpl, p);
    const auto b = synth_dataset(13, 3, tmpl, p);
    REQUIRE(a.size() == 3);
    for (int s = 0; s < 3; ++s) {
        CHECK(a[s].boxes[0].x == b[s].boxes[0].x);
        CHECK(a[s].boxes[0].angle_deg == b[s].boxes[0].angle_deg);
        for (std::size_t i = 0; i < a[s].image.pixels().size(); ++i)
            CHECK(a[s].image.pixels()[i] == b[s].image.pixels()[i]);
        const auto& box = a[s].boxes[0];
        CHECK(box.x >= 0);
        CHECK(box.x + box.size <= a[s].image.width());
        CHECK(box.y >= 0);
        CHECK(box.y + box.size <= a[s].image.height());
    }

    SynthParams exact;
    exact.noise_sigma = 0.0;
    exact.brightness_jitter = 0.0;
    exact.angle_min = exact.angle_max = 0.0;
    const auto scenes = synth_dataset(5, 1, tmpl, exact);
    const auto& box = scenes[0].boxes[0];
    for (int j = 0; j < 15; ++j)
        for (int i = 0; i < 15; ++i)
            CHECK(scenes[0].image.at(box.x + i, box.y + j) ==
                  doctest::Approx(tmpl.at(i, j)).epsilon(1e-12));
}

TEST_CASE("synth angles are uniform (chi-square, 18 bins)") {
    const Image tmpl = default_template(15);
    SynthParams p;
    p.noise_sigma = 0.0;
    const int n = 10000;
    const auto set = synth_patches(97, n, tmpl, p);
    const int bins = 18;
    int counts[18] = {0};
    for (double angle : set.angles) {
        int b = static_cast<int>((angle + 90.0) / 180.0 * bins);
        if (b == bins) b = bins - 1;
        ++counts[b];
    }
    const double expect = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b)
        chi2 += (counts[b] - expect) * (counts[b] - expect) / expect;
    CHECK(chi2 < oracles::kChi2Crit17Dof01); // p > 0.01
}

TEST_CASE("timing CSV reparses to identical values") {
    TimingReport t;
    t.grnn_fit_seconds = 1.2345678901234567e-4;
    t.grnn_train_mse = 3.3e-5;
    t.rprop_train_seconds = 12.5;
    t.rprop_epochs = 321;
    t.rprop_final_mse = 0.0099;
    const std::string csv = timing_csv(t);

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "metric,value");
    double parsed[4];
    int epochs = -1;
    int row = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const std::string value = line.substr(comma + 1);
        if (line.substr(0, comma) == "rprop_epochs") epochs = std::stoi(value);
        else parsed[row++] = std::stod(value);
    }
    CHECK(row == 4);
    CHECK(parsed[0] == t.grnn_fit_seconds);
    CHECK(parsed[1] == t.grnn_train_mse);
    CHECK(parsed[2] == t.rprop_train_seconds);
    CHECK(parsed[3] == t.rprop_final_mse);
    CHECK(epochs == 321);

    FitMetrics fm;
    fm.m = 1.000000001;
    fm.b = -2.5e-9;
    fm.r = 0.999999;
    const std::string mcsv = fit_metrics_csv(fm);
    CHECK(mcsv.find("m,b,r,degenerate") == 0);
}
