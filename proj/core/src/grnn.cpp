#include "rotodet/grnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rotodet::grnn {

namespace {

constexpr double kUnderflowGuard = 1e-300;

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Kernel regression over the subset of centers with index != skip
// (skip < 0 means use all). Shared by predict and the LOO selector.
Prediction evaluate(const Matrix& centers, std::span<const double> targets, double spread,
                    std::span<const double> x, int skip) {
    const int m = centers.rows();
    const double inv = 1.0 / (2.0 * spread * spread);
    double wsum = 0.0, twsum = 0.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    int best_i = -1;
    for (int i = 0; i < m; ++i) {
        if (i == skip) continue;
        const double d2 = squared_distance(centers.row(i), x);
        if (d2 < best_d2) {
            best_d2 = d2;
            best_i = i;
        }
        const double w = std::exp(-d2 * inv);
        wsum += w;
        twsum += targets[i] * w;
    }
    if (wsum < kUnderflowGuard) return {targets[best_i], 0.0};
    return {twsum / wsum, wsum / static_cast<double>(m)};
}

} // namespace

GrnnModel fit(const Matrix& centers, std::span<const double> targets, double spread) {
    if (centers.rows() < 1) throw EmptyTrainingSet("grnn: no training samples");
    if (targets.size() != static_cast<std::size_t>(centers.rows()))
        throw DimensionMismatch("grnn: target count != center count");
    if (!(spread > 0.0)) throw NonPositiveSpread("grnn: spread must be positive");
    for (double t : targets)
        if (!(t >= -90.0 && t <= 90.0))
            throw TargetOutOfRange("grnn: target outside [-90, 90] degrees");
    GrnnModel model;
    model.centers = centers;
    model.targets.assign(targets.begin(), targets.end());
    model.spread = spread;
    return model;
}

Prediction predict(const GrnnModel& model, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(model.dim()))
        throw DimensionMismatch("grnn predict: query length != model dimension");
    return evaluate(model.centers, model.targets, model.spread, x, -1);
}

Prediction predict_leave_one_out(const GrnnModel& model, int index) {
    if (index < 0 || index >= model.count())
        throw DimensionMismatch("grnn predict_leave_one_out: index out of range");
    if (model.count() == 1) return {model.targets[0], 0.0};
    return evaluate(model.centers, model.targets, model.spread,
                    model.centers.row(index), index);
}

double median_pairwise_distance(const Matrix& centers) {
    const int m = centers.rows();
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            dists.push_back(std::sqrt(squared_distance(centers.row(i), centers.row(j))));
    if (dists.empty()) return 0.0;
    std::sort(dists.begin(), dists.end());
    const std::size_t n = dists.size();
    return n % 2 == 1 ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
}

double select_spread(const Matrix& centers, std::span<const double> targets,
                     std::span<const double> grid) {
    const int m = centers.rows();
    if (m < 3) throw TooFewSamples("grnn select_spread: need at least three samples");
    if (targets.size() != static_cast<std::size_t>(m))
        throw DimensionMismatch("grnn select_spread: target count != center count");
    if (grid.empty()) throw Error("grnn select_spread: empty grid");

    std::vector<double> candidates(grid.begin(), grid.end());
    std::sort(candidates.begin(), candidates.end());
    for (double s : candidates)
        if (!(s > 0.0)) throw NonPositiveSpread("grnn select_spread: grid value <= 0");

    double best_sigma = candidates.front();
    double best_err = std::numeric_limits<double>::infinity();
    for (double sigma : candidates) {
        double err = 0.0;
        for (int i = 0; i < m; ++i) {
            const Prediction p = evaluate(centers, targets, sigma, centers.row(i), i);
            err += std::fabs(p.value - targets[i]);
        }
        err /= static_cast<double>(m);
        if (err < best_err) { // strict: ties keep the smaller sigma
            best_err = err;
            best_sigma = sigma;
        }
    }
    return best_sigma;
}

double select_spread(const Matrix& centers, std::span<const double> targets) {
    double scale = median_pairwise_distance(centers);
    if (scale <= 0.0) scale = 1.0; // all centers coincide; any positive scale works
    const double multipliers[] = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
    std::vector<double> grid;
    grid.reserve(std::size(multipliers));
    for (double mul : multipliers) grid.push_back(mul * scale);
    return select_spread(centers, targets, grid);
}

} // namespace rotodet::grnn
