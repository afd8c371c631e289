#include "rotodet/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rotodet/grnn.hpp"
#include "rotodet/pca.hpp"

namespace rotodet::trainer {

bundle::ModelBundle train(const std::vector<Image>& patches,
                          const std::vector<double>& angles_deg, const TrainOptions& opt,
                          TrainSummary* summary) {
    const int m = static_cast<int>(patches.size());
    if (m < 1) throw EmptyTrainingSet("train: no patches");
    if (angles_deg.size() != patches.size())
        throw DimensionMismatch("train: label count != patch count");
    const int w = opt.window;
    for (int i = 0; i < m; ++i)
        if (patches[i].width() != w || patches[i].height() != w)
            throw DimensionMismatch("train: patch " + std::to_string(i) +
                                    " is not " + std::to_string(w) + "x" + std::to_string(w));

    const int d = w * w;
    Matrix features(m, d);
    for (int i = 0; i < m; ++i) {
        const Image clean = wavelet::denoise(patches[i], opt.denoise);
        const auto vec = normalize_patch(clean);
        std::copy(vec.begin(), vec.end(), features.row(i).begin());
    }

    // PCA: full rank first so the variance-based rank choice sees the whole
    // spectrum, then truncate. A single sample skips PCA-proper and keeps
    // the canonical first axis (fit needs m >= 2).
    pca::PcaModel pca_model;
    int k;
    if (m >= 2) {
        const int full = std::min(d, m - 1);
        pca_model = pca::fit(features, full);
        k = opt.pca_rank > 0 ? std::min(opt.pca_rank, full)
                             : pca::pick_rank_by_variance(pca_model, opt.variance_target,
                                                          opt.pca_rank_cap);
        pca_model = pca::truncate(pca_model, k);
    } else {
        k = 1;
        pca_model.dim = d;
        pca_model.rank = 1;
        pca_model.mean.assign(features.row(0).begin(), features.row(0).end());
        pca_model.basis = Matrix(d, 1);
        pca_model.basis(0, 0) = 1.0;
        pca_model.eigenvalues = {0.0};
        pca_model.total_variance = 0.0;
    }

    Matrix projected(m, k);
    for (int i = 0; i < m; ++i) {
        const auto y = pca::transform(pca_model, features.row(i));
        std::copy(y.begin(), y.end(), projected.row(i).begin());
    }

    double spread = opt.spread;
    if (spread <= 0.0) {
        if (m >= 3) {
            spread = grnn::select_spread(projected, angles_deg);
        } else {
            spread = std::max(grnn::median_pairwise_distance(projected), 1.0);
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    grnn::GrnnModel grnn_model = grnn::fit(projected, angles_deg, spread);
    const double fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // density threshold: percentile of leave-one-out training densities
    // (with the self-kernel included every density is ~1/m and the threshold
    // would reject all genuinely held-out hits)
    std::vector<double> densities(static_cast<std::size_t>(m));
    double abs_err = 0.0;
    for (int i = 0; i < m; ++i) {
        densities[static_cast<std::size_t>(i)] =
            grnn::predict_leave_one_out(grnn_model, i).density;
        const auto pred = grnn::predict(grnn_model, projected.row(i));
        abs_err += std::fabs(pred.value - angles_deg[static_cast<std::size_t>(i)]);
    }
    std::sort(densities.begin(), densities.end());
    const int rank = std::max(
        0, static_cast<int>(std::ceil(opt.theta_percentile / 100.0 * m)) - 1);
    const double theta = densities[static_cast<std::size_t>(std::min(rank, m - 1))];

    bundle::ModelBundle b;
    b.window = w;
    b.denoise = opt.denoise;
    b.pca = std::move(pca_model);
    b.grnn = std::move(grnn_model);
    b.density_threshold = theta;
    b.meta.sample_count = m;
    b.meta.seed = opt.seed;
    bundle::validate(b);

    if (summary) {
        summary->samples = m;
        summary->pca_rank = k;
        summary->spread = spread;
        summary->density_threshold = theta;
        summary->mean_abs_train_error_deg = abs_err / m;
        summary->grnn_fit_seconds = fit_seconds;
    }
    return b;
}

} // namespace rotodet::trainer
