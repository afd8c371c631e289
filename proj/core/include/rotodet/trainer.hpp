#ifndef ROTODET_TRAINER_HPP
#define ROTODET_TRAINER_HPP

#include <cstdint>
#include <vector>

#include "rotodet/bundle.hpp"
#include "rotodet/image.hpp"

namespace rotodet::trainer {

struct TrainOptions {
    int window = 15;
    wavelet::DenoiseSettings denoise{};
    int pca_rank = 0;              // 0 = choose by explained variance
    double variance_target = 0.95; // cumulative explained-variance goal
    int pca_rank_cap = 40;
    double spread = 0.0;           // 0 = leave-one-out grid selection
    double theta_percentile = 1.0; // density-threshold calibration percentile
    std::uint64_t seed = 0;        // recorded in the bundle metadata
};

struct TrainSummary {
    int samples = 0;
    int pca_rank = 0;
    double spread = 0.0;
    double density_threshold = 0.0;
    double mean_abs_train_error_deg = 0.0;
    double grnn_fit_seconds = 0.0;
};

/// Full training pipeline: denoise + normalize each labeled patch, fit PCA
/// (rank fixed or by variance target), project, fit the GRNN (spread fixed
/// or by leave-one-out selection), then calibrate the density threshold as
/// the given percentile of the training patches' own densities.
///
/// Throws DimensionMismatch when a patch does not match the window size or
/// labels disagree in count; target range errors propagate from grnn::fit.
bundle::ModelBundle train(const std::vector<Image>& patches,
                          const std::vector<double>& angles_deg, const TrainOptions& opt,
                          TrainSummary* summary = nullptr);

} // namespace rotodet::trainer

#endif
