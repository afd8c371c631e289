#ifndef ROTODET_GRNN_HPP
#define ROTODET_GRNN_HPP

#include <span>
#include <vector>

#include "rotodet/matrix.hpp"

namespace rotodet::grnn {

/// Generalized regression network: the "training set" is stored verbatim and
/// prediction is a Gaussian-kernel weighted average of the stored targets.
/// Immutable after fit; predict is pure and safe to call from many threads.
struct GrnnModel {
    Matrix centers;              // m x k, feature-space training vectors
    std::vector<double> targets; // degrees, each in [-90, 90]
    double spread = 1.0;         // Gaussian kernel sigma, > 0

    int count() const { return centers.rows(); }
    int dim() const { return centers.cols(); }
};

struct Prediction {
    double value = 0.0;   // degrees; lies in [min target, max target] when density > 0
    double density = 0.0; // mean kernel mass; 0 signals the underflow fallback
};

/// Store the training set; no iterative optimization happens here.
/// Throws EmptyTrainingSet, TargetOutOfRange or NonPositiveSpread.
GrnnModel fit(const Matrix& centers, std::span<const double> targets, double spread);

/// value = sum(t_i w_i) / sum(w_i) with w_i = exp(-|x - c_i|^2 / (2 sigma^2));
/// density = sum(w_i) / m. If every kernel underflows (sum < 1e-300) the
/// result falls back to the nearest center's target (lowest index on ties)
/// with density 0, so far-away queries stay defined and rejectable.
Prediction predict(const GrnnModel& model, std::span<const double> x);

/// Prediction for training center `index` with its own kernel excluded: the
/// density a fresh sample at that spot would see. Used to calibrate the
/// detector's rejection threshold (self-inclusive densities are all ~1/m).
Prediction predict_leave_one_out(const GrnnModel& model, int index);

/// Leave-one-out spread selection over an explicit grid of candidate sigmas;
/// ties go to the smaller value. Throws TooFewSamples when m < 3.
double select_spread(const Matrix& centers, std::span<const double> targets,
                     std::span<const double> grid);

/// Same, with the default grid {0.05, 0.1, 0.2, 0.5, 1, 2, 5} scaled by the
/// median pairwise center distance.
double select_spread(const Matrix& centers, std::span<const double> targets);

/// Median pairwise Euclidean distance between rows (the default grid scale).
double median_pairwise_distance(const Matrix& centers);

} // namespace rotodet::grnn

#endif
