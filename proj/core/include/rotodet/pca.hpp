#ifndef ROTODET_PCA_HPP
#define ROTODET_PCA_HPP

#include <span>
#include <vector>

#include "rotodet/matrix.hpp"

namespace rotodet::pca {

/// Principal-component model: mean, orthonormal basis (d x k, columns are
/// components ordered by non-increasing eigenvalue), covariance eigenvalues
/// (divisor m-1) and the total variance (covariance trace) from fit time.
///
/// Sign convention: each basis column's largest-magnitude entry is positive,
/// ties broken by lowest index.
struct PcaModel {
    int dim = 0;  // d
    int rank = 0; // k
    std::vector<double> mean;
    Matrix basis; // d x k
    std::vector<double> eigenvalues;
    double total_variance = 0.0;
};

/// Fit on an m x d sample matrix. Uses the d x d covariance directly when
/// d <= m, otherwise the m x m Gram matrix of centered samples with
/// back-projection and renormalization (the eigenface small-sample trick).
/// Eigen-decomposition: cyclic Jacobi, converged at off-diagonal Frobenius
/// norm < 1e-12.
///
/// Throws TooFewSamples (m < 2) or RankTooHigh (k > min(d, m-1)). Identical
/// samples are valid: all eigenvalues 0 and the basis falls back to the
/// first k canonical directions.
PcaModel fit(const Matrix& samples, int k);

/// Keep only the leading k components of a fitted model.
PcaModel truncate(const PcaModel& model, int k);

/// Bt (x - mean)
std::vector<double> transform(const PcaModel& model, std::span<const double> x);

/// B y + mean
std::vector<double> inverse_transform(const PcaModel& model, std::span<const double> y);

/// eigenvalue_i / total variance; entries sum to <= 1.
std::vector<double> explained_variance_ratio(const PcaModel& model);

/// Smallest k whose cumulative explained variance reaches `target`, capped.
int pick_rank_by_variance(const PcaModel& model, double target, int cap);

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
/// eigenvalues (descending) and the matching eigenvectors as columns.
/// Deterministic sweep order; stops when the off-diagonal Frobenius norm
/// drops below 1e-12 (or after a fixed sweep cap).
void jacobi_eigen_symmetric(const Matrix& sym, std::vector<double>& eigenvalues,
                            Matrix& eigenvectors);

} // namespace rotodet::pca

#endif
