#include "rotodet/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rotodet::pca {

namespace {

double offdiag_frobenius(const Matrix& a) {
    double s = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
            if (r != c) s += a(r, c) * a(r, c);
    return std::sqrt(s);
}

// Flip each column so its largest-magnitude entry (lowest index on ties) is
// positive.
void fix_signs(Matrix& basis) {
    for (int c = 0; c < basis.cols(); ++c) {
        int arg = 0;
        double best = std::fabs(basis(0, c));
        for (int r = 1; r < basis.rows(); ++r) {
            const double mag = std::fabs(basis(r, c));
            if (mag > best) {
                best = mag;
                arg = r;
            }
        }
        if (basis(arg, c) < 0.0)
            for (int r = 0; r < basis.rows(); ++r) basis(r, c) = -basis(r, c);
    }
}

// Replace a degenerate column with the first canonical direction that stays
// independent of the columns already placed (Gram-Schmidt against them).
void canonical_fill(Matrix& basis, int col) {
    const int d = basis.rows();
    for (int cand = 0; cand < d; ++cand) {
        std::vector<double> v(static_cast<std::size_t>(d), 0.0);
        v[cand] = 1.0;
        for (int c = 0; c < col; ++c) {
            double dot = 0.0;
            for (int r = 0; r < d; ++r) dot += v[r] * basis(r, c);
            for (int r = 0; r < d; ++r) v[r] -= dot * basis(r, c);
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 1e-8) {
            for (int r = 0; r < d; ++r) basis(r, col) = v[r] / norm;
            return;
        }
    }
    throw Error("pca: could not complete a degenerate basis column");
}

} // namespace

void jacobi_eigen_symmetric(const Matrix& sym, std::vector<double>& eigenvalues,
                            Matrix& eigenvectors) {
    const int n = sym.rows();
    if (n != sym.cols()) throw ShapeMismatch("jacobi: matrix not square");
    Matrix a = sym;
    Matrix v = Matrix::identity(n);

    constexpr int kMaxSweeps = 100;
    constexpr double kTol = 1e-12;
    for (int sweep = 0; sweep < kMaxSweeps && offdiag_frobenius(a) >= kTol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    eigenvalues.resize(static_cast<std::size_t>(n));
    eigenvectors = Matrix(n, n);
    for (int c = 0; c < n; ++c) {
        eigenvalues[c] = a(order[c], order[c]);
        for (int r = 0; r < n; ++r) eigenvectors(r, c) = v(r, order[c]);
    }
}

PcaModel fit(const Matrix& samples, int k) {
    const int m = samples.rows();
    const int d = samples.cols();
    if (m < 2) throw TooFewSamples("pca: need at least two samples");
    const int max_rank = std::min(d, m - 1);
    if (k < 1 || k > max_rank) throw RankTooHigh("pca: k must be in [1, min(d, m-1)]");

    PcaModel model;
    model.dim = d;
    model.rank = k;
    model.mean.assign(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) model.mean[j] += samples(i, j);
    for (double& v : model.mean) v /= static_cast<double>(m);

    Matrix centered(m, d);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) centered(i, j) = samples(i, j) - model.mean[j];

    double total = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) total += centered(i, j) * centered(i, j);
    model.total_variance = total / static_cast<double>(m - 1);

    std::vector<double> eigvals;
    Matrix basis(d, k);
    constexpr double kDegenerate = 1e-12;

    if (d <= m) {
        Matrix cov(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b) {
                double s = 0.0;
                for (int i = 0; i < m; ++i) s += centered(i, a) * centered(i, b);
                s /= static_cast<double>(m - 1);
                cov(a, b) = s;
                cov(b, a) = s;
            }
        Matrix vecs;
        jacobi_eigen_symmetric(cov, eigvals, vecs);
        for (int c = 0; c < k; ++c) {
            if (eigvals[c] > kDegenerate) {
                for (int r = 0; r < d; ++r) basis(r, c) = vecs(r, c);
            } else {
                canonical_fill(basis, c);
            }
        }
    } else {
        // eigenface small-sample route: m x m Gram matrix, then back-project
        Matrix gram(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = a; b < m; ++b) {
                double s = 0.0;
                for (int j = 0; j < d; ++j) s += centered(a, j) * centered(b, j);
                s /= static_cast<double>(m - 1);
                gram(a, b) = s;
                gram(b, a) = s;
            }
        Matrix vecs;
        jacobi_eigen_symmetric(gram, eigvals, vecs);
        for (int c = 0; c < k; ++c) {
            if (eigvals[c] > kDegenerate) {
                std::vector<double> dir(static_cast<std::size_t>(d), 0.0);
                for (int i = 0; i < m; ++i) {
                    const double u = vecs(i, c);
                    if (u == 0.0) continue;
                    for (int j = 0; j < d; ++j) dir[j] += u * centered(i, j);
                }
                double norm = 0.0;
                for (double x : dir) norm += x * x;
                norm = std::sqrt(norm);
                if (norm > kDegenerate) {
                    for (int r = 0; r < d; ++r) basis(r, c) = dir[r] / norm;
                } else {
                    canonical_fill(basis, c);
                }
            } else {
                canonical_fill(basis, c);
            }
        }
    }

    model.eigenvalues.assign(eigvals.begin(), eigvals.begin() + k);
    for (double& v : model.eigenvalues)
        if (v < 0.0) v = 0.0;
    fix_signs(basis);
    model.basis = std::move(basis);
    return model;
}

PcaModel truncate(const PcaModel& model, int k) {
    if (k < 1 || k > model.rank) throw RankTooHigh("pca: truncation rank out of range");
    PcaModel out;
    out.dim = model.dim;
    out.rank = k;
    out.mean = model.mean;
    out.total_variance = model.total_variance;
    out.eigenvalues.assign(model.eigenvalues.begin(), model.eigenvalues.begin() + k);
    out.basis = Matrix(model.dim, k);
    for (int r = 0; r < model.dim; ++r)
        for (int c = 0; c < k; ++c) out.basis(r, c) = model.basis(r, c);
    return out;
}

std::vector<double> transform(const PcaModel& model, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(model.dim))
        throw DimensionMismatch("pca transform: vector length != d");
    std::vector<double> y(static_cast<std::size_t>(model.rank), 0.0);
    for (int c = 0; c < model.rank; ++c) {
        double acc = 0.0;
        for (int r = 0; r < model.dim; ++r)
            acc += model.basis(r, c) * (x[r] - model.mean[r]);
        y[c] = acc;
    }
    return y;
}

std::vector<double> inverse_transform(const PcaModel& model, std::span<const double> y) {
    if (y.size() != static_cast<std::size_t>(model.rank))
        throw DimensionMismatch("pca inverse_transform: vector length != k");
    std::vector<double> x(model.mean.begin(), model.mean.end());
    for (int r = 0; r < model.dim; ++r) {
        double acc = 0.0;
        for (int c = 0; c < model.rank; ++c) acc += model.basis(r, c) * y[c];
        x[r] += acc;
    }
    return x;
}

std::vector<double> explained_variance_ratio(const PcaModel& model) {
    std::vector<double> out(model.eigenvalues.size(), 0.0);
    if (model.total_variance <= 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = model.eigenvalues[i] / model.total_variance;
    return out;
}

int pick_rank_by_variance(const PcaModel& model, double target, int cap) {
    const auto ratios = explained_variance_ratio(model);
    const int limit = std::min<int>(cap, static_cast<int>(ratios.size()));
    double cum = 0.0;
    for (int i = 0; i < limit; ++i) {
        cum += ratios[i];
        if (cum >= target) return i + 1;
    }
    return limit;
}

} // namespace rotodet::pca
