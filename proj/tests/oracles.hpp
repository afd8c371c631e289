// Test-side reference implementations, kept independent of the library code
// they check. Nothing here is included by core/.
#ifndef ROTODET_TESTS_ORACLES_HPP
#define ROTODET_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "rotodet/image.hpp"
#include "rotodet/matrix.hpp"

namespace oracles {

// ----------------------------------------------------------------- images --

// Scalar 1D bilinear interpolation with pixel centers at (i+0.5)/n and
// clamp-to-edge, evaluated directly from the formula.
inline double bilinear_1d(std::span<const double> src, int n_out, int i_out) {
    const int n = static_cast<int>(src.size());
    const double x = (i_out + 0.5) * (static_cast<double>(n) / n_out) - 0.5;
    double x0 = std::floor(x);
    const double f = x - x0;
    auto cl = [&](int v) { return v < 0 ? 0 : (v >= n ? n - 1 : v); };
    return src[cl(static_cast<int>(x0))] * (1.0 - f) + src[cl(static_cast<int>(x0) + 1)] * f;
}

// Exact index permutations for square images rotated by multiples of 90
// degrees (positive = clockwise with y pointing down).
inline rotodet::Image rot90_cw(const rotodet::Image& in) {
    const int n = in.width();
    rotodet::Image out(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) out.at(x, y) = in.at(y, n - 1 - x);
    return out;
}
inline rotodet::Image rot90_ccw(const rotodet::Image& in) {
    const int n = in.width();
    rotodet::Image out(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) out.at(x, y) = in.at(n - 1 - y, x);
    return out;
}
inline rotodet::Image rot180(const rotodet::Image& in) {
    const int n = in.width();
    rotodet::Image out(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) out.at(x, y) = in.at(n - 1 - x, n - 1 - y);
    return out;
}

// ---------------------------------------------------------------- wavelet --

// The level-1 separable orthonormal Haar analysis of a 2x2 block written as
// an explicit 4x4 matrix acting on [x00, x01, x10, x11] (row-major), giving
// [ll, horizontal, vertical, diagonal].
inline std::array<double, 4> haar2x2(const std::array<double, 4>& x) {
    const double h = 0.5;
    // rows: lowpass-x lowpass-y; lowpass-x highpass-y; highpass-x lowpass-y;
    // highpass-x highpass-y, with the (first - second) highpass convention
    const double mat[4][4] = {
        {h, h, h, h},
        {h, h, -h, -h},
        {h, -h, h, -h},
        {h, -h, -h, h},
    };
    std::array<double, 4> out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r] += mat[r][c] * x[c];
    return out;
}

inline std::array<double, 4> haar2x2_inverse(const std::array<double, 4>& c) {
    // the matrix above is orthogonal and symmetric, so it is its own inverse
    return haar2x2(c);
}

// ------------------------------------------------------------------- pca ---

// Classical Jacobi (largest off-diagonal pivot each step), deliberately a
// different algorithm variant from the library's cyclic sweeps.
inline void jacobi_classical(const rotodet::Matrix& sym, std::vector<double>& eigvals,
                             rotodet::Matrix& eigvecs) {
    const int n = sym.rows();
    rotodet::Matrix a = sym;
    rotodet::Matrix v = rotodet::Matrix::identity(n);
    for (int iter = 0; iter < 100 * n * n; ++iter) {
        int p = 0, q = 1;
        double big = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c)
                if (std::fabs(a(r, c)) > big) {
                    big = std::fabs(a(r, c));
                    p = r;
                    q = c;
                }
        if (big < 1e-13) break;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t =
            (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
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
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });
    eigvals.resize(n);
    eigvecs = rotodet::Matrix(n, n);
    for (int c = 0; c < n; ++c) {
        eigvals[c] = a(order[c], order[c]);
        for (int r = 0; r < n; ++r) eigvecs(r, c) = v(r, order[c]);
    }
}

// Sample covariance with divisor m-1, formed explicitly.
inline rotodet::Matrix covariance(const rotodet::Matrix& samples) {
    const int m = samples.rows(), d = samples.cols();
    std::vector<double> mean(d, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) mean[j] += samples(i, j);
    for (double& v : mean) v /= m;
    rotodet::Matrix cov(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            double s = 0.0;
            for (int i = 0; i < m; ++i)
                s += (samples(i, a) - mean[a]) * (samples(i, b) - mean[b]);
            cov(a, b) = s / (m - 1);
        }
    return cov;
}

// ------------------------------------------------------------- statistics --

inline double mse(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

inline double psnr(std::span<const double> noisy, std::span<const double> clean) {
    const double e = mse(noisy, clean);
    return e <= 0.0 ? 1e9 : 10.0 * std::log10(1.0 / e);
}

// chi-square critical value, 17 dof at the 0.01 tail (18-bin uniformity test)
inline constexpr double kChi2Crit17Dof01 = 33.4087;

} // namespace oracles

#endif
