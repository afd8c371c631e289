#include "rotodet/wavelet.hpp"

#include <algorithm>
#include <cmath>

namespace rotodet::wavelet {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

// Half-sample symmetric reflection of index t into [0, n).
int reflect_hs(int t, int n) {
    while (t < 0 || t >= n) {
        if (t < 0) t = -t - 1;
        if (t >= n) t = 2 * n - 1 - t;
    }
    return t;
}

int analysis_len(int n, int filter_len, Boundary boundary) {
    if (boundary == Boundary::periodic) return (n + 1) / 2;
    return (n + filter_len - 1) / 2;
}

// Decimated analysis of one line. Output spans must have analysis_len
// entries. Periodization extends odd lengths by repeating the last sample.
void analyze_line(std::span<const double> x, const FilterPair& f, Boundary boundary,
                  std::span<double> a, std::span<double> d) {
    const int n = static_cast<int>(x.size());
    const int L = f.length();
    if (boundary == Boundary::periodic) {
        const int ne = (n % 2 == 0) ? n : n + 1;
        const auto at = [&](int idx) { return x[idx < n ? idx : n - 1]; };
        const int half = ne / 2;
        for (int i = 0; i < half; ++i) {
            double sa = 0.0, sd = 0.0;
            for (int k = 0; k < L; ++k) {
                const double v = at((2 * i + k) % ne);
                sa += f.lowpass[k] * v;
                sd += f.highpass[k] * v;
            }
            a[i] = sa;
            d[i] = sd;
        }
    } else {
        const int n_out = (n + L - 1) / 2;
        for (int i = 0; i < n_out; ++i) {
            double sa = 0.0, sd = 0.0;
            for (int k = 0; k < L; ++k) {
                const int src = 2 * i + 1 + k - (L - 1);
                const double v = x[reflect_hs(src, n)];
                sa += f.lowpass[k] * v;
                sd += f.highpass[k] * v;
            }
            a[i] = sa;
            d[i] = sd;
        }
    }
}

// Exact inverse of analyze_line for a line that originally had n samples.
void synthesize_line(std::span<const double> a, std::span<const double> d,
                     const FilterPair& f, Boundary boundary, std::span<double> y) {
    const int n = static_cast<int>(y.size());
    const int L = f.length();
    if (boundary == Boundary::periodic) {
        const int ne = (n % 2 == 0) ? n : n + 1;
        std::vector<double> buf(static_cast<std::size_t>(ne), 0.0);
        const int half = ne / 2;
        for (int i = 0; i < half; ++i) {
            for (int k = 0; k < L; ++k) {
                const int idx = (2 * i + k) % ne;
                buf[idx] += a[i] * f.lowpass[k] + d[i] * f.highpass[k];
            }
        }
        for (int j = 0; j < n; ++j) y[j] = buf[j];
    } else {
        const int n_out = (n + L - 1) / 2;
        std::fill(y.begin(), y.end(), 0.0);
        for (int i = 0; i < n_out; ++i) {
            for (int k = 0; k < L; ++k) {
                const int src = 2 * i + 1 + k - (L - 1);
                if (src >= 0 && src < n)
                    y[src] += a[i] * f.lowpass[k] + d[i] * f.highpass[k];
            }
        }
    }
}

// One decimated 2D level: rows first, then columns of each half.
void dwt2_level(const Matrix& in, const FilterPair& f, Boundary boundary,
                Matrix& ll, DetailBands& bands) {
    const int rows = in.rows(), cols = in.cols();
    const int ca = analysis_len(cols, f.length(), boundary);
    const int ra = analysis_len(rows, f.length(), boundary);

    Matrix row_a(rows, ca), row_d(rows, ca);
    std::vector<double> a(static_cast<std::size_t>(ca)), d(static_cast<std::size_t>(ca));
    for (int r = 0; r < rows; ++r) {
        analyze_line(in.row(r), f, boundary, a, d);
        for (int c = 0; c < ca; ++c) {
            row_a(r, c) = a[c];
            row_d(r, c) = d[c];
        }
    }

    ll = Matrix(ra, ca);
    bands.horizontal = Matrix(ra, ca);
    bands.vertical = Matrix(ra, ca);
    bands.diagonal = Matrix(ra, ca);
    std::vector<double> col(static_cast<std::size_t>(rows));
    std::vector<double> ca_buf(static_cast<std::size_t>(ra)), cd_buf(static_cast<std::size_t>(ra));
    for (int c = 0; c < ca; ++c) {
        for (int r = 0; r < rows; ++r) col[r] = row_a(r, c);
        analyze_line(col, f, boundary, ca_buf, cd_buf);
        for (int r = 0; r < ra; ++r) {
            ll(r, c) = ca_buf[r];
            bands.horizontal(r, c) = cd_buf[r];
        }
        for (int r = 0; r < rows; ++r) col[r] = row_d(r, c);
        analyze_line(col, f, boundary, ca_buf, cd_buf);
        for (int r = 0; r < ra; ++r) {
            bands.vertical(r, c) = ca_buf[r];
            bands.diagonal(r, c) = cd_buf[r];
        }
    }
}

Matrix idwt2_level(const Matrix& ll, const DetailBands& bands, const FilterPair& f,
                   Boundary boundary, int rows, int cols) {
    const int ca = analysis_len(cols, f.length(), boundary);
    const int ra = analysis_len(rows, f.length(), boundary);
    if (ll.rows() != ra || ll.cols() != ca || bands.horizontal.rows() != ra ||
        bands.horizontal.cols() != ca || bands.vertical.rows() != ra ||
        bands.vertical.cols() != ca || bands.diagonal.rows() != ra ||
        bands.diagonal.cols() != ca)
        throw ShapeMismatch("idwt2: band sizes inconsistent with recorded level size");

    Matrix row_a(rows, ca), row_d(rows, ca);
    std::vector<double> a(static_cast<std::size_t>(ra)), d(static_cast<std::size_t>(ra));
    std::vector<double> col(static_cast<std::size_t>(rows));
    for (int c = 0; c < ca; ++c) {
        for (int r = 0; r < ra; ++r) {
            a[r] = ll(r, c);
            d[r] = bands.horizontal(r, c);
        }
        synthesize_line(a, d, f, boundary, col);
        for (int r = 0; r < rows; ++r) row_a(r, c) = col[r];
        for (int r = 0; r < ra; ++r) {
            a[r] = bands.vertical(r, c);
            d[r] = bands.diagonal(r, c);
        }
        synthesize_line(a, d, f, boundary, col);
        for (int r = 0; r < rows; ++r) row_d(r, c) = col[r];
    }

    Matrix out(rows, cols);
    std::vector<double> ra_buf(static_cast<std::size_t>(ca)), rd_buf(static_cast<std::size_t>(ca));
    std::vector<double> line(static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < ca; ++c) {
            ra_buf[c] = row_a(r, c);
            rd_buf[c] = row_d(r, c);
        }
        synthesize_line(ra_buf, rd_buf, f, boundary, line);
        for (int c = 0; c < cols; ++c) out(r, c) = line[c];
    }
    return out;
}

// Undecimated analysis along a line with filter taps spaced by `stride`.
void swt_analyze_line(std::span<const double> x, const FilterPair& f, int stride,
                      std::span<double> a, std::span<double> d) {
    const int n = static_cast<int>(x.size());
    const int L = f.length();
    for (int i = 0; i < n; ++i) {
        double sa = 0.0, sd = 0.0;
        for (int k = 0; k < L; ++k) {
            const double v = x[(i + stride * k) % n];
            sa += f.lowpass[k] * v;
            sd += f.highpass[k] * v;
        }
        a[i] = sa;
        d[i] = sd;
    }
}

// Adjoint/2 of swt_analyze_line; exact inverse for orthonormal pairs.
void swt_synthesize_line(std::span<const double> a, std::span<const double> d,
                         const FilterPair& f, int stride, std::span<double> y) {
    const int n = static_cast<int>(y.size());
    const int L = f.length();
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < L; ++k) {
            const int idx = ((j - stride * k) % n + n) % n;
            s += f.lowpass[k] * a[idx] + f.highpass[k] * d[idx];
        }
        y[j] = 0.5 * s;
    }
}

void swt2_level(const Matrix& in, const FilterPair& f, int stride, Matrix& ll,
                DetailBands& bands) {
    const int rows = in.rows(), cols = in.cols();
    Matrix row_a(rows, cols), row_d(rows, cols);
    std::vector<double> a(static_cast<std::size_t>(cols)), d(static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        swt_analyze_line(in.row(r), f, stride, a, d);
        for (int c = 0; c < cols; ++c) {
            row_a(r, c) = a[c];
            row_d(r, c) = d[c];
        }
    }
    ll = Matrix(rows, cols);
    bands.horizontal = Matrix(rows, cols);
    bands.vertical = Matrix(rows, cols);
    bands.diagonal = Matrix(rows, cols);
    std::vector<double> col(static_cast<std::size_t>(rows)), ca(col.size()), cd(col.size());
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) col[r] = row_a(r, c);
        swt_analyze_line(col, f, stride, ca, cd);
        for (int r = 0; r < rows; ++r) {
            ll(r, c) = ca[r];
            bands.horizontal(r, c) = cd[r];
        }
        for (int r = 0; r < rows; ++r) col[r] = row_d(r, c);
        swt_analyze_line(col, f, stride, ca, cd);
        for (int r = 0; r < rows; ++r) {
            bands.vertical(r, c) = ca[r];
            bands.diagonal(r, c) = cd[r];
        }
    }
}

Matrix iswt2_level(const Matrix& ll, const DetailBands& bands, const FilterPair& f,
                   int stride) {
    const int rows = ll.rows(), cols = ll.cols();
    if (bands.horizontal.rows() != rows || bands.horizontal.cols() != cols ||
        bands.vertical.rows() != rows || bands.vertical.cols() != cols ||
        bands.diagonal.rows() != rows || bands.diagonal.cols() != cols)
        throw ShapeMismatch("iswt2: band sizes differ within a level");

    Matrix row_a(rows, cols), row_d(rows, cols);
    std::vector<double> a(static_cast<std::size_t>(rows)), d(a.size()), col(a.size());
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            a[r] = ll(r, c);
            d[r] = bands.horizontal(r, c);
        }
        swt_synthesize_line(a, d, f, stride, col);
        for (int r = 0; r < rows; ++r) row_a(r, c) = col[r];
        for (int r = 0; r < rows; ++r) {
            a[r] = bands.vertical(r, c);
            d[r] = bands.diagonal(r, c);
        }
        swt_synthesize_line(a, d, f, stride, col);
        for (int r = 0; r < rows; ++r) row_d(r, c) = col[r];
    }
    Matrix out(rows, cols);
    std::vector<double> ra(static_cast<std::size_t>(cols)), rd(ra.size()), line(ra.size());
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            ra[c] = row_a(r, c);
            rd[c] = row_d(r, c);
        }
        swt_synthesize_line(ra, rd, f, stride, line);
        for (int c = 0; c < cols; ++c) out(r, c) = line[c];
    }
    return out;
}

double median_abs(std::span<const double> v) {
    std::vector<double> m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m[i] = std::fabs(v[i]);
    std::sort(m.begin(), m.end());
    const std::size_t n = m.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return m[n / 2];
    return 0.5 * (m[n / 2 - 1] + m[n / 2]);
}

void threshold_band(Matrix& band, const ThresholdRule& rule, double t) {
    auto data = band.data();
    if (rule.mode == ThresholdMode::soft) {
        for (double& v : data) v = soft_threshold(v, t);
    } else {
        for (double& v : data) v = hard_threshold(v, t);
    }
}

} // namespace

FilterPair filters_for(Family family) {
    FilterPair f;
    if (family == Family::haar) {
        f.lowpass = {1.0 / kSqrt2, 1.0 / kSqrt2};
    } else {
        const double s3 = std::sqrt(3.0);
        const double d = 4.0 * kSqrt2;
        f.lowpass = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
    }
    // quadrature mirror: g[k] = (-1)^k h[L-1-k]
    const int L = f.length();
    f.highpass.resize(L);
    for (int k = 0; k < L; ++k)
        f.highpass[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.lowpass[L - 1 - k];
    return f;
}

SubbandPyramid dwt2(const Matrix& input, const WaveletSpec& spec, int levels) {
    if (levels < 1) throw TooManyLevels("dwt2: levels must be >= 1");
    const FilterPair f = filters_for(spec.family);
    SubbandPyramid pyr;
    Matrix cur = input;
    for (int l = 0; l < levels; ++l) {
        if (cur.rows() < f.length() || cur.cols() < f.length())
            throw TooManyLevels("dwt2: dimension fell below the filter length");
        pyr.level_sizes.emplace_back(cur.rows(), cur.cols());
        Matrix ll;
        DetailBands bands;
        dwt2_level(cur, f, spec.boundary, ll, bands);
        pyr.details.push_back(std::move(bands));
        cur = std::move(ll);
    }
    pyr.approx = std::move(cur);
    return pyr;
}

Matrix idwt2(const SubbandPyramid& pyr, const WaveletSpec& spec) {
    if (pyr.levels() < 1 || pyr.level_sizes.size() != pyr.details.size())
        throw ShapeMismatch("idwt2: malformed pyramid");
    const FilterPair f = filters_for(spec.family);
    Matrix cur = pyr.approx;
    for (int l = pyr.levels() - 1; l >= 0; --l) {
        const auto [rows, cols] = pyr.level_sizes[l];
        cur = idwt2_level(cur, pyr.details[l], f, spec.boundary, rows, cols);
    }
    return cur;
}

SwtPyramid swt2(const Matrix& input, const WaveletSpec& spec, int levels) {
    if (levels < 1) throw TooManyLevels("swt2: levels must be >= 1");
    if (spec.boundary != Boundary::periodic)
        throw UnsupportedBoundary("swt2: only the periodic boundary is supported");
    const int div = 1 << levels;
    if (input.rows() % div != 0 || input.cols() % div != 0)
        throw BadDimensions("swt2: dimensions must be divisible by 2^levels");
    const FilterPair f = filters_for(spec.family);
    SwtPyramid pyr;
    Matrix cur = input;
    for (int l = 0; l < levels; ++l) {
        Matrix ll;
        DetailBands bands;
        swt2_level(cur, f, 1 << l, ll, bands);
        pyr.details.push_back(std::move(bands));
        cur = std::move(ll);
    }
    pyr.approx = std::move(cur);
    return pyr;
}

Matrix iswt2(const SwtPyramid& pyr, const WaveletSpec& spec) {
    if (pyr.levels() < 1) throw ShapeMismatch("iswt2: empty pyramid");
    if (spec.boundary != Boundary::periodic)
        throw UnsupportedBoundary("iswt2: only the periodic boundary is supported");
    const FilterPair f = filters_for(spec.family);
    Matrix cur = pyr.approx;
    for (int l = pyr.levels() - 1; l >= 0; --l)
        cur = iswt2_level(cur, pyr.details[l], f, 1 << l);
    return cur;
}

double soft_threshold(double v, double t) {
    const double mag = std::fabs(v) - t;
    if (mag <= 0.0) return 0.0;
    return v < 0.0 ? -mag : mag;
}

double hard_threshold(double v, double t) {
    return std::fabs(v) >= t ? v : 0.0;
}

double estimate_noise_sigma(const SubbandPyramid& pyr) {
    if (pyr.levels() < 1) throw ShapeMismatch("estimate_noise_sigma: empty pyramid");
    return median_abs(pyr.details.front().diagonal.data()) / 0.6745;
}

double estimate_noise_sigma(const SwtPyramid& pyr) {
    if (pyr.levels() < 1) throw ShapeMismatch("estimate_noise_sigma: empty pyramid");
    return median_abs(pyr.details.front().diagonal.data()) / 0.6745;
}

double universal_threshold(double sigma, std::size_t n) {
    if (n < 1) throw BadDimensions("universal_threshold: n must be >= 1");
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

Image denoise(const Image& img, const DenoiseSettings& settings) {
    if (settings.rule.selection == ThresholdSelection::fixed && settings.rule.fixed_t < 0.0)
        throw Error("denoise: fixed threshold must be non-negative");

    const int w = img.width(), h = img.height();
    Matrix m(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m(y, x) = img.at(x, y);

    Matrix rec;
    if (settings.backend == Backend::dwt) {
        SubbandPyramid pyr = dwt2(m, settings.spec, settings.levels);
        const double t = settings.rule.selection == ThresholdSelection::fixed
                             ? settings.rule.fixed_t
                             : universal_threshold(estimate_noise_sigma(pyr),
                                                   static_cast<std::size_t>(w) * h);
        for (auto& bands : pyr.details) {
            threshold_band(bands.horizontal, settings.rule, t);
            threshold_band(bands.vertical, settings.rule, t);
            threshold_band(bands.diagonal, settings.rule, t);
        }
        rec = idwt2(pyr, settings.spec);
    } else {
        SwtPyramid pyr = swt2(m, settings.spec, settings.levels);
        const double t = settings.rule.selection == ThresholdSelection::fixed
                             ? settings.rule.fixed_t
                             : universal_threshold(estimate_noise_sigma(pyr),
                                                   static_cast<std::size_t>(w) * h);
        for (auto& bands : pyr.details) {
            threshold_band(bands.horizontal, settings.rule, t);
            threshold_band(bands.vertical, settings.rule, t);
            threshold_band(bands.diagonal, settings.rule, t);
        }
        rec = iswt2(pyr, settings.spec);
    }

    Image out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = std::clamp(rec(y, x), 0.0, 1.0);
    return out;
}

} // namespace rotodet::wavelet
