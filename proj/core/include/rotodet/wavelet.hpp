#ifndef ROTODET_WAVELET_HPP
#define ROTODET_WAVELET_HPP

#include <cstddef>
#include <vector>

#include "rotodet/image.hpp"
#include "rotodet/matrix.hpp"

namespace rotodet::wavelet {

enum class Family { haar, db2 };

/// Boundary handling for the decimated transform.
///  - periodic: periodization; band length ceil(n/2) per axis (odd lengths
///    are first extended by one trailing sample). Orthonormal, so energy is
///    preserved exactly.
///  - symmetric: half-sample symmetric extension with the standard expansive
///    convolution; band length floor((n + L - 1)/2) where L is the filter
///    length. Reconstruction trims back to the recorded sizes exactly.
enum class Boundary { periodic, symmetric };

struct WaveletSpec {
    Family family = Family::haar;
    Boundary boundary = Boundary::periodic;
};

/// Orthonormal analysis filter pair; lowpass sums to sqrt(2).
struct FilterPair {
    std::vector<double> lowpass;
    std::vector<double> highpass;
    int length() const { return static_cast<int>(lowpass.size()); }
};

FilterPair filters_for(Family family);

/// Detail bands of one decomposition level. "horizontal" is lowpass along x
/// and highpass along y (responds to horizontal edges); "vertical" the
/// opposite; "diagonal" highpass along both axes.
struct DetailBands {
    Matrix horizontal;
    Matrix vertical;
    Matrix diagonal;
};

/// Decimated multi-level pyramid. details[0] is the finest level; approx is
/// the coarsest LL band. level_sizes holds the (rows, cols) fed into each
/// level, finest first, so the inverse can trim expansion/padding exactly.
struct SubbandPyramid {
    Matrix approx;
    std::vector<DetailBands> details;
    std::vector<std::pair<int, int>> level_sizes;
    int levels() const { return static_cast<int>(details.size()); }
};

/// Undecimated (stationary) pyramid: every band has the input's size.
struct SwtPyramid {
    Matrix approx;
    std::vector<DetailBands> details;
    int levels() const { return static_cast<int>(details.size()); }
};

/// Separable decimated 2D transform, rows then columns per level, recursing
/// on the LL band. Throws TooManyLevels once a dimension falls below the
/// filter length.
SubbandPyramid dwt2(const Matrix& input, const WaveletSpec& spec, int levels);

/// Exact inverse of dwt2. Throws ShapeMismatch on inconsistent pyramids.
Matrix idwt2(const SubbandPyramid& pyr, const WaveletSpec& spec);

/// A-trous stationary transform with filters upsampled by 2^(l-1) at level l.
/// Requires periodic boundary and dimensions divisible by 2^levels (throws
/// UnsupportedBoundary / BadDimensions otherwise).
SwtPyramid swt2(const Matrix& input, const WaveletSpec& spec, int levels);

/// Inverse of swt2 by averaging the redundant reconstructions.
Matrix iswt2(const SwtPyramid& pyr, const WaveletSpec& spec);

/// sign(v) * max(|v| - t, 0)
double soft_threshold(double v, double t);

/// v if |v| >= t else 0; values exactly at the threshold are kept.
double hard_threshold(double v, double t);

/// Robust noise estimate: median(|finest diagonal band|) / 0.6745.
double estimate_noise_sigma(const SubbandPyramid& pyr);
double estimate_noise_sigma(const SwtPyramid& pyr);

/// VisuShrink threshold sigma * sqrt(2 ln n); n is the pixel count.
double universal_threshold(double sigma, std::size_t n);

enum class ThresholdMode { soft, hard };
enum class ThresholdSelection { universal, fixed };

struct ThresholdRule {
    ThresholdMode mode = ThresholdMode::soft;
    ThresholdSelection selection = ThresholdSelection::universal;
    double fixed_t = 0.0; // used when selection == fixed; must be >= 0
};

enum class Backend { dwt, swt };

struct DenoiseSettings {
    WaveletSpec spec{};
    int levels = 2;
    ThresholdRule rule{};
    Backend backend = Backend::dwt;
};

/// Three-step denoise: decompose, threshold every detail band with one
/// threshold (the approximation band is left untouched), reconstruct, then
/// clamp to [0,1]. With the universal rule the threshold is computed from
/// the MAD sigma of the finest diagonal band and the image pixel count.
Image denoise(const Image& img, const DenoiseSettings& settings);

} // namespace rotodet::wavelet

#endif
