#ifndef ROTODET_IMAGE_HPP
#define ROTODET_IMAGE_HPP

#include <span>
#include <vector>

#include "rotodet/errors.hpp"

namespace rotodet {

/// Grayscale image with real-valued pixels in [0,1], stored row-major.
/// Images are immutable values in practice: every operation below returns a
/// new image, so they are safe to share across threads.
class Image {
public:
    Image() = default;

    Image(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          pixels_(static_cast<std::size_t>(width) * height, fill) {
        if (width < 1 || height < 1)
            throw OutOfBounds("Image: dimensions must be at least 1x1");
        if (fill < 0.0 || fill > 1.0)
            throw OutOfBounds("Image: fill value outside [0,1]");
    }

    static Image from_pixels(int width, int height, std::vector<double> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }

    double at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
    double& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<const double> pixels() const { return pixels_; }
    std::span<double> pixels() { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> pixels_;
};

/// Axis-aligned sub-image: output (i,j) = input (x+i, y+j).
/// Throws OutOfBounds unless 0 <= x, x+w <= width, 0 <= y, y+h <= height.
Image crop(const Image& img, int x, int y, int w, int h);

/// Bilinear resize with pixel centers at (i+0.5)/n. Resizing to the source
/// size reproduces the input exactly; constants stay constant.
Image resize(const Image& img, int w, int h);

/// Rotate about the image center by inverse mapping with bilinear sampling.
/// Positive angles turn the content clockwise (y grows downward); samples
/// falling outside the source take value 0. Output size equals input size.
/// Multiples of 90 degrees on square images reduce to exact index
/// permutations.
Image rotate(const Image& img, double angle_deg);

/// Flatten row-major, subtract the mean, divide by the population standard
/// deviation. A near-constant patch (std < 1e-8) maps to the all-zero vector
/// so blank windows flow through the pipeline without faults.
std::vector<double> normalize_patch(const Image& patch);

/// sin/cos of an angle in degrees, exact at multiples of 90.
void sincos_deg(double deg, double& s, double& c);

} // namespace rotodet

#endif
