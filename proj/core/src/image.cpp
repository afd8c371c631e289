#include "rotodet/image.hpp"

#include <cmath>
#include <utility>

namespace rotodet {

Image Image::from_pixels(int width, int height, std::vector<double> pixels) {
    if (width < 1 || height < 1)
        throw OutOfBounds("Image: dimensions must be at least 1x1");
    if (pixels.size() != static_cast<std::size_t>(width) * height)
        throw OutOfBounds("Image: pixel count does not match dimensions");
    for (double p : pixels)
        if (!(p >= 0.0 && p <= 1.0))
            throw OutOfBounds("Image: pixel outside [0,1]");
    Image img;
    img.width_ = width;
    img.height_ = height;
    img.pixels_ = std::move(pixels);
    return img;
}

Image crop(const Image& img, int x, int y, int w, int h) {
    if (w < 1 || h < 1 || x < 0 || y < 0 || x + w > img.width() || y + h > img.height())
        throw OutOfBounds("crop: window not inside image");
    Image out(w, h);
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) out.at(i, j) = img.at(x + i, y + j);
    return out;
}

namespace {

// Bilinear sample at continuous index coordinates with clamp-to-edge taps.
double sample_clamped(const Image& img, double ix, double iy) {
    const int w = img.width(), h = img.height();
    int x0 = static_cast<int>(std::floor(ix));
    int y0 = static_cast<int>(std::floor(iy));
    const double fx = ix - x0;
    const double fy = iy - y0;
    const auto cl = [](int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); };
    const int x1 = cl(x0 + 1, w), y1 = cl(y0 + 1, h);
    x0 = cl(x0, w);
    y0 = cl(y0, h);
    const double top = img.at(x0, y0) * (1.0 - fx) + img.at(x1, y0) * fx;
    const double bot = img.at(x0, y1) * (1.0 - fx) + img.at(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

// Bilinear sample where taps outside the image contribute 0.
double sample_zero_padded(const Image& img, double ix, double iy) {
    const int w = img.width(), h = img.height();
    const int x0 = static_cast<int>(std::floor(ix));
    const int y0 = static_cast<int>(std::floor(iy));
    const double fx = ix - x0;
    const double fy = iy - y0;
    const auto tap = [&](int x, int y) -> double {
        if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
        return img.at(x, y);
    };
    const double top = tap(x0, y0) * (1.0 - fx) + tap(x0 + 1, y0) * fx;
    const double bot = tap(x0, y0 + 1) * (1.0 - fx) + tap(x0 + 1, y0 + 1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

} // namespace

Image resize(const Image& img, int w, int h) {
    if (w < 1 || h < 1)
        throw OutOfBounds("resize: target dimensions must be at least 1x1");
    if (w == img.width() && h == img.height()) return img;
    Image out(w, h);
    const double sx = static_cast<double>(img.width()) / w;
    const double sy = static_cast<double>(img.height()) / h;
    for (int oy = 0; oy < h; ++oy) {
        const double iy = (oy + 0.5) * sy - 0.5;
        for (int ox = 0; ox < w; ++ox) {
            const double ix = (ox + 0.5) * sx - 0.5;
            out.at(ox, oy) = sample_clamped(img, ix, iy);
        }
    }
    return out;
}

void sincos_deg(double deg, double& s, double& c) {
    const double r = std::fmod(deg, 360.0);
    if (r == 0.0) {
        s = 0.0; c = 1.0;
    } else if (r == 90.0 || r == -270.0) {
        s = 1.0; c = 0.0;
    } else if (r == 180.0 || r == -180.0) {
        s = 0.0; c = -1.0;
    } else if (r == 270.0 || r == -90.0) {
        s = -1.0; c = 0.0;
    } else {
        const double rad = deg * (3.14159265358979323846264338327950288 / 180.0);
        s = std::sin(rad);
        c = std::cos(rad);
    }
}

Image rotate(const Image& img, double angle_deg) {
    double s, c;
    sincos_deg(angle_deg, s, c);
    const int w = img.width(), h = img.height();
    const double cx = w / 2.0, cy = h / 2.0;
    Image out(w, h);
    for (int oy = 0; oy < h; ++oy) {
        const double py = oy + 0.5 - cy;
        for (int ox = 0; ox < w; ++ox) {
            const double px = ox + 0.5 - cx;
            // inverse of the clockwise map [[c,-s],[s,c]]
            const double sx = c * px + s * py + cx;
            const double sy = -s * px + c * py + cy;
            out.at(ox, oy) = sample_zero_padded(img, sx - 0.5, sy - 0.5);
        }
    }
    return out;
}

std::vector<double> normalize_patch(const Image& patch) {
    const auto px = patch.pixels();
    const std::size_t n = px.size();
    double mean = 0.0;
    for (double v : px) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : px) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    std::vector<double> out(n, 0.0);
    if (sd < 1e-8) return out;
    for (std::size_t i = 0; i < n; ++i) out[i] = (px[i] - mean) / sd;
    return out;
}

} // namespace rotodet
