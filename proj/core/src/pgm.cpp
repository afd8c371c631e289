#include "rotodet/pgm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace rotodet {

namespace {

class Cursor {
public:
    explicit Cursor(std::span<const unsigned char> bytes) : bytes_(bytes) {}

    bool eof() const { return pos_ >= bytes_.size(); }
    unsigned char get() { return bytes_[pos_++]; }
    unsigned char peek() const { return bytes_[pos_]; }

    // Skip whitespace and '#' comments (comment runs to end of line).
    void skip_space_and_comments() {
        while (!eof()) {
            const unsigned char c = peek();
            if (std::isspace(c)) {
                ++pos_;
            } else if (c == '#') {
                while (!eof() && get() != '\n') {}
            } else {
                return;
            }
        }
    }

    // Next unsigned decimal token; throws Truncated if input ends first.
    long next_uint(const char* what) {
        skip_space_and_comments();
        if (eof()) throw Truncated(std::string("pgm: missing ") + what);
        if (!std::isdigit(peek()))
            throw Truncated(std::string("pgm: malformed ") + what);
        long v = 0;
        while (!eof() && std::isdigit(peek())) {
            v = v * 10 + (get() - '0');
            if (v > 1'000'000'000L) throw Truncated(std::string("pgm: absurd ") + what);
        }
        return v;
    }

    std::span<const unsigned char> rest() const { return bytes_.subspan(pos_); }

private:
    std::span<const unsigned char> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

Image load_pgm(std::span<const unsigned char> bytes) {
    if (bytes.size() < 2) throw BadMagic("pgm: file too short for magic");
    const char m0 = static_cast<char>(bytes[0]);
    const char m1 = static_cast<char>(bytes[1]);
    if (m0 != 'P' || (m1 != '2' && m1 != '5'))
        throw BadMagic("pgm: magic is not P2 or P5");
    const bool binary = (m1 == '5');

    Cursor cur(bytes.subspan(2));
    const long w = cur.next_uint("width");
    const long h = cur.next_uint("height");
    const long maxval = cur.next_uint("maxval");
    if (maxval <= 0 || maxval > 65535) throw BadMaxval("pgm: maxval out of range");
    if (w < 1 || h < 1) throw Truncated("pgm: degenerate dimensions");

    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    std::vector<double> pixels(count);
    const double inv = 1.0 / static_cast<double>(maxval);

    if (binary) {
        // exactly one whitespace byte separates maxval from the raster
        if (cur.eof() || !std::isspace(cur.peek()))
            throw Truncated("pgm: missing raster separator");
        cur.get();
        const auto raster = cur.rest();
        const int bytes_per = maxval > 255 ? 2 : 1;
        if (raster.size() < count * bytes_per) throw Truncated("pgm: raster too short");
        for (std::size_t i = 0; i < count; ++i) {
            long v;
            if (bytes_per == 1) {
                v = raster[i];
            } else {
                v = (static_cast<long>(raster[2 * i]) << 8) | raster[2 * i + 1];
            }
            if (v > maxval) v = maxval;
            pixels[i] = static_cast<double>(v) * inv;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            long v = cur.next_uint("pixel");
            if (v > maxval) v = maxval;
            pixels[i] = static_cast<double>(v) * inv;
        }
    }
    return Image::from_pixels(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

std::vector<unsigned char> save_pgm(const Image& img, int maxval) {
    if (maxval < 1 || maxval > 255)
        throw BadMaxval("pgm: save maxval must be in 1..255");
    char header[64];
    const int n = std::snprintf(header, sizeof header, "P5\n%d %d\n%d\n",
                                img.width(), img.height(), maxval);
    std::vector<unsigned char> out(header, header + n);
    out.reserve(out.size() + img.pixels().size());
    for (double p : img.pixels()) {
        long v = std::lround(p * maxval);
        if (v < 0) v = 0;
        if (v > maxval) v = maxval;
        out.push_back(static_cast<unsigned char>(v));
    }
    return out;
}

Image load_pgm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return load_pgm(bytes);
}

void save_pgm_file(const Image& img, const std::filesystem::path& path, int maxval) {
    const auto bytes = save_pgm(img, maxval);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("short write to " + path.string());
}

} // namespace rotodet
