#ifndef ROTODET_BUNDLE_HPP
#define ROTODET_BUNDLE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rotodet/grnn.hpp"
#include "rotodet/pca.hpp"
#include "rotodet/wavelet.hpp"

namespace rotodet::bundle {

/// Everything a detector run needs, persisted as one self-describing file:
/// a single-line JSON header (magic, version, window, denoise settings,
/// array shapes, training metadata) followed by the numeric payload as raw
/// little-endian 64-bit floats. Round trips are bit-exact.
struct ModelBundle {
    int version = 1;
    int window = 15;
    wavelet::DenoiseSettings denoise{};
    pca::PcaModel pca;
    grnn::GrnnModel grnn;
    double density_threshold = 0.0;
    struct Meta {
        int sample_count = 0;
        std::uint64_t seed = 0;
    } meta;
};

/// Throws ModelMismatch when the component dimensions disagree
/// (window^2 != pca.dim or pca.rank != grnn.dim()).
void validate(const ModelBundle& b);

std::vector<unsigned char> serialize(const ModelBundle& b);

/// Throws CorruptModel on bad magic, malformed header, truncation or
/// inconsistent dimensions.
ModelBundle deserialize(std::span<const unsigned char> bytes);

void save(const ModelBundle& b, const std::filesystem::path& path);
ModelBundle load(const std::filesystem::path& path);

} // namespace rotodet::bundle

#endif
