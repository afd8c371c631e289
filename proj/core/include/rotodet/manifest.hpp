#ifndef ROTODET_MANIFEST_HPP
#define ROTODET_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rotodet/eval.hpp"

namespace rotodet::manifest {

struct PatchEntry {
    std::string file; // relative to the manifest directory
    double angle_deg = 0.0;
};

struct SceneEntry {
    std::string file;
    std::vector<eval::GroundTruthBox> boxes;
};

/// Dataset manifest: the JSON document written next to generated PGM files,
/// listing every patch and scene with its ground truth and the seed that
/// produced them.
struct Manifest {
    std::uint64_t seed = 0;
    int window = 15;
    double noise_sigma = 0.0;
    double angle_min = -90.0;
    double angle_max = 90.0;
    std::vector<PatchEntry> patches;
    std::vector<SceneEntry> scenes;
};

std::string to_json(const Manifest& m);

/// Throws IoFailure on malformed documents.
Manifest from_json(std::string_view text);

void save(const Manifest& m, const std::filesystem::path& path);
Manifest load(const std::filesystem::path& path);

} // namespace rotodet::manifest

#endif
