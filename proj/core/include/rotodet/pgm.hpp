#ifndef ROTODET_PGM_HPP
#define ROTODET_PGM_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rotodet/image.hpp"

namespace rotodet {

/// Parse a PGM file (ASCII "P2" or binary "P5", per the Netpbm spec).
/// Header comments starting with '#' are allowed; maxval up to 65535 (two
/// bytes per sample, big-endian, for maxval > 255). Pixels map to p/maxval.
///
/// Throws BadMagic, BadMaxval or Truncated.
Image load_pgm(std::span<const unsigned char> bytes);

/// Encode as binary P5 with the given maxval (1..255); each pixel is written
/// as round(p * maxval). The header ends with a single whitespace byte after
/// maxval. Reparsing recovers every pixel within 1/(2*maxval).
std::vector<unsigned char> save_pgm(const Image& img, int maxval = 255);

Image load_pgm_file(const std::filesystem::path& path);
void save_pgm_file(const Image& img, const std::filesystem::path& path, int maxval = 255);

} // namespace rotodet

#endif
