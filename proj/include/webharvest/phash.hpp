#pragma once

#include <cstdint>
#include <string>

#include "webharvest/image.hpp"

namespace webharvest {

// 64-bit DCT perceptual hash. The procedure is fixed so hashes are bit-exact
// across platforms:
//   1. bilinear-resize the grayscale image to 32x32 (double precision,
//      pixel-center sampling, edge clamp);
//   2. orthonormal 2-D DCT-II;
//   3. take the top-left 8x8 coefficient block, DC included;
//   4. threshold each of the 64 coefficients against their median (mean of
//      the two middle order statistics);
//   5. bit (row*8 + col) of the result is set iff coefficient > median.
std::uint64_t phash(const GrayImage& image);

inline std::uint64_t phash(const RgbImage& image) { return phash(to_gray(image)); }

// Hamming distance between two hashes: popcount of XOR.
inline int hamming(std::uint64_t a, std::uint64_t b) {
    return __builtin_popcountll(a ^ b);
}

// 16-char lowercase hex, as stored in manifests.
std::string phash_to_hex(std::uint64_t hash);
std::uint64_t phash_from_hex(const std::string& hex);

// Pair-wise distance threshold below or at which two images count as
// duplicates. Calibrated on the re-encode/downscale fixture corpus.
inline constexpr int kDefaultDupThreshold = 8;

} // namespace webharvest
