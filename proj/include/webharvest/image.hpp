#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace webharvest {

// Row-major 8-bit grayscale image.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // width * height

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Row-major interleaved 8-bit RGB image.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // width * height * 3

    const std::uint8_t* px(int x, int y) const {
        return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    std::uint8_t* px(int x, int y) {
        return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
};

// Integer BT.601 luma: (299 r + 587 g + 114 b + 500) / 1000.
GrayImage to_gray(const RgbImage& image);

// Decoding throws Error when the payload is not a decodable image.
RgbImage decode_image(std::span<const std::uint8_t> bytes);
RgbImage load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_jpeg(const RgbImage& image, int quality);
void save_image(const RgbImage& image, const std::filesystem::path& path);

RgbImage resize_image(const RgbImage& image, int width, int height);

// Sniffs the payload container; returns ".jpg", ".png", ... or ".bin".
std::string image_extension(std::span<const std::uint8_t> bytes);

} // namespace webharvest
