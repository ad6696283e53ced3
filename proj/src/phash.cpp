#include "webharvest/phash.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "webharvest/errors.hpp"

namespace webharvest {

namespace {

constexpr int kResize = 32;
constexpr int kBlock = 8;

// Bilinear resample with pixel-center alignment: output pixel (x, y) samples
// source coordinate ((x + 0.5) * sw / dw - 0.5, ...) clamped to the image.
std::array<double, kResize * kResize> resize_gray(const GrayImage& image) {
    std::array<double, kResize * kResize> out{};
    const int sw = image.width;
    const int sh = image.height;
    for (int y = 0; y < kResize; ++y) {
        double sy = (y + 0.5) * sh / kResize - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(sh - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, sh - 1);
        const double fy = sy - y0;
        for (int x = 0; x < kResize; ++x) {
            double sx = (x + 0.5) * sw / kResize - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(sw - 1));
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, sw - 1);
            const double fx = sx - x0;
            const double top = image.at(x0, y0) * (1.0 - fx) + image.at(x1, y0) * fx;
            const double bottom = image.at(x0, y1) * (1.0 - fx) + image.at(x1, y1) * fx;
            out[static_cast<std::size_t>(y) * kResize + x] = top * (1.0 - fy) + bottom * fy;
        }
    }
    return out;
}

// Orthonormal DCT-II basis, row k: c(k) * cos(pi (2j+1) k / 2N).
const std::array<double, kResize * kResize>& dct_matrix() {
    static const std::array<double, kResize * kResize> m = [] {
        std::array<double, kResize * kResize> t{};
        const double n = kResize;
        for (int k = 0; k < kResize; ++k) {
            const double c = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
            for (int j = 0; j < kResize; ++j) {
                t[static_cast<std::size_t>(k) * kResize + j] =
                    c * std::cos(std::numbers::pi * (2 * j + 1) * k / (2.0 * n));
            }
        }
        return t;
    }();
    return m;
}

} // namespace

std::uint64_t phash(const GrayImage& image) {
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw Error("phash: invalid image");
    }

    const auto img = resize_gray(image);
    const auto& t = dct_matrix();

    // rows = T * img, coeffs = rows * T^t; only the first kBlock rows/cols of
    // the result are needed.
    std::array<double, kBlock * kResize> rows{};
    for (int k = 0; k < kBlock; ++k) {
        for (int j = 0; j < kResize; ++j) {
            double acc = 0.0;
            for (int i = 0; i < kResize; ++i) {
                acc += t[static_cast<std::size_t>(k) * kResize + i] *
                       img[static_cast<std::size_t>(i) * kResize + j];
            }
            rows[static_cast<std::size_t>(k) * kResize + j] = acc;
        }
    }

    std::array<double, kBlock * kBlock> coeffs{};
    for (int k = 0; k < kBlock; ++k) {
        for (int l = 0; l < kBlock; ++l) {
            double acc = 0.0;
            for (int j = 0; j < kResize; ++j) {
                acc += rows[static_cast<std::size_t>(k) * kResize + j] *
                       t[static_cast<std::size_t>(l) * kResize + j];
            }
            coeffs[static_cast<std::size_t>(k) * kBlock + l] = acc;
        }
    }

    std::array<double, kBlock * kBlock> sorted = coeffs;
    std::sort(sorted.begin(), sorted.end());
    const double median = 0.5 * (sorted[kBlock * kBlock / 2 - 1] + sorted[kBlock * kBlock / 2]);

    std::uint64_t hash = 0;
    for (int i = 0; i < kBlock * kBlock; ++i) {
        if (coeffs[static_cast<std::size_t>(i)] > median) hash |= 1ULL << i;
    }
    return hash;
}

std::string phash_to_hex(std::uint64_t hash) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

std::uint64_t phash_from_hex(const std::string& hex) {
    if (hex.size() != 16) throw Error("phash hex must be 16 characters, got '" + hex + "'");
    std::uint64_t value = 0;
    for (char c : hex) {
        value <<= 4;
        if (c >= '0' && c <= '9') value |= static_cast<std::uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') value |= static_cast<std::uint64_t>(c - 'a' + 10);
        else throw Error("invalid phash hex digit in '" + hex + "'");
    }
    return value;
}

} // namespace webharvest
