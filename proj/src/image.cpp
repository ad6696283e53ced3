#include "webharvest/image.hpp"

#include <fstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "webharvest/errors.hpp"

namespace webharvest {

namespace {

RgbImage from_mat(const cv::Mat& bgr) {
    RgbImage out;
    out.width = bgr.cols;
    out.height = bgr.rows;
    out.pixels.resize(static_cast<std::size_t>(bgr.cols) * bgr.rows * 3);
    for (int y = 0; y < bgr.rows; ++y) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            std::uint8_t* p = out.px(x, y);
            p[0] = row[x][2];
            p[1] = row[x][1];
            p[2] = row[x][0];
        }
    }
    return out;
}

cv::Mat to_mat(const RgbImage& image) {
    cv::Mat bgr(image.height, image.width, CV_8UC3);
    for (int y = 0; y < image.height; ++y) {
        cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < image.width; ++x) {
            const std::uint8_t* p = image.px(x, y);
            row[x] = cv::Vec3b(p[2], p[1], p[0]);
        }
    }
    return bgr;
}

} // namespace

GrayImage to_gray(const RgbImage& image) {
    GrayImage out;
    out.width = image.width;
    out.height = image.height;
    out.pixels.resize(static_cast<std::size_t>(image.width) * image.height);
    for (std::size_t i = 0, n = out.pixels.size(); i < n; ++i) {
        const std::uint8_t* p = image.pixels.data() + i * 3;
        out.pixels[i] = static_cast<std::uint8_t>(
            (299u * p[0] + 587u * p[1] + 114u * p[2] + 500u) / 1000u);
    }
    return out;
}

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw Error("empty image payload");
    cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8U,
                const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat decoded = cv::imdecode(buf, cv::IMREAD_COLOR);
    if (decoded.empty()) throw Error("payload is not a decodable image");
    return from_mat(decoded);
}

RgbImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open image file " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_image(bytes);
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
    std::vector<std::uint8_t> out;
    if (!cv::imencode(".png", to_mat(image), out)) throw Error("png encode failed");
    return out;
}

std::vector<std::uint8_t> encode_jpeg(const RgbImage& image, int quality) {
    std::vector<std::uint8_t> out;
    std::vector<int> params{cv::IMWRITE_JPEG_QUALITY, quality};
    if (!cv::imencode(".jpg", to_mat(image), out, params)) throw Error("jpeg encode failed");
    return out;
}

void save_image(const RgbImage& image, const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes;
    const std::string ext = path.extension().string();
    if (ext == ".jpg" || ext == ".jpeg") {
        bytes = encode_jpeg(image, 95);
    } else {
        bytes = encode_png(image);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write image file " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

RgbImage resize_image(const RgbImage& image, int width, int height) {
    cv::Mat resized;
    cv::resize(to_mat(image), resized, cv::Size(width, height), 0, 0, cv::INTER_AREA);
    return from_mat(resized);
}

std::string image_extension(std::span<const std::uint8_t> bytes) {
    static constexpr std::uint8_t png_magic[] = {0x89, 'P', 'N', 'G'};
    if (bytes.size() >= 4 && std::equal(png_magic, png_magic + 4, bytes.begin())) return ".png";
    if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) return ".jpg";
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return ".bmp";
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '6') return ".ppm";
    if (bytes.size() >= 4 && bytes[0] == 'R' && bytes[1] == 'I' && bytes[2] == 'F' && bytes[3] == 'F')
        return ".webp";
    if (bytes.size() >= 3 && bytes[0] == 'G' && bytes[1] == 'I' && bytes[2] == 'F') return ".gif";
    return ".bin";
}

} // namespace webharvest
