#include "webharvest/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "webharvest/errors.hpp"

namespace webharvest {

FeatureVector BuiltinEmbedder::embed(const std::string& image_id, const RgbImage& image) const {
    if (image.width < 1 || image.height < 1) throw Error("embed: empty image");

    std::vector<double> acc(kDim, 0.0);

    // 8x8x8 color histogram over the top 3 bits of each channel.
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const std::uint8_t* p = image.px(x, y);
            const std::size_t bin = (static_cast<std::size_t>(p[0] >> 5) << 6) |
                                    (static_cast<std::size_t>(p[1] >> 5) << 3) |
                                    static_cast<std::size_t>(p[2] >> 5);
            acc[bin] += 1.0;
        }
    }

    // Gradient-orientation histogram: 8 bins over [0, 2pi), magnitude
    // weighted, one histogram per cell of a 4x4 spatial grid. Central
    // differences with clamped borders on the luma plane.
    const GrayImage gray = to_gray(image);
    constexpr std::size_t kColorBins = 8 * 8 * 8;
    for (int y = 0; y < gray.height; ++y) {
        const int ym = std::max(y - 1, 0);
        const int yp = std::min(y + 1, gray.height - 1);
        for (int x = 0; x < gray.width; ++x) {
            const int xm = std::max(x - 1, 0);
            const int xp = std::min(x + 1, gray.width - 1);
            const double dx = static_cast<double>(gray.at(xp, y)) - gray.at(xm, y);
            const double dy = static_cast<double>(gray.at(x, yp)) - gray.at(x, ym);
            const double mag = std::sqrt(dx * dx + dy * dy);
            if (mag == 0.0) continue;
            double theta = std::atan2(dy, dx); // (-pi, pi]
            if (theta < 0.0) theta += 2.0 * std::numbers::pi;
            auto bin = static_cast<std::size_t>(theta / (2.0 * std::numbers::pi) * 8.0);
            if (bin > 7) bin = 7;
            const std::size_t cx = std::min<std::size_t>(3, static_cast<std::size_t>(x) * 4 / gray.width);
            const std::size_t cy = std::min<std::size_t>(3, static_cast<std::size_t>(y) * 4 / gray.height);
            acc[kColorBins + (cy * 4 + cx) * 8 + bin] += mag;
        }
    }

    double norm_sq = 0.0;
    for (double v : acc) norm_sq += v * v;
    const double inv_norm = norm_sq > 0.0 ? 1.0 / std::sqrt(norm_sq) : 0.0;

    FeatureVector out;
    out.image_id = image_id;
    out.values.resize(kDim);
    for (std::size_t i = 0; i < kDim; ++i) {
        out.values[i] = static_cast<float>(acc[i] * inv_norm);
    }
    return out;
}

ImportedFeatures::ImportedFeatures(std::map<std::string, FeatureVector> features)
    : features_(std::move(features)) {
    if (!features_.empty()) dim_ = features_.begin()->second.dim();
    for (const auto& [id, vec] : features_) {
        if (vec.dim() != dim_) {
            throw Error("imported features have inconsistent dims (" + std::to_string(dim_) +
                        " vs " + std::to_string(vec.dim()) + " for " + id + ")");
        }
    }
}

FeatureVector ImportedFeatures::embed(const std::string& image_id, const RgbImage&) const {
    auto it = features_.find(image_id);
    if (it == features_.end()) {
        throw Error("no imported feature vector for image " + image_id);
    }
    return it->second;
}

namespace {

constexpr char kMagic[4] = {'W', 'H', 'F', '1'};

void check_finite(const FeatureVector& vec, const std::string& where) {
    for (float v : vec.values) {
        if (!std::isfinite(v)) {
            throw Error("non-finite feature value in " + where + " (id " + vec.image_id + ")");
        }
    }
}

std::map<std::string, FeatureVector> import_csv(const std::filesystem::path& source,
                                                std::vector<std::string>* warnings) {
    std::ifstream in(source);
    if (!in) throw Error("cannot open feature file " + source.string());
    std::map<std::string, FeatureVector> out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string field;
        if (!std::getline(row, field, ',')) {
            throw Error(source.string() + " row " + std::to_string(line_no) + ": missing id");
        }
        FeatureVector vec;
        vec.image_id = field;
        while (std::getline(row, field, ',')) {
            try {
                vec.values.push_back(std::stof(field));
            } catch (const std::exception&) {
                throw Error(source.string() + " row " + std::to_string(line_no) +
                            ": bad value '" + field + "'");
            }
        }
        check_finite(vec, source.string() + " row " + std::to_string(line_no));
        if (out.empty()) {
            dim = vec.dim();
        } else if (vec.dim() != dim) {
            throw Error(source.string() + " row " + std::to_string(line_no) +
                        ": dim " + std::to_string(vec.dim()) + " != " + std::to_string(dim));
        }
        if (!out.emplace(vec.image_id, std::move(vec)).second) {
            throw Error(source.string() + " row " + std::to_string(line_no) + ": duplicate id");
        }
    }
    if (out.empty() && warnings) warnings->push_back(source.string() + ": no feature rows");
    return out;
}

template <typename T>
T read_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
    return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.put(static_cast<char>((value >> (8 * i)) & 0xff));
    }
}

std::map<std::string, FeatureVector> import_binary(const std::filesystem::path& source,
                                                   std::vector<std::string>* warnings) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw Error("cannot open feature file " + source.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw Error(source.string() + ": not a feature file (bad magic)");
    }
    const auto id_width = read_le<std::uint32_t>(in);
    const auto dim = read_le<std::uint32_t>(in);
    const auto count = read_le<std::uint64_t>(in);
    if (!in) throw Error(source.string() + ": truncated header");

    std::map<std::string, FeatureVector> out;
    std::vector<char> id_buf(id_width);
    for (std::uint64_t row = 0; row < count; ++row) {
        in.read(id_buf.data(), id_width);
        FeatureVector vec;
        vec.image_id.assign(id_buf.data(), strnlen(id_buf.data(), id_width));
        vec.values.resize(dim);
        for (std::uint32_t i = 0; i < dim; ++i) {
            const auto bits = read_le<std::uint32_t>(in);
            float v;
            std::memcpy(&v, &bits, 4);
            vec.values[i] = v;
        }
        if (!in) throw Error(source.string() + " row " + std::to_string(row + 1) + ": truncated");
        check_finite(vec, source.string() + " row " + std::to_string(row + 1));
        if (!out.emplace(vec.image_id, std::move(vec)).second) {
            throw Error(source.string() + " row " + std::to_string(row + 1) + ": duplicate id");
        }
    }
    if (out.empty() && warnings) warnings->push_back(source.string() + ": no feature rows");
    return out;
}

} // namespace

std::map<std::string, FeatureVector> import_features(const std::filesystem::path& source,
                                                     std::vector<std::string>* warnings) {
    if (source.extension() == ".csv") return import_csv(source, warnings);
    return import_binary(source, warnings);
}

void export_features(const std::filesystem::path& destination,
                     const std::vector<FeatureVector>& features) {
    if (destination.extension() == ".csv") {
        std::ofstream out(destination);
        if (!out) throw Error("cannot open " + destination.string() + " for writing");
        for (const auto& vec : features) {
            out << vec.image_id;
            for (float v : vec.values) out << ',' << v;
            out << '\n';
        }
        return;
    }

    std::size_t id_width = 0;
    std::size_t dim = features.empty() ? 0 : features.front().dim();
    for (const auto& vec : features) {
        id_width = std::max(id_width, vec.image_id.size());
        if (vec.dim() != dim) throw Error("export_features: inconsistent dims");
        check_finite(vec, destination.string());
    }

    std::ofstream out(destination, std::ios::binary);
    if (!out) throw Error("cannot open " + destination.string() + " for writing");
    out.write(kMagic, 4);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(id_width));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
    write_le<std::uint64_t>(out, features.size());
    std::string padded;
    for (const auto& vec : features) {
        padded.assign(id_width, '\0');
        padded.replace(0, vec.image_id.size(), vec.image_id);
        out.write(padded.data(), static_cast<std::streamsize>(id_width));
        for (float v : vec.values) {
            std::uint32_t bits;
            std::memcpy(&bits, &v, 4);
            write_le<std::uint32_t>(out, bits);
        }
    }
    if (!out) throw Error("write to " + destination.string() + " failed");
}

} // namespace webharvest
