#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "webharvest/image.hpp"
#include "webharvest/types.hpp"

namespace webharvest {

// Source of feature vectors. `builtin` needs no external model; `imported`
// serves precomputed vectors (e.g. CNN activations) from a feature file.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dim() const = 0;
    virtual FeatureVector embed(const std::string& image_id, const RgbImage& pixels) const = 0;
};

// Deterministic desk-scale embedder: an 8x8x8 RGB color histogram (512 bins)
// concatenated with an 8-bin gradient-orientation histogram per 4x4 spatial
// cell (128 bins), L2-normalized. dim = 640.
class BuiltinEmbedder : public EmbeddingProvider {
public:
    static constexpr std::size_t kDim = 8 * 8 * 8 + 4 * 4 * 8;

    std::size_t dim() const override { return kDim; }
    FeatureVector embed(const std::string& image_id, const RgbImage& pixels) const override;
};

// Serves vectors loaded with import_features; embed() ignores the pixels and
// throws if the id is missing (never a silent zero vector).
class ImportedFeatures : public EmbeddingProvider {
public:
    explicit ImportedFeatures(std::map<std::string, FeatureVector> features);

    std::size_t dim() const override { return dim_; }
    FeatureVector embed(const std::string& image_id, const RgbImage& pixels) const override;
    const std::map<std::string, FeatureVector>& features() const { return features_; }

private:
    std::map<std::string, FeatureVector> features_;
    std::size_t dim_ = 0;
};

// Feature file import. ".csv" rows are `id,v1,...,vD`; anything else is the
// binary layout: magic "WHF1", u32le id_width, u32le dim, u64le count, then
// per row the id zero-padded to id_width bytes followed by dim little-endian
// f32 values. NaN entries and dim mismatches are errors naming the row.
std::map<std::string, FeatureVector> import_features(const std::filesystem::path& source,
                                                     std::vector<std::string>* warnings = nullptr);

void export_features(const std::filesystem::path& destination,
                     const std::vector<FeatureVector>& features);

} // namespace webharvest
