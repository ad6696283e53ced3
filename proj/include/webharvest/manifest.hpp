#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "webharvest/types.hpp"

namespace webharvest {

enum class Strategy { crap, top, random, filtered };

std::string to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& text);

// One labeled dataset entry: an image, its (possibly noise-corrupted) label,
// and full provenance.
struct ManifestEntry {
    std::string image_id;
    std::string label;
    std::string local_path;
    std::string class_id;
    Origin origin;
    std::string engine;
    int result_rank = 0;
    std::string url;
    std::uint64_t phash = 0;

    bool operator==(const ManifestEntry&) const = default;
};

ManifestEntry entry_from_record(const ImageRecord& record);

// The assembled labeled dataset. per_class_counts is always the histogram of
// entries' class ids; use make_manifest / recount to keep it consistent.
struct DatasetManifest {
    Strategy strategy = Strategy::random;
    std::uint64_t seed = 0;
    std::string config_hash; // optional provenance marker
    std::vector<ManifestEntry> entries;
    std::map<std::string, std::size_t> per_class_counts;

    void recount();
    bool operator==(const DatasetManifest&) const = default;
};

DatasetManifest make_manifest(Strategy strategy, std::uint64_t seed,
                              std::vector<ManifestEntry> entries);

// JSON Lines, one header line {"schema":1,"strategy":...,"seed":...} then one
// entry object per line. Streamable and diff-friendly at 10^6-record scale.
void write_manifest(const DatasetManifest& manifest, std::ostream& out);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& destination);

// Inverse of write_manifest. Malformed lines and duplicate image ids are
// errors naming the offending line; unknown fields are ignored with a warning
// appended to `warnings` when given.
DatasetManifest read_manifest(std::istream& in, std::vector<std::string>* warnings = nullptr);
DatasetManifest read_manifest(const std::filesystem::path& source,
                              std::vector<std::string>* warnings = nullptr);

} // namespace webharvest
