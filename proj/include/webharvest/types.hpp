#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace webharvest {

// A target category. `name` is the query phrase (lowercase); `target_count`
// is how many images the assembled dataset must hold for this class.
struct ConceptClass {
    std::string class_id;
    std::string name;
    std::string synset_id; // empty if unknown
    int target_count = 1;

    bool operator==(const ConceptClass&) const = default;
};

// Throws ConfigError if the class violates its invariants (empty/uppercase
// name, target_count < 1).
void validate(const ConceptClass& cls);

// One keyword expanding a class. `rank` is the keyword-service relevance
// order (1-based, unique within a class); `dup_count` is the number of images
// the expansion shares with the base class, filled in by cross-expansion
// dedup.
struct Expansion {
    std::string class_id;
    std::string keyword;
    int rank = 0;
    int dup_count = 0;
    double score = -1.0; // negative = not yet scored

    bool operator==(const Expansion&) const = default;
};

// Provenance origin of a harvested image: the base query (class name alone)
// or one keyword expansion.
struct Origin {
    std::string keyword; // empty means base query

    bool is_base() const { return keyword.empty(); }
    bool operator==(const Origin&) const = default;
};

// Wire encoding used in manifests: "base" or "expansion:<keyword>".
std::string encode_origin(const Origin& origin);
Origin decode_origin(const std::string& text);

enum class FetchStatus { pending, fetched, failed };

std::string to_string(FetchStatus status);

// One harvested image and its full provenance. `image_id` is the lowercase
// hex of the SHA-256 content digest truncated to 128 bits, so identical bytes
// map to identical ids across runs.
struct ImageRecord {
    std::string image_id;
    std::string class_id;
    Origin origin;
    std::string engine;
    int result_rank = 0;
    std::string url;
    FetchStatus fetch_status = FetchStatus::pending;
    std::string failure_reason; // set iff fetch_status == failed
    std::string content_digest; // 64 hex chars once fetched
    std::uint64_t phash = 0;
    std::string local_path; // set once fetched
    std::string label; // class name; rewritten only by noise injection

    bool operator==(const ImageRecord&) const = default;
};

// D-dimensional embedding of one image. dim == values.size(); all entries
// must be finite.
struct FeatureVector {
    std::string image_id;
    std::vector<float> values;

    std::size_t dim() const { return values.size(); }
    bool operator==(const FeatureVector&) const = default;
};

} // namespace webharvest
