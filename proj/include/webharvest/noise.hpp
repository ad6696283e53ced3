#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "webharvest/manifest.hpp"

namespace webharvest {

enum class NoiseKind { internal, external };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& text);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::internal;
    double fraction = 0.0; // in [0, 1]
    std::uint64_t seed = 0;
    // Required for external noise: images whose labels are outside the
    // dataset's label set.
    const DatasetManifest* external_pool = nullptr;
};

// One substitution. slot_entry is the replaced original entry, kept so the
// log alone can undo the injection.
struct Replacement {
    std::string class_id;
    std::string slot_image_id;
    std::string substitute_image_id;
    std::string substitute_source_label;
    ManifestEntry slot_entry;

    bool operator==(const Replacement&) const = default;
};

struct InjectionResult {
    DatasetManifest noisy;
    std::vector<Replacement> log;
};

// Replaces exactly round-half-even(fraction * n_c) entries in every class.
// Internal noise exchanges labels among the replaced slots: each slot
// receives an image drawn from a different class's replaced slots, so ids
// stay unique and per-class counts are untouched. External noise draws the
// substitutes from external_pool (without replacement) and labels them with
// the slot's class. Deterministic given (manifest, spec).
InjectionResult inject_noise(const DatasetManifest& manifest, const NoiseSpec& spec);

// Exact inverse of inject_noise: restores every logged slot. Throws if the
// noisy manifest does not contain the logged substitutions.
DatasetManifest apply_inverse(const DatasetManifest& noisy, const std::vector<Replacement>& log);

// Exact count of replaced entries for a class of size n: fraction * n rounded
// half to even (ties resolved on the mathematical value, not the binary
// double).
std::size_t replaced_count(double fraction, std::size_t n);

struct NoiseAuditReport {
    std::map<std::string, std::size_t> replaced_per_class;
    double realized_fraction = 0.0;
    bool kind_consistent = true;
    bool ok = false;
    std::vector<std::string> problems;
};

// Diffs original vs noisy per class, asserts the counts match the log, and
// checks label-set closure (internal substitutes from inside the dataset,
// external ones from outside).
NoiseAuditReport audit_noise(const DatasetManifest& original, const DatasetManifest& noisy,
                             const std::vector<Replacement>& log);

inline const std::vector<double>& default_noise_grid() {
    static const std::vector<double> grid{0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85};
    return grid;
}

struct GridCell {
    NoiseKind kind = NoiseKind::internal;
    double fraction = 0.0;
    std::uint64_t seed = 0;
    std::optional<InjectionResult> result; // empty on per-cell failure
    std::string error;
};

// One injection per (kind, fraction); per-cell seeds derive deterministically
// from base_seed. Cell failures are recorded and do not stop other cells.
std::vector<GridCell> noise_grid(const DatasetManifest& manifest,
                                 const std::vector<NoiseKind>& kinds,
                                 const std::vector<double>& fractions, std::uint64_t base_seed,
                                 const DatasetManifest* external_pool = nullptr);

// Replacement log I/O: JSONL of {class, slot_image_id, substitute_image_id,
// substitute_source_label, slot_entry}.
void write_replacement_log(const std::vector<Replacement>& log,
                           const std::filesystem::path& destination);
std::vector<Replacement> read_replacement_log(const std::filesystem::path& source);

} // namespace webharvest
