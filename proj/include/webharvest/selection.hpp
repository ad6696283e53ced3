#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "webharvest/manifest.hpp"
#include "webharvest/stats.hpp"
#include "webharvest/types.hpp"

namespace webharvest {

// Inverted expansion quality score: d * s * exp(dup / dup_max), with the
// exponent defined as 0 when dup_max == 0. Lower score = higher quality.
double expansion_score(double d, double s, int dup, int dup_max);

struct ScoredExpansion {
    ExpansionStats stats;
    int dup_max = 0;
    double score = 0.0;
    bool selected = false;

    bool operator==(const ScoredExpansion&) const = default;
};

// Scores a class's expansions (dup_max = max dup over them) and returns all
// of them ascending by score, with the `keep` best flagged selected. Ties
// break toward lower dup, then keyword order. Fewer than `keep` stats yields
// a warning, mixed classes an error.
std::vector<ScoredExpansion> rank_expansions(const std::vector<ExpansionStats>& stats,
                                             int keep = 5,
                                             std::vector<std::string>* warnings = nullptr);

// Per-class input to dataset assembly. `expansions` must be in keyword rank
// order; `selected_keywords` names the expansions a filtered assembly may
// draw from.
struct ClassPool {
    ConceptClass cls;
    std::vector<ImageRecord> base;
    std::vector<std::pair<Expansion, std::vector<ImageRecord>>> expansions;
    std::vector<std::string> selected_keywords;
};

// Assembles a dataset with exactly target_count images per class:
//   crap     first target_count base records by rank (single engine pool);
//   top      base first, then expansions in keyword rank order, each in
//            result-rank order, truncated at target_count;
//   random   seeded uniform sample without replacement from the whole pool;
//   filtered seeded uniform sample from base + the selected expansions only.
// Sampling uses SplitMix64 with a per-class stream (seed XOR
// fnv1a64(class_id)). A class pool smaller than target_count is an error
// listing the shortfall classes.
DatasetManifest assemble(Strategy strategy, const std::vector<ClassPool>& pools,
                         int target_count, std::uint64_t seed);

} // namespace webharvest
