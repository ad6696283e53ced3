#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "webharvest/types.hpp"

namespace webharvest {

// Partition of one per-query candidate list. Indices refer to the input
// vector; kept and removed are disjoint and cover it.
struct DedupReport {
    std::vector<std::size_t> kept;
    std::vector<std::pair<std::size_t, std::size_t>> removed; // (removed, duplicate_of)
};

// Removes near-duplicates (hamming <= threshold) among records of one
// (class, query). Within a duplicate group the record with the lowest
// (engine tag, rank) order survives; processing is greedy in that order, so
// the result is idempotent. All records must be fetched.
DedupReport dedup_per_query(const std::vector<ImageRecord>& records, int threshold);

// Reference to a record inside a cross-expansion input: keyword empty = base
// pool, index into that pool's record list.
struct PoolRef {
    std::string keyword;
    std::size_t index = 0;

    bool operator==(const PoolRef&) const = default;
    auto operator<=>(const PoolRef&) const = default;
};

struct CrossDedupReport {
    std::vector<PoolRef> kept;
    std::vector<std::pair<PoolRef, PoolRef>> removed; // (removed, canonical copy)
    // keyword -> number of expansion images within threshold of some base
    // image (the diversity signal, independent of removal attribution).
    std::map<std::string, int> dup_counts;
};

// Second-stage dedup: the base pool is canonical and fully kept; expansion
// images within threshold of a base image are removed and counted into
// dup_counts; the surviving global set is pairwise non-duplicate (expansions
// are processed in keyword order, records in input order). Inputs must be
// individually per-query-deduplicated.
CrossDedupReport dedup_cross_expansion(
    const std::vector<ImageRecord>& base,
    const std::map<std::string, std::vector<ImageRecord>>& expansions, int threshold);

} // namespace webharvest
