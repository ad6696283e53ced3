#include "webharvest/dedup.hpp"

#include <algorithm>
#include <tuple>

#include "webharvest/bktree.hpp"
#include "webharvest/errors.hpp"
#include "webharvest/phash.hpp"

namespace webharvest {

namespace {

void require_fetched(const std::vector<ImageRecord>& records) {
    for (const auto& record : records) {
        if (record.fetch_status != FetchStatus::fetched) {
            throw PreconditionError("dedup input contains unfetched record for url " + record.url);
        }
    }
}

void require_threshold(int threshold) {
    if (threshold < 0 || threshold > 64) {
        throw PreconditionError("dedup threshold must be in 0..64");
    }
}

} // namespace

DedupReport dedup_per_query(const std::vector<ImageRecord>& records, int threshold) {
    require_threshold(threshold);
    require_fetched(records);

    // Greedy pass in (engine, rank, url) order; the first record of each
    // duplicate group is the survivor.
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(records[a].engine, records[a].result_rank, records[a].url) <
               std::tie(records[b].engine, records[b].result_rank, records[b].url);
    });

    DedupReport report;
    BkTree index;
    std::vector<std::size_t> kept_order; // positions in `order` of kept records
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t i = order[pos];
        auto matches = index.within(records[i].phash, threshold);
        if (matches.empty()) {
            index.insert(records[i].phash, static_cast<std::uint32_t>(kept_order.size()));
            kept_order.push_back(pos);
            report.kept.push_back(i);
        } else {
            // duplicate_of = the earliest kept record within the threshold
            const std::uint32_t first =
                *std::min_element(matches.begin(), matches.end(), [&](auto a, auto b) {
                    return kept_order[a] < kept_order[b];
                });
            report.removed.emplace_back(i, order[kept_order[first]]);
        }
    }
    std::sort(report.kept.begin(), report.kept.end());
    std::sort(report.removed.begin(), report.removed.end());
    return report;
}

CrossDedupReport dedup_cross_expansion(
    const std::vector<ImageRecord>& base,
    const std::map<std::string, std::vector<ImageRecord>>& expansions, int threshold) {
    require_threshold(threshold);
    require_fetched(base);
    for (const auto& [keyword, records] : expansions) require_fetched(records);

    CrossDedupReport report;

    BkTree base_index;
    for (std::size_t i = 0; i < base.size(); ++i) {
        base_index.insert(base[i].phash, static_cast<std::uint32_t>(i));
        report.kept.push_back(PoolRef{"", i});
    }

    // Kept expansion records, for expansion-vs-expansion duplicates.
    BkTree kept_index;
    std::vector<PoolRef> kept_refs;

    for (const auto& [keyword, records] : expansions) {
        int dup = 0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const std::uint64_t h = records[i].phash;
            auto base_matches = base_index.within(h, threshold);
            if (!base_matches.empty()) {
                ++dup;
                const auto canonical = *std::min_element(base_matches.begin(), base_matches.end());
                report.removed.emplace_back(PoolRef{keyword, i}, PoolRef{"", canonical});
                continue;
            }
            auto prior = kept_index.within(h, threshold);
            if (!prior.empty()) {
                const auto first = *std::min_element(prior.begin(), prior.end());
                report.removed.emplace_back(PoolRef{keyword, i}, kept_refs[first]);
                continue;
            }
            kept_index.insert(h, static_cast<std::uint32_t>(kept_refs.size()));
            kept_refs.push_back(PoolRef{keyword, i});
            report.kept.push_back(PoolRef{keyword, i});
        }
        report.dup_counts[keyword] = dup;
    }
    return report;
}

} // namespace webharvest
