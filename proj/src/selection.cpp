#include "webharvest/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "webharvest/errors.hpp"
#include "webharvest/rng.hpp"

namespace webharvest {

double expansion_score(double d, double s, int dup, int dup_max) {
    if (d < 0.0 || s < 0.0) throw PreconditionError("expansion_score: d and s must be >= 0");
    if (dup < 0 || dup_max < 0) throw PreconditionError("expansion_score: dup counts must be >= 0");
    if (dup_max > 0 && dup > dup_max) {
        throw PreconditionError("expansion_score: dup exceeds dup_max");
    }
    const double exponent =
        dup_max == 0 ? 0.0 : static_cast<double>(dup) / static_cast<double>(dup_max);
    return d * s * std::exp(exponent);
}

std::vector<ScoredExpansion> rank_expansions(const std::vector<ExpansionStats>& stats, int keep,
                                             std::vector<std::string>* warnings) {
    if (stats.empty()) throw PreconditionError("rank_expansions: no expansion stats");
    if (keep < 1) throw PreconditionError("rank_expansions: keep must be >= 1");
    const std::string& class_id = stats.front().class_id;
    int dup_max = 0;
    for (const auto& st : stats) {
        if (st.class_id != class_id) {
            throw PreconditionError("rank_expansions: mixed classes (" + class_id + " vs " +
                                    st.class_id + ")");
        }
        dup_max = std::max(dup_max, st.dup);
    }

    std::vector<ScoredExpansion> scored;
    scored.reserve(stats.size());
    for (const auto& st : stats) {
        ScoredExpansion se;
        se.stats = st;
        se.dup_max = dup_max;
        se.score = expansion_score(st.d, st.s, st.dup, dup_max);
        scored.push_back(std::move(se));
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredExpansion& a, const ScoredExpansion& b) {
        return std::tie(a.score, a.stats.dup, a.stats.keyword) <
               std::tie(b.score, b.stats.dup, b.stats.keyword);
    });

    if (static_cast<int>(scored.size()) < keep && warnings) {
        warnings->push_back("class " + class_id + ": only " + std::to_string(scored.size()) +
                            " expansions available, keeping all (asked for " +
                            std::to_string(keep) + ")");
    }
    for (std::size_t i = 0; i < scored.size(); ++i) {
        scored[i].selected = static_cast<int>(i) < keep;
    }
    return scored;
}

namespace {

// Stable pool order for sampling and truncation: result rank, then engine
// tag, then url, then origin keyword.
void sort_pool(std::vector<const ImageRecord*>& records) {
    std::sort(records.begin(), records.end(), [](const ImageRecord* a, const ImageRecord* b) {
        return std::tie(a->result_rank, a->engine, a->url, a->origin.keyword) <
               std::tie(b->result_rank, b->engine, b->url, b->origin.keyword);
    });
}

std::vector<const ImageRecord*> sorted_ptrs(const std::vector<ImageRecord>& records) {
    std::vector<const ImageRecord*> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(&r);
    sort_pool(out);
    return out;
}

std::vector<ManifestEntry> pick_seeded(const std::vector<const ImageRecord*>& pool,
                                       std::size_t target, std::uint64_t class_seed) {
    SplitMix64 rng(class_seed);
    const auto picks = sample_indices(pool.size(), target, rng);
    std::vector<ManifestEntry> entries;
    entries.reserve(target);
    for (std::size_t idx : picks) entries.push_back(entry_from_record(*pool[idx]));
    return entries;
}

} // namespace

DatasetManifest assemble(Strategy strategy, const std::vector<ClassPool>& pools, int target_count,
                         std::uint64_t seed) {
    if (target_count < 1) throw PreconditionError("assemble: target_count must be >= 1");

    // Classes in class_id order so concatenation is deterministic.
    std::vector<const ClassPool*> ordered;
    ordered.reserve(pools.size());
    for (const auto& pool : pools) ordered.push_back(&pool);
    std::sort(ordered.begin(), ordered.end(),
              [](const ClassPool* a, const ClassPool* b) { return a->cls.class_id < b->cls.class_id; });

    const auto target = static_cast<std::size_t>(target_count);
    std::vector<std::string> shortfalls;
    std::vector<ManifestEntry> entries;

    for (const ClassPool* pool : ordered) {
        const std::string& class_id = pool->cls.class_id;
        std::vector<ManifestEntry> class_entries;

        switch (strategy) {
            case Strategy::crap: {
                auto base = sorted_ptrs(pool->base);
                if (base.size() < target) {
                    shortfalls.push_back(class_id);
                    continue;
                }
                for (std::size_t i = 0; i < target; ++i) {
                    class_entries.push_back(entry_from_record(*base[i]));
                }
                break;
            }
            case Strategy::top: {
                auto base = sorted_ptrs(pool->base);
                std::vector<const ImageRecord*> sequence = std::move(base);
                for (const auto& [expansion, records] : pool->expansions) {
                    auto sorted = sorted_ptrs(records);
                    sequence.insert(sequence.end(), sorted.begin(), sorted.end());
                }
                if (sequence.size() < target) {
                    shortfalls.push_back(class_id);
                    continue;
                }
                for (std::size_t i = 0; i < target; ++i) {
                    class_entries.push_back(entry_from_record(*sequence[i]));
                }
                break;
            }
            case Strategy::random: {
                auto all = sorted_ptrs(pool->base);
                for (const auto& [expansion, records] : pool->expansions) {
                    auto sorted = sorted_ptrs(records);
                    all.insert(all.end(), sorted.begin(), sorted.end());
                }
                sort_pool(all);
                if (all.size() < target) {
                    shortfalls.push_back(class_id);
                    continue;
                }
                class_entries = pick_seeded(all, target, stream_seed(seed, class_id));
                break;
            }
            case Strategy::filtered: {
                if (pool->selected_keywords.empty()) {
                    throw PreconditionError("assemble: filtered strategy requires scored "
                                            "expansions for class " + class_id);
                }
                const std::set<std::string> selected(pool->selected_keywords.begin(),
                                                     pool->selected_keywords.end());
                auto eligible = sorted_ptrs(pool->base);
                for (const auto& [expansion, records] : pool->expansions) {
                    if (!selected.count(expansion.keyword)) continue;
                    auto sorted = sorted_ptrs(records);
                    eligible.insert(eligible.end(), sorted.begin(), sorted.end());
                }
                sort_pool(eligible);
                if (eligible.size() < target) {
                    shortfalls.push_back(class_id);
                    continue;
                }
                class_entries = pick_seeded(eligible, target, stream_seed(seed, class_id));
                break;
            }
        }
        entries.insert(entries.end(), class_entries.begin(), class_entries.end());
    }

    if (!shortfalls.empty()) {
        std::string msg = "assemble: pool smaller than target_count for classes:";
        for (const auto& c : shortfalls) msg += " " + c;
        throw PreconditionError(msg);
    }

    std::set<std::string> ids;
    for (const auto& entry : entries) {
        if (!ids.insert(entry.image_id).second) {
            throw Error("assemble: image " + entry.image_id +
                        " appears in more than one class pool");
        }
    }

    return make_manifest(strategy, seed, std::move(entries));
}

} // namespace webharvest
