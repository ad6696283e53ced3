#include "webharvest/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "webharvest/errors.hpp"
#include "webharvest/phash.hpp"
#include "webharvest/rng.hpp"

namespace webharvest {

using nlohmann::json;

std::string to_string(NoiseKind kind) {
    return kind == NoiseKind::internal ? "internal" : "external";
}

NoiseKind noise_kind_from_string(const std::string& text) {
    if (text == "internal") return NoiseKind::internal;
    if (text == "external") return NoiseKind::external;
    throw ConfigError("unknown noise kind '" + text + "'");
}

std::size_t replaced_count(double fraction, std::size_t n) {
    if (fraction < 0.0 || fraction > 1.0) {
        throw PreconditionError("noise fraction must be in [0, 1]");
    }
    double v = fraction * static_cast<double>(n);
    // Snap to the nearest half-integer so decimal fractions hit exact ties
    // (0.05 * 10 is 0.5 mathematically but not in binary).
    const double snapped = std::round(v * 2.0) / 2.0;
    if (std::abs(v - snapped) < 1e-9 * std::max(1.0, std::abs(v))) v = snapped;
    const double floor_v = std::floor(v);
    const double frac = v - floor_v;
    auto result = static_cast<std::size_t>(floor_v);
    if (frac > 0.5) {
        ++result;
    } else if (frac == 0.5) {
        if (result % 2 == 1) ++result; // half to even
    }
    return result;
}

namespace {

struct ClassSlots {
    std::string class_id;
    std::vector<std::size_t> positions; // entry indices of this class, ascending
};

std::map<std::string, std::vector<std::size_t>> positions_by_class(const DatasetManifest& m) {
    std::map<std::string, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        out[m.entries[i].class_id].push_back(i);
    }
    return out;
}

std::map<std::string, std::string> labels_by_class(const DatasetManifest& m) {
    std::map<std::string, std::string> out;
    for (const auto& entry : m.entries) {
        auto [it, inserted] = out.emplace(entry.class_id, entry.label);
        if (!inserted && it->second != entry.label) {
            throw PreconditionError("class " + entry.class_id +
                                    " carries two labels ('" + it->second + "', '" +
                                    entry.label + "')");
        }
    }
    return out;
}

} // namespace

InjectionResult inject_noise(const DatasetManifest& manifest, const NoiseSpec& spec) {
    const auto by_class = positions_by_class(manifest);
    const auto class_labels = labels_by_class(manifest);

    if (spec.kind == NoiseKind::internal && by_class.size() < 2) {
        throw PreconditionError("internal noise needs at least 2 classes");
    }

    std::set<std::string> dataset_labels;
    for (const auto& [cls, label] : class_labels) dataset_labels.insert(label);
    std::set<std::string> dataset_ids;
    for (const auto& entry : manifest.entries) dataset_ids.insert(entry.image_id);

    if (spec.kind == NoiseKind::external) {
        if (!spec.external_pool) {
            throw PreconditionError("external noise requires an external pool");
        }
        for (const auto& entry : spec.external_pool->entries) {
            if (dataset_labels.count(entry.label)) {
                throw PreconditionError("external pool label '" + entry.label +
                                        "' collides with the dataset label set");
            }
            if (dataset_ids.count(entry.image_id)) {
                throw PreconditionError("external pool image " + entry.image_id +
                                        " already present in the dataset");
            }
        }
    }

    // Per-class slot selection on a per-class stream, so adding a class never
    // reshuffles the others.
    std::vector<std::size_t> slots; // entry indices, canonical order
    std::vector<std::string> slot_class;
    for (const auto& [class_id, positions] : by_class) {
        const std::size_t k = replaced_count(spec.fraction, positions.size());
        if (k == 0) continue;
        SplitMix64 rng(stream_seed(spec.seed, class_id));
        auto picks = sample_indices(positions.size(), k, rng);
        std::sort(picks.begin(), picks.end());
        for (std::size_t p : picks) {
            slots.push_back(positions[p]);
            slot_class.push_back(class_id);
        }
    }

    InjectionResult result;
    result.noisy = manifest;
    if (slots.empty()) return result;

    SplitMix64 assign_rng(stream_seed(spec.seed, "noise-assign"));

    if (spec.kind == NoiseKind::internal) {
        // Feasibility: every class must find donors outside itself.
        std::map<std::string, std::size_t> per_class;
        for (const auto& c : slot_class) ++per_class[c];
        for (const auto& [class_id, count] : per_class) {
            if (2 * count > slots.size()) {
                throw PreconditionError("internal noise infeasible: class " + class_id +
                                        " holds more than half of all replaced slots");
            }
        }

        // Donors are exactly the replaced entries; shuffle, then repair any
        // donor landing in its own class by a validity-preserving swap.
        std::vector<std::size_t> donors = slots;
        shuffle(donors, assign_rng);
        auto donor_class = [&](std::size_t i) { return manifest.entries[donors[i]].class_id; };
        for (std::size_t i = 0; i < donors.size(); ++i) {
            if (donor_class(i) != slot_class[i]) continue;
            bool fixed = false;
            for (std::size_t j = 0; j < donors.size() && !fixed; ++j) {
                if (j == i) continue;
                if (donor_class(j) != slot_class[i] && donor_class(i) != slot_class[j]) {
                    std::swap(donors[i], donors[j]);
                    fixed = true;
                }
            }
            if (!fixed) {
                throw PreconditionError("internal noise: no valid donor assignment");
            }
        }

        for (std::size_t i = 0; i < slots.size(); ++i) {
            const ManifestEntry& slot_entry = manifest.entries[slots[i]];
            const ManifestEntry& donor = manifest.entries[donors[i]];
            ManifestEntry substituted = donor;
            substituted.class_id = slot_entry.class_id;
            substituted.label = slot_entry.label;
            result.noisy.entries[slots[i]] = substituted;
            result.log.push_back(Replacement{slot_entry.class_id, slot_entry.image_id,
                                             donor.image_id, donor.label, slot_entry});
        }
    } else {
        const auto& pool = spec.external_pool->entries;
        if (pool.size() < slots.size()) {
            throw PreconditionError("external pool too small: need " +
                                    std::to_string(slots.size()) + " substitutes, have " +
                                    std::to_string(pool.size()));
        }
        auto picks = sample_indices(pool.size(), slots.size(), assign_rng);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const ManifestEntry& slot_entry = manifest.entries[slots[i]];
            const ManifestEntry& donor = pool[picks[i]];
            ManifestEntry substituted = donor;
            substituted.class_id = slot_entry.class_id;
            substituted.label = slot_entry.label;
            result.noisy.entries[slots[i]] = substituted;
            result.log.push_back(Replacement{slot_entry.class_id, slot_entry.image_id,
                                             donor.image_id, donor.label, slot_entry});
        }
    }

    result.noisy.recount();
    return result;
}

DatasetManifest apply_inverse(const DatasetManifest& noisy, const std::vector<Replacement>& log) {
    DatasetManifest restored = noisy;
    // Substitutions preserve entry positions: locate each substitute by
    // (class, image_id) and put the original entry back.
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (std::size_t i = 0; i < restored.entries.size(); ++i) {
        index[{restored.entries[i].class_id, restored.entries[i].image_id}] = i;
    }
    for (const auto& r : log) {
        auto it = index.find({r.class_id, r.substitute_image_id});
        if (it == index.end()) {
            throw Error("apply_inverse: substitute " + r.substitute_image_id +
                        " not found in class " + r.class_id);
        }
        restored.entries[it->second] = r.slot_entry;
    }
    restored.recount();
    return restored;
}

NoiseAuditReport audit_noise(const DatasetManifest& original, const DatasetManifest& noisy,
                             const std::vector<Replacement>& log) {
    NoiseAuditReport report;

    const auto orig_by_class = positions_by_class(original);
    const auto noisy_by_class = positions_by_class(noisy);

    if (orig_by_class.size() != noisy_by_class.size()) {
        throw PreconditionError("audit_noise: manifests disagree on the class set");
    }
    for (const auto& [class_id, positions] : orig_by_class) {
        auto it = noisy_by_class.find(class_id);
        if (it == noisy_by_class.end()) {
            throw PreconditionError("audit_noise: class " + class_id + " missing from noisy set");
        }
        if (it->second.size() != positions.size()) {
            throw PreconditionError("audit_noise: class " + class_id + " changed size");
        }
    }

    std::set<std::string> dataset_labels;
    for (const auto& entry : original.entries) dataset_labels.insert(entry.label);

    // Replaced per class = original ids that no longer appear in that class.
    std::map<std::string, std::size_t> log_counts;
    for (const auto& r : log) ++log_counts[r.class_id];

    std::size_t total_replaced = 0;
    for (const auto& [class_id, positions] : orig_by_class) {
        std::set<std::string> orig_ids;
        for (std::size_t p : positions) orig_ids.insert(original.entries[p].image_id);
        std::set<std::string> noisy_ids;
        for (std::size_t p : noisy_by_class.at(class_id)) {
            noisy_ids.insert(noisy.entries[p].image_id);
        }
        std::size_t replaced = 0;
        for (const auto& id : orig_ids) {
            if (!noisy_ids.count(id)) ++replaced;
        }
        report.replaced_per_class[class_id] = replaced;
        total_replaced += replaced;

        const std::size_t logged = log_counts.count(class_id) ? log_counts.at(class_id) : 0;
        if (logged != replaced) {
            report.problems.push_back("class " + class_id + ": diff shows " +
                                      std::to_string(replaced) + " replacements but log has " +
                                      std::to_string(logged));
        }
    }

    // Kind consistency: internal noise draws every donor from inside the
    // dataset label set, external noise from outside; a log must not mix.
    if (!log.empty()) {
        const bool internal = dataset_labels.count(log.front().substitute_source_label) > 0;
        for (const auto& r : log) {
            const bool donor_internal = dataset_labels.count(r.substitute_source_label) > 0;
            if (donor_internal != internal) {
                report.kind_consistent = false;
                report.problems.push_back(
                    "substitute " + r.substitute_image_id + " (source label '" +
                    r.substitute_source_label + "') breaks the log's " +
                    (internal ? "internal" : "external") + " donor convention");
            }
        }
    }

    // Every logged substitution must be visible in the noisy manifest.
    std::set<std::pair<std::string, std::string>> noisy_pairs;
    for (const auto& entry : noisy.entries) noisy_pairs.insert({entry.class_id, entry.image_id});
    for (const auto& r : log) {
        if (!noisy_pairs.count({r.class_id, r.substitute_image_id})) {
            report.problems.push_back("logged substitute " + r.substitute_image_id +
                                      " absent from class " + r.class_id + " in the noisy set");
        }
        if (noisy_pairs.count({r.class_id, r.slot_image_id})) {
            report.problems.push_back("logged slot " + r.slot_image_id + " still present in class " +
                                      r.class_id);
        }
    }

    report.realized_fraction = original.entries.empty()
                                   ? 0.0
                                   : static_cast<double>(total_replaced) /
                                         static_cast<double>(original.entries.size());
    report.ok = report.problems.empty();
    return report;
}

std::vector<GridCell> noise_grid(const DatasetManifest& manifest,
                                 const std::vector<NoiseKind>& kinds,
                                 const std::vector<double>& fractions, std::uint64_t base_seed,
                                 const DatasetManifest* external_pool) {
    std::vector<GridCell> cells;
    for (NoiseKind kind : kinds) {
        for (double fraction : fractions) {
            GridCell cell;
            cell.kind = kind;
            cell.fraction = fraction;
            const int percent = static_cast<int>(std::lround(fraction * 100.0));
            cell.seed = stream_seed(base_seed, to_string(kind) + "/" + std::to_string(percent));
            NoiseSpec spec{kind, fraction, cell.seed,
                           kind == NoiseKind::external ? external_pool : nullptr};
            try {
                cell.result = inject_noise(manifest, spec);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

namespace {

json entry_to_json_full(const ManifestEntry& entry) {
    return json{{"id", entry.image_id},     {"label", entry.label},
                {"path", entry.local_path}, {"class", entry.class_id},
                {"origin", encode_origin(entry.origin)}, {"engine", entry.engine},
                {"rank", entry.result_rank}, {"url", entry.url},
                {"phash", phash_to_hex(entry.phash)}};
}

ManifestEntry entry_from_json_full(const json& j) {
    ManifestEntry entry;
    entry.image_id = j.at("id").get<std::string>();
    entry.label = j.at("label").get<std::string>();
    entry.local_path = j.at("path").get<std::string>();
    entry.class_id = j.at("class").get<std::string>();
    entry.origin = decode_origin(j.at("origin").get<std::string>());
    entry.engine = j.at("engine").get<std::string>();
    entry.result_rank = j.at("rank").get<int>();
    entry.url = j.at("url").get<std::string>();
    entry.phash = phash_from_hex(j.at("phash").get<std::string>());
    return entry;
}

} // namespace

void write_replacement_log(const std::vector<Replacement>& log,
                           const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary);
    if (!out) throw Error("cannot open " + destination.string() + " for writing");
    for (const auto& r : log) {
        json j{{"class", r.class_id},
               {"slot_image_id", r.slot_image_id},
               {"substitute_image_id", r.substitute_image_id},
               {"substitute_source_label", r.substitute_source_label},
               {"slot_entry", entry_to_json_full(r.slot_entry)}};
        out << j.dump() << '\n';
    }
    if (!out) throw Error("write to " + destination.string() + " failed");
}

std::vector<Replacement> read_replacement_log(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw Error("cannot open replacement log " + source.string());
    std::vector<Replacement> log;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            Replacement r;
            r.class_id = j.at("class").get<std::string>();
            r.slot_image_id = j.at("slot_image_id").get<std::string>();
            r.substitute_image_id = j.at("substitute_image_id").get<std::string>();
            r.substitute_source_label = j.at("substitute_source_label").get<std::string>();
            r.slot_entry = entry_from_json_full(j.at("slot_entry"));
            log.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw Error("replacement log line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return log;
}

} // namespace webharvest
