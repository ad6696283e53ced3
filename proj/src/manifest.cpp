#include "webharvest/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "webharvest/errors.hpp"
#include "webharvest/phash.hpp"

namespace webharvest {

using nlohmann::json;

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::crap: return "crap";
        case Strategy::top: return "top";
        case Strategy::random: return "random";
        case Strategy::filtered: return "filtered";
    }
    return "unknown";
}

Strategy strategy_from_string(const std::string& text) {
    if (text == "crap") return Strategy::crap;
    if (text == "top") return Strategy::top;
    if (text == "random") return Strategy::random;
    if (text == "filtered") return Strategy::filtered;
    throw ConfigError("unknown strategy '" + text + "'");
}

ManifestEntry entry_from_record(const ImageRecord& record) {
    ManifestEntry entry;
    entry.image_id = record.image_id;
    entry.label = record.label;
    entry.local_path = record.local_path;
    entry.class_id = record.class_id;
    entry.origin = record.origin;
    entry.engine = record.engine;
    entry.result_rank = record.result_rank;
    entry.url = record.url;
    entry.phash = record.phash;
    return entry;
}

void DatasetManifest::recount() {
    per_class_counts.clear();
    for (const auto& entry : entries) ++per_class_counts[entry.class_id];
}

DatasetManifest make_manifest(Strategy strategy, std::uint64_t seed,
                              std::vector<ManifestEntry> entries) {
    DatasetManifest manifest;
    manifest.strategy = strategy;
    manifest.seed = seed;
    manifest.entries = std::move(entries);
    manifest.recount();
    return manifest;
}

namespace {

json entry_to_json(const ManifestEntry& entry) {
    return json{{"id", entry.image_id},
                {"label", entry.label},
                {"path", entry.local_path},
                {"class", entry.class_id},
                {"origin", encode_origin(entry.origin)},
                {"engine", entry.engine},
                {"rank", entry.result_rank},
                {"url", entry.url},
                {"phash", phash_to_hex(entry.phash)}};
}

const std::set<std::string> kEntryKeys = {"id",     "label", "path", "class", "origin",
                                          "engine", "rank",  "url",  "phash"};
const std::set<std::string> kHeaderKeys = {"schema", "strategy", "seed", "config_hash"};

ManifestEntry entry_from_json(const json& j, std::size_t line_no,
                              std::vector<std::string>* warnings) {
    ManifestEntry entry;
    try {
        entry.image_id = j.at("id").get<std::string>();
        entry.label = j.at("label").get<std::string>();
        entry.local_path = j.at("path").get<std::string>();
        entry.class_id = j.at("class").get<std::string>();
        entry.origin = decode_origin(j.at("origin").get<std::string>());
        entry.engine = j.at("engine").get<std::string>();
        entry.result_rank = j.at("rank").get<int>();
        entry.url = j.at("url").get<std::string>();
        entry.phash = phash_from_hex(j.at("phash").get<std::string>());
    } catch (const json::exception& e) {
        throw Error("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    if (warnings) {
        for (const auto& [key, value] : j.items()) {
            if (!kEntryKeys.count(key)) {
                warnings->push_back("manifest line " + std::to_string(line_no) +
                                    ": ignoring unknown field '" + key + "'");
            }
        }
    }
    return entry;
}

} // namespace

void write_manifest(const DatasetManifest& manifest, std::ostream& out) {
    json header{{"schema", 1}, {"strategy", to_string(manifest.strategy)}, {"seed", manifest.seed}};
    if (!manifest.config_hash.empty()) header["config_hash"] = manifest.config_hash;
    out << header.dump() << '\n';
    for (const auto& entry : manifest.entries) {
        out << entry_to_json(entry).dump() << '\n';
    }
    if (!out) throw Error("manifest write failed");
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary);
    if (!out) throw Error("cannot open " + destination.string() + " for writing");
    write_manifest(manifest, out);
    out.flush();
    if (!out) throw Error("write to " + destination.string() + " failed");
}

DatasetManifest read_manifest(std::istream& in, std::vector<std::string>* warnings) {
    DatasetManifest manifest;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw Error("manifest is empty (missing header line)");
    ++line_no;
    json header;
    try {
        header = json::parse(line);
        const int schema = header.at("schema").get<int>();
        if (schema != 1) throw Error("unsupported manifest schema " + std::to_string(schema));
        manifest.strategy = strategy_from_string(header.at("strategy").get<std::string>());
        manifest.seed = header.at("seed").get<std::uint64_t>();
        if (header.contains("config_hash")) {
            manifest.config_hash = header.at("config_hash").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw Error("manifest line 1 (header): " + std::string(e.what()));
    }
    if (warnings) {
        for (const auto& [key, value] : header.items()) {
            if (!kHeaderKeys.count(key)) {
                warnings->push_back("manifest header: ignoring unknown field '" + key + "'");
            }
        }
    }

    std::set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error("manifest line " + std::to_string(line_no) + ": malformed JSON: " +
                        e.what());
        }
        ManifestEntry entry = entry_from_json(j, line_no, warnings);
        if (!seen_ids.insert(entry.image_id).second) {
            throw Error("manifest line " + std::to_string(line_no) + ": duplicate image_id '" +
                        entry.image_id + "'");
        }
        manifest.entries.push_back(std::move(entry));
    }
    manifest.recount();
    return manifest;
}

DatasetManifest read_manifest(const std::filesystem::path& source,
                              std::vector<std::string>* warnings) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw Error("cannot open manifest " + source.string());
    return read_manifest(in, warnings);
}

} // namespace webharvest
