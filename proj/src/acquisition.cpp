#include "webharvest/acquisition.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "http_support.hpp"
#include "webharvest/digest.hpp"
#include "webharvest/image.hpp"
#include "webharvest/parallel.hpp"
#include "webharvest/phash.hpp"

namespace webharvest {

using nlohmann::json;

std::string urlencode(const std::string& text) {
    static constexpr char digits[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(digits[c >> 4]);
            out.push_back(digits[c & 0xf]);
        }
    }
    return out;
}

namespace {

std::string urldecode(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size()) {
            const auto hex = text.substr(i + 1, 2);
            out.push_back(static_cast<char>(std::stoi(hex, nullptr, 16)));
            i += 2;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool valid_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos || scheme_end == 0) return false;
    for (std::size_t i = 0; i < scheme_end; ++i) {
        if (!std::isalpha(static_cast<unsigned char>(url[i]))) return false;
    }
    if (scheme_end + 3 >= url.size()) return false;
    return url.find_first_of(" \t\r\n") == std::string::npos;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("fixture file missing: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> parse_string_list(const std::string& body,
                                           const std::string& content_type) {
    std::vector<std::string> out;
    if (content_type.find("json") != std::string::npos) {
        const json j = json::parse(body);
        for (const auto& item : j) {
            if (item.is_string()) {
                out.push_back(item.get<std::string>());
            } else if (item.is_object() && item.contains("keyword")) {
                out.push_back(item.at("keyword").get<std::string>());
            } else if (item.is_object() && item.contains("url")) {
                out.push_back(item.at("url").get<std::string>());
            }
        }
        return out;
    }
    std::stringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

} // namespace

HttpKeywordClient::HttpKeywordClient(std::string endpoint) : endpoint_(std::move(endpoint)) {}

std::vector<std::string> HttpKeywordClient::keywords(const std::string& class_name) const {
    const auto [body, content_type] = detail::http_get_text(
        endpoint_ + "?q=" + urlencode(class_name), std::chrono::milliseconds(10000));
    return parse_string_list(body, content_type);
}

HttpSearchClient::HttpSearchClient(std::string endpoint) : endpoint_(std::move(endpoint)) {}

std::vector<std::string> HttpSearchClient::urls(const std::string& query) const {
    const auto [body, content_type] = detail::http_get_text(
        endpoint_ + "?q=" + urlencode(query), std::chrono::milliseconds(10000));
    return parse_string_list(body, content_type);
}

FixtureKeywordClient::FixtureKeywordClient(std::filesystem::path fixture_dir)
    : fixture_dir_(std::move(fixture_dir)) {}

std::vector<std::string> FixtureKeywordClient::keywords(const std::string& class_name) const {
    auto lines = read_lines(fixture_dir_ / (urlencode(class_name) + ".txt"));
    std::erase_if(lines, [](const std::string& l) { return l.empty(); });
    return lines;
}

std::vector<Expansion> expand_concept(const ConceptClass& cls, const KeywordClient& client,
                                      int k) {
    if (k < 0) throw PreconditionError("expand_concept: k must be >= 0");
    const auto raw = client.keywords(cls.name);
    if (raw.empty()) {
        throw EmptyExpansionError("keyword service returned no keywords for class '" + cls.name +
                                  "'; proceed with the base query only");
    }
    std::vector<Expansion> expansions;
    std::set<std::string> seen{lowercase(cls.name)};
    for (const auto& keyword : raw) {
        if (static_cast<int>(expansions.size()) >= k) break;
        const std::string folded = lowercase(keyword);
        if (folded.empty() || !seen.insert(folded).second) continue;
        Expansion expansion;
        expansion.class_id = cls.class_id;
        expansion.keyword = keyword;
        expansion.rank = static_cast<int>(expansions.size()) + 1;
        expansions.push_back(std::move(expansion));
    }
    return expansions;
}

FixtureSearchClient::FixtureSearchClient(std::filesystem::path fixture_dir)
    : fixture_dir_(std::move(fixture_dir)) {}

std::vector<std::string> FixtureSearchClient::urls(const std::string& query) const {
    return read_lines(fixture_dir_ / (urlencode(query) + ".txt"));
}

std::vector<SearchResult> search_images(const std::string& query, const SearchClient& client,
                                        const EngineConfig& engine) {
    if (engine.top_k < 1) throw ConfigError("engine " + engine.engine + ": top_k must be >= 1");
    const auto urls = client.urls(query);
    std::vector<SearchResult> results;
    results.reserve(std::min<std::size_t>(urls.size(), static_cast<std::size_t>(engine.top_k)));
    for (std::size_t i = 0; i < urls.size(); ++i) {
        if (static_cast<int>(results.size()) >= engine.top_k) break;
        const std::string& url = urls[i];
        if (url.empty()) continue; // tolerate blank lines
        if (!valid_url(url)) {
            throw ConfigError("engine " + engine.engine + ", query '" + query + "': line " +
                              std::to_string(i + 1) + " is not a valid URL: '" + url + "'");
        }
        SearchResult result;
        result.url = url;
        result.result_rank = static_cast<int>(i) + 1; // rank = line number
        result.engine = engine.engine;
        result.query = query;
        results.push_back(std::move(result));
    }
    return results;
}

namespace {

struct Payload {
    std::vector<std::uint8_t> bytes;
};

Payload fetch_file_url(const std::string& url) {
    // file://<path>, percent-decoded
    std::string path = url.substr(std::string("file://").size());
    path = urldecode(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io_error");
    Payload payload;
    payload.bytes.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return payload;
}

Payload fetch_url(const std::string& url, const FetchOptions& options) {
    if (url.rfind("file://", 0) == 0) return fetch_file_url(url);
    if (url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0) {
        return Payload{detail::http_get_bytes(url, options.timeout)};
    }
    throw Error("unsupported_scheme");
}

void atomic_write(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    const auto tmp = path.string() + ".tmp" + std::to_string(
        std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("io_error");
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("io_error");
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

ImageRecord fetch_image(const SearchResult& result, const Provenance& provenance,
                        const FetchOptions& options) {
    ImageRecord record;
    record.class_id = provenance.class_id;
    record.label = provenance.label;
    record.origin = provenance.origin;
    record.engine = result.engine;
    record.result_rank = result.result_rank;
    record.url = result.url;

    auto fail = [&record](const std::string& reason) -> ImageRecord {
        record.fetch_status = FetchStatus::failed;
        record.failure_reason = reason;
        return record;
    };

    Payload payload;
    int attempt = 0;
    auto backoff = options.backoff;
    for (;;) {
        ++attempt;
        try {
            payload = fetch_url(result.url, options);
            break;
        } catch (const RetriableError& e) {
            if (attempt >= options.attempts) return fail(e.what());
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        } catch (const std::exception& e) {
            return fail(e.what());
        }
    }
    if (payload.bytes.empty()) return fail("empty_payload");

    RgbImage decoded;
    try {
        decoded = decode_image(payload.bytes);
    } catch (const std::exception&) {
        return fail("non_image");
    }

    record.content_digest = sha256_hex(payload.bytes);
    record.image_id = image_id_from_digest(record.content_digest);
    record.phash = phash(decoded);

    const auto store_path =
        options.store / (record.image_id + image_extension(payload.bytes));
    try {
        std::filesystem::create_directories(options.store);
        if (!std::filesystem::exists(store_path)) {
            atomic_write(store_path, payload.bytes);
        }
    } catch (const std::exception&) {
        return fail("io_error");
    }
    record.local_path = store_path.string();
    record.fetch_status = FetchStatus::fetched;
    return record;
}

EngineHandle::EngineHandle(EngineConfig config, std::unique_ptr<SearchClient> client)
    : config_(std::move(config)), client_(std::move(client)) {
    if (config_.max_concurrent_requests < 1) {
        throw ConfigError("engine " + config_.engine + ": max_concurrent_requests must be >= 1");
    }
}

void EngineHandle::acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [&] { return in_flight_ < config_.max_concurrent_requests; });
    ++in_flight_;
    if (config_.min_request_interval.count() > 0) {
        const auto now = std::chrono::steady_clock::now();
        if (next_allowed_ > now) {
            const auto wait_until = next_allowed_;
            next_allowed_ += config_.min_request_interval;
            lock.unlock();
            std::this_thread::sleep_until(wait_until);
            return;
        }
        next_allowed_ = now + config_.min_request_interval;
    }
}

void EngineHandle::release() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        --in_flight_;
    }
    cv_.notify_one();
}

std::unique_ptr<SearchClient> make_search_client(const EngineConfig& config) {
    if (!config.fixture_dir.empty()) {
        return std::make_unique<FixtureSearchClient>(config.fixture_dir);
    }
    if (!config.endpoint.empty()) {
        return std::make_unique<HttpSearchClient>(config.endpoint);
    }
    throw ConfigError("engine " + config.engine + " has neither an endpoint nor a fixture dir");
}

namespace {

struct QueryJob {
    std::string query;
    Origin origin;
    std::size_t engine_index;
};

class ScopedEngineSlot {
public:
    explicit ScopedEngineSlot(EngineHandle& engine) : engine_(engine) { engine_.acquire(); }
    ~ScopedEngineSlot() { engine_.release(); }

private:
    EngineHandle& engine_;
};

} // namespace

std::vector<ImageRecord> harvest_class(const ConceptClass& cls,
                                       const std::vector<Expansion>& expansions,
                                       std::vector<EngineHandle>& engines,
                                       const HarvestOptions& options) {
    if (engines.empty()) throw PreconditionError("harvest_class: no engines configured");

    // Base query first, then expansions in rank order; engines in configured
    // order. This fixes the output ordering up front.
    std::vector<QueryJob> jobs;
    for (std::size_t e = 0; e < engines.size(); ++e) {
        jobs.push_back(QueryJob{cls.name, Origin{}, e});
    }
    for (const auto& expansion : expansions) {
        for (std::size_t e = 0; e < engines.size(); ++e) {
            jobs.push_back(QueryJob{expansion.keyword, Origin{expansion.keyword}, e});
        }
    }

    std::vector<std::vector<ImageRecord>> per_job(jobs.size());
    std::vector<std::string> query_errors(jobs.size());

    parallel_for(jobs.size(), options.workers, [&](std::size_t j) {
        const QueryJob& job = jobs[j];
        EngineHandle& engine = engines[job.engine_index];
        std::vector<SearchResult> results;
        try {
            ScopedEngineSlot slot(engine);
            results = search_images(job.query, engine.client(), engine.config());
        } catch (const std::exception& e) {
            query_errors[j] = e.what();
            return;
        }
        Provenance provenance{cls.class_id, cls.name, job.origin};
        per_job[j].reserve(results.size());
        for (const auto& result : results) {
            ScopedEngineSlot slot(engine);
            per_job[j].push_back(fetch_image(result, provenance, options.fetch));
        }
    });

    const bool all_failed = std::all_of(query_errors.begin(), query_errors.end(),
                                        [](const std::string& e) { return !e.empty(); });
    if (all_failed && !jobs.empty()) {
        throw Error("harvest_class: every query failed for class '" + cls.name +
                    "' (first error: " + query_errors.front() + ")");
    }

    std::vector<ImageRecord> records;
    for (auto& job_records : per_job) {
        records.insert(records.end(), std::make_move_iterator(job_records.begin()),
                       std::make_move_iterator(job_records.end()));
    }
    return records;
}

std::vector<ImageRecord> harvest_crap(const ConceptClass& cls, EngineHandle& engine,
                                      const HarvestOptions& options, int max_images) {
    if (max_images < 0) throw PreconditionError("harvest_crap: max_images must be >= 0");
    std::vector<SearchResult> results;
    {
        ScopedEngineSlot slot(engine);
        EngineConfig config = engine.config();
        config.top_k = std::max(config.top_k, max_images);
        results = search_images(cls.name, engine.client(), config);
    }
    if (static_cast<int>(results.size()) > max_images) {
        results.resize(static_cast<std::size_t>(max_images));
    }

    std::vector<ImageRecord> records(results.size());
    Provenance provenance{cls.class_id, cls.name, Origin{}};
    parallel_for(results.size(), options.workers, [&](std::size_t i) {
        ScopedEngineSlot slot(engine);
        records[i] = fetch_image(results[i], provenance, options.fetch);
    });
    return records;
}

} // namespace webharvest
