#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "webharvest/errors.hpp"
#include "webharvest/types.hpp"

namespace webharvest {

// One engine result: rank is the 1-based position in the engine's ordering,
// unique per (engine, query) and never above top_k.
struct SearchResult {
    std::string url;
    int result_rank = 0;
    std::string engine;
    std::string query;

    bool operator==(const SearchResult&) const = default;
};

struct EngineConfig {
    std::string engine;   // tag, e.g. "google"
    std::string endpoint; // live URL template; empty in fixture mode
    std::filesystem::path fixture_dir; // fixtures/<engine>/ when offline
    int top_k = 200;
    int max_concurrent_requests = 4;
    std::chrono::milliseconds min_request_interval{0};
};

// Retriable backend failure (timeouts, rate limits). harvest retries these
// with exponential backoff before giving up on the item.
class RetriableError : public Error {
public:
    using Error::Error;
};

// The keyword service returned nothing for a class; callers proceed with the
// base query only.
class EmptyExpansionError : public Error {
public:
    using Error::Error;
};

// Ranked visual-keyword source (MyKeyworder-style semantics).
class KeywordClient {
public:
    virtual ~KeywordClient() = default;
    virtual std::vector<std::string> keywords(const std::string& class_name) const = 0;
};

// Reads fixtures/keywords/<urlencoded-class>.txt, one keyword per line.
class FixtureKeywordClient : public KeywordClient {
public:
    explicit FixtureKeywordClient(std::filesystem::path fixture_dir);
    std::vector<std::string> keywords(const std::string& class_name) const override;

private:
    std::filesystem::path fixture_dir_;
};

// GETs <endpoint>?q=<urlencoded-class>; accepts a JSON string array or a
// newline-delimited body.
class HttpKeywordClient : public KeywordClient {
public:
    explicit HttpKeywordClient(std::string endpoint);
    std::vector<std::string> keywords(const std::string& class_name) const override;

private:
    std::string endpoint_;
};

class SearchClient {
public:
    virtual ~SearchClient() = default;
    virtual std::vector<std::string> urls(const std::string& query) const = 0;
};

// Reads <fixture_dir>/<urlencoded-query>.txt, one URL per line (rank = line
// number). A missing fixture file is a configuration error.
class FixtureSearchClient : public SearchClient {
public:
    explicit FixtureSearchClient(std::filesystem::path fixture_dir);
    std::vector<std::string> urls(const std::string& query) const override;

private:
    std::filesystem::path fixture_dir_;
};

// GETs <endpoint>?q=<urlencoded-query>; accepts a JSON string array or a
// newline-delimited body of image URLs.
class HttpSearchClient : public SearchClient {
public:
    explicit HttpSearchClient(std::string endpoint);
    std::vector<std::string> urls(const std::string& query) const override;

private:
    std::string endpoint_;
};

// RFC 3986 percent-encoding of everything outside the unreserved set; used
// for fixture file names and live query strings.
std::string urlencode(const std::string& text);

// Expands a class into at most k keywords: the service's ranked stream with
// the class name and case-insensitive repeats dropped, truncated to k.
// Zero usable keywords raises EmptyExpansionError.
std::vector<Expansion> expand_concept(const ConceptClass& cls, const KeywordClient& client,
                                      int k = 20);

// At most top_k results in engine order, with syntactically valid URLs.
std::vector<SearchResult> search_images(const std::string& query, const SearchClient& client,
                                        const EngineConfig& engine);

struct FetchOptions {
    std::filesystem::path store;
    int attempts = 3;
    std::chrono::milliseconds backoff{1000}; // doubles per retry
    std::chrono::milliseconds timeout{10000};
};

struct Provenance {
    std::string class_id;
    std::string label;
    Origin origin;
};

// Downloads one result into the content-addressed store. Success fills
// digest/phash/local_path; failures come back as fetch_status=failed with a
// distinct reason (timeout, http_<code>, non_image, io_error, ...) and never
// leave a partial file or abort the pipeline.
ImageRecord fetch_image(const SearchResult& result, const Provenance& provenance,
                        const FetchOptions& options);

// An engine with its backend client and I/O throttling state.
class EngineHandle {
public:
    EngineHandle(EngineConfig config, std::unique_ptr<SearchClient> client);

    const EngineConfig& config() const { return config_; }
    const SearchClient& client() const { return *client_; }

    // Per-engine politeness gate: bounds in-flight requests and spaces them
    // at least min_request_interval apart.
    void acquire();
    void release();

private:
    EngineConfig config_;
    std::unique_ptr<SearchClient> client_;
    std::mutex mutex_;
    std::condition_variable cv_;
    int in_flight_ = 0;
    std::chrono::steady_clock::time_point next_allowed_{};
};

std::unique_ptr<SearchClient> make_search_client(const EngineConfig& config);

struct HarvestOptions {
    FetchOptions fetch;
    unsigned workers = 8;
};

// Full candidate harvest for one class: (1 + |expansions|) queries against
// every engine, all results fetched. Records come back in deterministic
// (query, engine, rank) order regardless of completion order. Aggregates
// per-result failures; throws only if every query failed.
std::vector<ImageRecord> harvest_class(const ConceptClass& cls,
                                       const std::vector<Expansion>& expansions,
                                       std::vector<EngineHandle>& engines,
                                       const HarvestOptions& options);

// Bulk single-engine harvest with no expansion: up to max_images base-query
// records.
std::vector<ImageRecord> harvest_crap(const ConceptClass& cls, EngineHandle& engine,
                                      const HarvestOptions& options, int max_images = 10000);

} // namespace webharvest
