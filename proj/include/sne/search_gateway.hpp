#pragma once

/** \file search_gateway.hpp
 *  \brief Backend-agnostic search access: the SearchBackend interface, the
 *  offline backend over a CorpusIndex, a replay backend over recorded
 *  responses, a generic HTTP-JSON adapter for live engines, and the query
 *  cache that fronts all of them.
 *
 * Hit counts reported by a backend are passed through unmodified, including
 * estimates that violate |a AND b| <= |a|.
 */

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sne/corpus_index.hpp"

namespace sne {

struct BackendCapabilities {
    bool exact_hit_counts{false};
    bool corpus_size_known{false};
};

class SearchBackend {
public:
    virtual ~SearchBackend() = default;

    /// Throws BackendError on transport failure, BackendParseError on a
    /// response that cannot be interpreted, InvalidQueryError on bad input.
    virtual QueryResult search(const Query& query, std::size_t cap) = 0;

    virtual BackendCapabilities capabilities() const = 0;

    /// |Omega| when the backend knows it.
    virtual std::optional<std::uint64_t> corpus_size() const { return std::nullopt; }
};

class OfflineBackend final : public SearchBackend {
public:
    explicit OfflineBackend(std::shared_ptr<const CorpusIndex> index) : index_(std::move(index)) {}

    QueryResult search(const Query& query, std::size_t cap) override { return index_->run_query(query, cap); }
    BackendCapabilities capabilities() const override { return {true, true}; }
    std::optional<std::uint64_t> corpus_size() const override { return index_->corpus_size(); }

    const CorpusIndex& index() const noexcept { return *index_; }

private:
    std::shared_ptr<const CorpusIndex> index_;
};

/// Lowercase, whitespace runs collapsed to one space, trimmed.
std::string normalize_query_text(std::string_view text);

struct CacheKey {
    std::vector<std::string> terms;  ///< normalized
    bool quoted{false};
    std::size_t cap{kDefaultSnippetCap};

    static CacheKey of(const Query& query, std::size_t cap);

    auto operator<=>(const CacheKey&) const = default;
};

nlohmann::json to_json(const QueryResult& result);
QueryResult query_result_from_json(const nlohmann::json& j);

/// Thread-safe map from CacheKey to QueryResult. With a persistence path the
/// existing JSON-lines file is loaded on construction and each new entry is
/// appended as `{"key": {...}, "result": {...}}`.
class QueryCache {
public:
    QueryCache() = default;
    explicit QueryCache(std::string persistence_path);

    std::optional<QueryResult> find(const CacheKey& key) const;
    void store(const CacheKey& key, const QueryResult& result);
    std::size_t size() const;

    /// Entries in key order.
    std::vector<std::pair<CacheKey, QueryResult>> entries() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<CacheKey, QueryResult> entries_;
    std::string path_;
};

/// Reads a cache file; errors name the 1-based line.
std::vector<std::pair<CacheKey, QueryResult>> read_cache_jsonl(const std::string& path);

/// Cache hit returns the stored result; a miss delegates to the backend,
/// stores, and returns.
QueryResult search_cached(SearchBackend& backend, QueryCache& cache, const Query& query,
                          std::size_t cap = kDefaultSnippetCap);

/// Serves previously recorded responses (cache-file format). A request with a
/// smaller cap than the recording is served truncated. Unrecorded queries
/// raise BackendError.
class ReplayBackend final : public SearchBackend {
public:
    explicit ReplayBackend(const std::string& path);
    explicit ReplayBackend(std::vector<std::pair<CacheKey, QueryResult>> recordings);

    QueryResult search(const Query& query, std::size_t cap) override;
    BackendCapabilities capabilities() const override { return {false, corpus_size_.has_value()}; }
    std::optional<std::uint64_t> corpus_size() const override { return corpus_size_; }

    void set_corpus_size(std::uint64_t n) { corpus_size_ = n; }

private:
    std::map<CacheKey, QueryResult> recordings_;
    std::optional<std::uint64_t> corpus_size_;
};

/// Generic live adapter. The endpoint is a URL template whose `{query}`
/// placeholder receives the percent-encoded Query::text(). Hit count and
/// snippet array are located with JSON pointers.
struct HttpJsonConfig {
    std::string endpoint;
    std::string hit_count_pointer{"/hit_count"};
    std::string snippets_pointer{"/snippets"};
    std::string url_field{"url"};
    std::string title_field{"title"};
    std::string summary_field{"summary"};
    std::chrono::milliseconds min_delay{1000};
    std::chrono::seconds timeout{30};

    /// Reads a JSON object with keys endpoint, hit_count_pointer,
    /// snippets_pointer, url_field, title_field, summary_field, delay_ms,
    /// timeout_s. Only endpoint is required.
    static HttpJsonConfig from_json(const nlohmann::json& j);
    static HttpJsonConfig load(const std::string& path);
};

std::string percent_encode(std::string_view text);

/// Interprets a response body. Throws BackendParseError naming the query on
/// anything malformed; never yields a silent zero.
QueryResult parse_http_json_response(const std::string& body, const HttpJsonConfig& config, const Query& query,
                                     std::size_t cap);

/// At most one request in flight; consecutive requests are spaced by at least
/// `min_delay`.
class HttpJsonBackend final : public SearchBackend {
public:
    explicit HttpJsonBackend(HttpJsonConfig config);

    QueryResult search(const Query& query, std::size_t cap) override;
    BackendCapabilities capabilities() const override { return {false, false}; }

    /// Request target for a query, e.g. "http://host:8080/search?q=%22a%22".
    std::string request_url(const Query& query) const;

private:
    HttpJsonConfig config_;
    std::string origin_;
    std::string target_template_;
    std::mutex request_mutex_;
    std::optional<std::chrono::steady_clock::time_point> last_request_;
};

}  // namespace sne
