#include "sne/search_gateway.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sne/error.hpp"

namespace sne {

using nlohmann::json;

std::string normalize_query_text(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

CacheKey CacheKey::of(const Query& query, std::size_t cap) {
    CacheKey key;
    key.quoted = query.quoted;
    key.cap = cap;
    for (const auto& term : query.terms) {
        key.terms.push_back(normalize_query_text(term));
    }
    return key;
}

namespace {

json key_to_json(const CacheKey& key) {
    return json{{"terms", key.terms}, {"quoted", key.quoted}, {"cap", key.cap}};
}

CacheKey key_from_json(const json& j) {
    CacheKey key;
    key.terms = j.at("terms").get<std::vector<std::string>>();
    key.quoted = j.at("quoted").get<bool>();
    key.cap = j.at("cap").get<std::size_t>();
    for (auto& term : key.terms) {
        term = normalize_query_text(term);
    }
    return key;
}

std::vector<std::string> split_words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> words;
    for (std::string w; in >> w;) {
        words.push_back(w);
    }
    return words;
}

std::vector<std::string> summary_from_json(const json& j) {
    if (j.is_string()) {
        return split_words(j.get<std::string>());
    }
    return j.get<std::vector<std::string>>();
}

}  // namespace

json to_json(const QueryResult& result) {
    json snippets = json::array();
    for (const auto& s : result.snippets) {
        snippets.push_back(json{{"url", s.url}, {"title", s.title}, {"summary", s.summary}, {"doc_id", s.source_doc_id}});
    }
    return json{{"hit_count", result.hit_count}, {"snippets", std::move(snippets)}};
}

QueryResult query_result_from_json(const json& j) {
    QueryResult result;
    result.hit_count = j.at("hit_count").get<std::uint64_t>();
    if (j.contains("snippets")) {
        for (const auto& s : j.at("snippets")) {
            Snippet snippet;
            snippet.url = s.at("url").get<std::string>();
            snippet.title = s.value("title", std::string{});
            if (s.contains("summary")) {
                snippet.summary = summary_from_json(s.at("summary"));
            }
            snippet.source_doc_id = s.value("doc_id", std::uint64_t{0});
            result.snippets.push_back(std::move(snippet));
        }
    }
    return result;
}

std::vector<std::pair<CacheKey, QueryResult>> read_cache_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open cache file: " + path);
    }
    std::vector<std::pair<CacheKey, QueryResult>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const auto j = json::parse(line);
            out.emplace_back(key_from_json(j.at("key")), query_result_from_json(j.at("result")));
        } catch (const json::exception& e) {
            throw DataError(fmt::format("{}: line {}: {}", path, line_no, e.what()));
        }
    }
    return out;
}

QueryCache::QueryCache(std::string persistence_path) : path_(std::move(persistence_path)) {
    if (std::ifstream probe(path_); probe) {
        for (auto& [key, result] : read_cache_jsonl(path_)) {
            entries_.insert_or_assign(std::move(key), std::move(result));
        }
    }
}

std::optional<QueryResult> QueryCache::find(const CacheKey& key) const {
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void QueryCache::store(const CacheKey& key, const QueryResult& result) {
    std::unique_lock lock(mutex_);
    const auto [it, inserted] = entries_.insert_or_assign(key, result);
    if (!path_.empty() && inserted) {
        std::ofstream out(path_, std::ios::app);
        if (!out) {
            throw DataError("cannot append to cache file: " + path_);
        }
        out << json{{"key", key_to_json(key)}, {"result", to_json(result)}}.dump() << '\n';
    }
}

std::size_t QueryCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::vector<std::pair<CacheKey, QueryResult>> QueryCache::entries() const {
    std::shared_lock lock(mutex_);
    return {entries_.begin(), entries_.end()};
}

QueryResult search_cached(SearchBackend& backend, QueryCache& cache, const Query& query, std::size_t cap) {
    const auto key = CacheKey::of(query, cap);
    if (auto hit = cache.find(key)) {
        return *std::move(hit);
    }
    auto result = backend.search(query, cap);
    cache.store(key, result);
    return result;
}

ReplayBackend::ReplayBackend(const std::string& path) : ReplayBackend(read_cache_jsonl(path)) {}

ReplayBackend::ReplayBackend(std::vector<std::pair<CacheKey, QueryResult>> recordings) {
    for (auto& [key, result] : recordings) {
        recordings_.insert_or_assign(std::move(key), std::move(result));
    }
}

QueryResult ReplayBackend::search(const Query& query, std::size_t cap) {
    const auto key = CacheKey::of(query, cap);
    if (const auto it = recordings_.find(key); it != recordings_.end()) {
        return it->second;
    }
    // Fall back to a recording made with a larger cap.
    for (const auto& [recorded, result] : recordings_) {
        if (recorded.terms == key.terms && recorded.quoted == key.quoted && recorded.cap >= cap) {
            QueryResult truncated = result;
            if (truncated.snippets.size() > cap) {
                truncated.snippets.resize(cap);
            }
            return truncated;
        }
    }
    throw BackendError(query.text(), "no recorded response");
}

HttpJsonConfig HttpJsonConfig::from_json(const json& j) {
    HttpJsonConfig config;
    try {
        config.endpoint = j.at("endpoint").get<std::string>();
        config.hit_count_pointer = j.value("hit_count_pointer", config.hit_count_pointer);
        config.snippets_pointer = j.value("snippets_pointer", config.snippets_pointer);
        config.url_field = j.value("url_field", config.url_field);
        config.title_field = j.value("title_field", config.title_field);
        config.summary_field = j.value("summary_field", config.summary_field);
        config.min_delay = std::chrono::milliseconds(j.value("delay_ms", config.min_delay.count()));
        config.timeout = std::chrono::seconds(j.value("timeout_s", config.timeout.count()));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("live adapter config: ") + e.what());
    }
    if (config.endpoint.find("{query}") == std::string::npos) {
        throw ConfigError("live adapter endpoint lacks a {query} placeholder: " + config.endpoint);
    }
    return config;
}

HttpJsonConfig HttpJsonConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open live adapter config: " + path);
    }
    try {
        return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("live adapter config {}: {}", path, e.what()));
    }
}

std::string percent_encode(std::string_view text) {
    std::string out;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out += fmt::format("%{:02X}", c);
        }
    }
    return out;
}

namespace {

std::uint64_t parse_hit_count(const json& node, const std::string& query) {
    if (node.is_number_unsigned()) {
        return node.get<std::uint64_t>();
    }
    if (node.is_number_integer() && node.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(node.get<std::int64_t>());
    }
    if (node.is_string()) {
        // Engines often render counts as "1,410".
        std::string digits;
        for (char c : node.get<std::string>()) {
            if (c >= '0' && c <= '9') {
                digits.push_back(c);
            } else if (c != ',' && c != ' ' && c != '.') {
                digits.clear();
                break;
            }
        }
        if (!digits.empty()) {
            return std::stoull(digits);
        }
    }
    throw BackendParseError(query, "hit count is not a non-negative integer: " + node.dump());
}

}  // namespace

QueryResult parse_http_json_response(const std::string& body, const HttpJsonConfig& config, const Query& query,
                                     std::size_t cap) {
    const auto text = query.text();
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error& e) {
        throw BackendParseError(text, std::string("response is not JSON: ") + e.what());
    }
    QueryResult result;
    try {
        const json::json_pointer hits_ptr(config.hit_count_pointer);
        if (!doc.contains(hits_ptr)) {
            throw BackendParseError(text, "response lacks " + config.hit_count_pointer);
        }
        result.hit_count = parse_hit_count(doc.at(hits_ptr), text);

        const json::json_pointer snippets_ptr(config.snippets_pointer);
        if (!doc.contains(snippets_ptr)) {
            return result;
        }
        const auto& items = doc.at(snippets_ptr);
        if (!items.is_array()) {
            throw BackendParseError(text, config.snippets_pointer + " is not an array");
        }
        const auto shown = std::min<std::uint64_t>(std::min<std::uint64_t>(items.size(), cap), result.hit_count);
        for (std::size_t i = 0; i < shown; ++i) {
            const auto& item = items[i];
            if (!item.is_object() || !item.contains(config.url_field) || !item[config.url_field].is_string()) {
                throw BackendParseError(text, fmt::format("snippet {} has no string '{}'", i, config.url_field));
            }
            Snippet snippet;
            snippet.url = item[config.url_field].get<std::string>();
            snippet.title = item.value(config.title_field, std::string{});
            if (item.contains(config.summary_field)) {
                snippet.summary = summary_from_json(item[config.summary_field]);
            }
            snippet.source_doc_id = i;
            result.snippets.push_back(std::move(snippet));
        }
    } catch (const json::exception& e) {
        throw BackendParseError(text, e.what());
    }
    return result;
}

}  // namespace sne
