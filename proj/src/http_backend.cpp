#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "sne/error.hpp"
#include "sne/search_gateway.hpp"

namespace sne {

HttpJsonBackend::HttpJsonBackend(HttpJsonConfig config) : config_(std::move(config)) {
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("live adapter endpoint is not an absolute URL: " + config_.endpoint);
    }
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    origin_ = config_.endpoint.substr(0, path_start);
    target_template_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
    if (target_template_.find("{query}") == std::string::npos) {
        throw ConfigError("live adapter endpoint lacks a {query} placeholder in its path or query string");
    }
}

std::string HttpJsonBackend::request_url(const Query& query) const {
    auto target = target_template_;
    const auto encoded = percent_encode(query.text());
    for (auto pos = target.find("{query}"); pos != std::string::npos; pos = target.find("{query}", pos)) {
        target.replace(pos, 7, encoded);
        pos += encoded.size();
    }
    return origin_ + target;
}

QueryResult HttpJsonBackend::search(const Query& query, std::size_t cap) {
    const auto url = request_url(query);
    const auto target = url.substr(origin_.size());

    std::lock_guard lock(request_mutex_);
    if (last_request_) {
        const auto ready = *last_request_ + config_.min_delay;
        std::this_thread::sleep_until(ready);
    }

    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    auto response = client.Get(target);
    last_request_ = std::chrono::steady_clock::now();

    if (!response) {
        throw BackendError(query.text(), "transport error: " + httplib::to_string(response.error()));
    }
    if (response->status != 200) {
        throw BackendError(query.text(), fmt::format("HTTP status {}", response->status));
    }
    return parse_http_json_response(response->body, config_, query, cap);
}

}  // namespace sne
