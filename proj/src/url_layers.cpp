#include "sne/url_layers.hpp"

#include <algorithm>
#include <cctype>

#include "sne/error.hpp"

namespace sne {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

bool iequals(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](unsigned char x, unsigned char y) {
        return std::tolower(x) == std::tolower(y);
    });
}

bool valid_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '+' || c == '-' || c == '.';
    });
}

}  // namespace

std::string percent_decode(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size()) {
            const int hi = hex_value(text[i + 1]);
            const int lo = hex_value(text[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(text[i]);
    }
    return out;
}

UrlLayers parse_url(std::string_view url) {
    const auto sep = url.find("://");
    if (sep == std::string_view::npos || !valid_scheme(url.substr(0, sep))) {
        throw UrlParseError(std::string(url));
    }
    UrlLayers out;
    out.scheme.reserve(sep);
    for (unsigned char c : url.substr(0, sep)) {
        out.scheme.push_back(static_cast<char>(std::tolower(c)));
    }

    auto rest = url.substr(sep + 3);
    rest = rest.substr(0, rest.find('#'));
    const auto authority_end = rest.find_first_of("/?");
    const auto authority = rest.substr(0, authority_end);
    if (authority.empty()) {
        throw UrlParseError(std::string(url));
    }
    out.layers.push_back(percent_decode(authority));

    std::string_view path;
    std::string_view query;
    bool has_query = false;
    if (authority_end != std::string_view::npos) {
        auto tail = rest.substr(authority_end);
        const auto q = tail.find('?');
        if (q != std::string_view::npos) {
            has_query = true;
            query = tail.substr(q + 1);
            tail = tail.substr(0, q);
        }
        path = tail;
    }
    while (!path.empty()) {
        const auto slash = path.find('/');
        const auto segment = path.substr(0, slash);
        if (!segment.empty()) {
            out.layers.push_back(percent_decode(segment));
        }
        if (slash == std::string_view::npos) {
            break;
        }
        path.remove_prefix(slash + 1);
    }
    if (has_query) {
        out.layers.back() += '?';
        out.layers.back() += percent_decode(query);
    }
    return out;
}

std::size_t layer_match(const UrlLayers& u, const UrlLayers& v) {
    const auto n = std::min(u.depth(), v.depth());
    std::size_t k = 0;
    while (k < n && iequals(u.layers[k], v.layers[k])) {
        ++k;
    }
    return k;
}

UrlSimilarity url_pair_similarity(const UrlLayers& u, const UrlLayers& v) {
    UrlSimilarity s;
    s.a_size = u.depth();
    s.b_size = v.depth();
    s.shared = static_cast<double>(layer_match(u, v));
    const auto total = s.a_size + s.b_size;
    s.value = total > 0 ? 2.0 * s.shared / static_cast<double>(total) : 0.0;
    return s;
}

UrlSimilarity url_set_similarity(std::span<const UrlLayers> us, std::span<const UrlLayers> vs) {
    UrlSimilarity s;
    for (const auto& u : us) s.a_size += u.depth();
    for (const auto& v : vs) s.b_size += v.depth();
    if (us.empty() || vs.empty()) {
        return s;
    }
    std::size_t forward = 0;
    for (const auto& u : us) {
        std::size_t best = 0;
        for (const auto& v : vs) best = std::max(best, layer_match(u, v));
        forward += best;
    }
    std::size_t backward = 0;
    for (const auto& v : vs) {
        std::size_t best = 0;
        for (const auto& u : us) best = std::max(best, layer_match(u, v));
        backward += best;
    }
    s.shared = static_cast<double>(forward + backward) / 2.0;
    const auto total = s.a_size + s.b_size;
    s.value = total > 0 ? 2.0 * s.shared / static_cast<double>(total) : 0.0;
    return s;
}

}  // namespace sne
