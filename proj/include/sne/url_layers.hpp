#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sne {

/// An absolute URL split into layers: the authority followed by each
/// non-empty path segment, with any `?query` left attached to the last layer.
/// The scheme is kept aside and does not count as a layer. Layers are
/// percent-decoded.
struct UrlLayers {
    std::string scheme;
    std::vector<std::string> layers;

    std::size_t depth() const noexcept { return layers.size(); }

    bool operator==(const UrlLayers&) const = default;
};

/// Dice-style layer overlap: value = 2 * shared / (a_size + b_size), or 0
/// when both sides are empty. `shared` is fractional for URL sets because
/// the two best-match directions are averaged.
struct UrlSimilarity {
    std::size_t a_size{0};
    std::size_t b_size{0};
    double shared{0.0};
    double value{0.0};
};

/// Throws UrlParseError for relative, schemeless, or authority-less input.
UrlLayers parse_url(std::string_view url);

std::string percent_decode(std::string_view text);

/// Length of the longest common layer prefix, compared case-insensitively.
std::size_t layer_match(const UrlLayers& u, const UrlLayers& v);

UrlSimilarity url_pair_similarity(const UrlLayers& u, const UrlLayers& v);

/// Accumulated similarity of two URL lists: |a| and |b| sum the depths, and
/// |ab| averages the sum of each URL's best layer_match against the other
/// side, taken in both directions. Empty input on either side gives 0.
UrlSimilarity url_set_similarity(std::span<const UrlLayers> us, std::span<const UrlLayers> vs);

}  // namespace sne
