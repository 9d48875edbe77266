#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sne/corpus_index.hpp"
#include "sne/tokenizer.hpp"

namespace sne {

/// Word weights drawn from the titles and summaries of a query's snippets.
///
/// raw[w] is the per-snippet relative frequency |w_t|/|s_t| averaged over the
/// l non-empty snippets; weights[w] is raw[w] divided by the Euclidean norm of
/// all raw values, so a non-empty vector has unit length.
struct BowVector {
    std::map<std::string, double> weights;
    std::map<std::string, double> raw;
    std::size_t source_snippet_count{0};

    bool empty() const noexcept { return weights.empty(); }

    bool operator==(const BowVector&) const = default;
};

BowVector bow_from_snippets(std::span<const Snippet> snippets, const TokenizerConfig& tokenizer = {});

/// Words with weight strictly greater than epsilon.
std::set<std::string> bow_support(const BowVector& v, double epsilon = 0.0);

/// Debug dump: {"word": [p, pr], ...}.
nlohmann::json bow_to_json(const BowVector& v);

}  // namespace sne
