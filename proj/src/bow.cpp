#include "sne/bow.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace sne {

BowVector bow_from_snippets(std::span<const Snippet> snippets, const TokenizerConfig& tokenizer) {
    BowVector v;
    for (const auto& snippet : snippets) {
        auto words = tokenize(snippet.title, tokenizer);
        for (const auto& piece : snippet.summary) {
            for (auto& w : tokenize(piece, tokenizer)) {
                words.push_back(std::move(w));
            }
        }
        if (words.empty()) {
            continue;
        }
        std::map<std::string, std::size_t> counts;
        for (const auto& w : words) {
            ++counts[w];
        }
        const auto total = static_cast<double>(words.size());
        for (const auto& [w, n] : counts) {
            v.raw[w] += static_cast<double>(n) / total;
        }
        ++v.source_snippet_count;
    }
    if (v.source_snippet_count == 0) {
        return v;
    }

    const auto l = static_cast<double>(v.source_snippet_count);
    double sum_sq = 0.0;
    for (auto& [w, p] : v.raw) {
        p /= l;
        sum_sq += p * p;
    }
    const double norm = std::sqrt(sum_sq);
    for (const auto& [w, p] : v.raw) {
        v.weights.emplace(w, p / norm);
    }
    return v;
}

std::set<std::string> bow_support(const BowVector& v, double epsilon) {
    std::set<std::string> out;
    for (const auto& [w, pr] : v.weights) {
        if (pr > epsilon) {
            out.insert(w);
        }
    }
    return out;
}

nlohmann::json bow_to_json(const BowVector& v) {
    auto j = nlohmann::json::object();
    for (const auto& [w, pr] : v.weights) {
        j[w] = {v.raw.at(w), pr};
    }
    return j;
}

}  // namespace sne
