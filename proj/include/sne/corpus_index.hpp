#pragma once

/** \file corpus_index.hpp
 *  \brief Offline information space: an inverted index over a document
 *  collection answering occurrence and co-occurrence queries with exact hit
 *  counts and search-engine-style snippets.
 *
 * Matching covers title and body. An unquoted term matches a document that
 * contains all of its tokens anywhere; a quoted term must appear as a
 * contiguous phrase inside a single field. Two-term queries match the
 * intersection. Snippets follow ascending doc_id order.
 *
 * Thread-safety: immutable after build(); concurrent queries are safe.
 */

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sne/tokenizer.hpp"

namespace sne {

inline constexpr std::size_t kDefaultSnippetCap = 10;
inline constexpr std::size_t kSnippetWindow = 50;

struct Document {
    std::uint64_t doc_id{0};
    std::string url;
    std::string title;
    std::string body;

    bool operator==(const Document&) const = default;
};

/// One or two actor names. `quoted` selects exact-phrase matching.
struct Query {
    std::vector<std::string> terms;
    bool quoted{false};

    static Query occurrence(std::string term, bool quoted = false);
    static Query cooccurrence(std::string a, std::string b, bool quoted = false);

    /// Search-box rendering: terms separated by a space, each wrapped in
    /// double quotes when quoted.
    std::string text() const;

    bool operator==(const Query&) const = default;
};

struct Snippet {
    std::string url;
    std::string title;
    std::vector<std::string> summary;
    std::uint64_t source_doc_id{0};

    std::string summary_text() const;

    bool operator==(const Snippet&) const = default;
};

struct QueryResult {
    std::uint64_t hit_count{0};
    std::vector<Snippet> snippets;

    bool operator==(const QueryResult&) const = default;
};

struct Posting {
    std::uint64_t doc_id{0};
    /// Title tokens occupy [0, T); body token i sits at T + 1 + i, so no
    /// phrase can straddle the two fields.
    std::vector<std::uint32_t> positions;
};

class CorpusIndex {
public:
    CorpusIndex() = default;

    /// Throws DataError on a duplicate doc_id or an empty url.
    static CorpusIndex build(std::vector<Document> documents, TokenizerConfig tokenizer = {});

    std::size_t corpus_size() const noexcept { return documents_.size(); }
    std::size_t vocabulary_size() const noexcept { return postings_.size(); }
    std::size_t total_tokens() const noexcept { return total_tokens_; }

    /// Sorted by doc_id.
    const std::vector<Document>& documents() const noexcept { return documents_; }
    const TokenizerConfig& tokenizer() const noexcept { return tokenizer_; }

    /// Postings for a normalized token, sorted by doc_id; empty when absent.
    const std::vector<Posting>& postings(std::string_view token) const;

    /// doc_ids of every matching document, ascending.
    std::vector<std::uint64_t> matching_documents(const Query& query) const;

    QueryResult run_query(const Query& query, std::size_t cap = kDefaultSnippetCap) const;

    /// Binary persistence. The file stores the tokenizer configuration and the
    /// documents; postings are rebuilt on load.
    void save(const std::string& path) const;
    static CorpusIndex load(const std::string& path);

private:
    std::vector<std::uint64_t> matching_term(const std::vector<std::string>& tokens, bool phrase) const;
    bool contains_phrase(std::uint64_t doc_id, const std::vector<std::string>& tokens) const;
    const Document& document(std::uint64_t doc_id) const;

    std::vector<Document> documents_;
    std::unordered_map<std::uint64_t, std::size_t> ordinal_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    TokenizerConfig tokenizer_;
    std::size_t total_tokens_{0};
};

/// Tokenizes each query term and rejects terms with no tokens or a term count
/// outside [1, 2].
std::vector<std::vector<std::string>> tokenize_query(const Query& query, const TokenizerConfig& tokenizer);

/// Summary is a 50-token window of the body centered on the first body
/// occurrence of the first term's first token, shifted to stay in bounds.
/// A first term that only matches in the title starts the window at 0.
Snippet make_snippet(const Document& doc, const Query& query, const TokenizerConfig& tokenizer = {});

/// JSON-lines corpus: one object per line with `id`, `url`, `title`, `body`.
/// Blank lines are skipped. Errors name the 1-based line number.
std::vector<Document> read_corpus_jsonl(std::istream& in);
std::vector<Document> read_corpus_jsonl(const std::string& path);

}  // namespace sne
