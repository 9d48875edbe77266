#include "sne/corpus_index.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <istream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "sne/error.hpp"

namespace sne {

namespace {

const std::vector<Posting> kNoPostings;

constexpr std::array<char, 8> kIndexMagic{'S', 'N', 'E', 'I', 'D', 'X', '\0', '\1'};

std::vector<std::uint64_t> intersect(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void write_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (std::size_t i = 0; i < 8; ++i) {
        bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(bytes.data(), bytes.size());
}

void write_string(std::ostream& out, const std::string& s) {
    write_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint64_t read_u64(std::istream& in, const std::string& path) {
    std::array<char, 8> bytes{};
    if (!in.read(bytes.data(), bytes.size())) {
        throw DataError("truncated index file: " + path);
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    }
    return v;
}

std::string read_string(std::istream& in, const std::string& path) {
    const auto size = read_u64(in, path);
    constexpr std::uint64_t kMaxField = 1ULL << 32;
    if (size > kMaxField) {
        throw DataError("corrupt index file: " + path);
    }
    std::string s(size, '\0');
    if (size > 0 && !in.read(s.data(), static_cast<std::streamsize>(size))) {
        throw DataError("truncated index file: " + path);
    }
    return s;
}

}  // namespace

Query Query::occurrence(std::string term, bool quoted) {
    return Query{{std::move(term)}, quoted};
}

Query Query::cooccurrence(std::string a, std::string b, bool quoted) {
    return Query{{std::move(a), std::move(b)}, quoted};
}

std::string Query::text() const {
    std::string out;
    for (const auto& term : terms) {
        if (!out.empty()) {
            out += ' ';
        }
        out += quoted ? "\"" + term + "\"" : term;
    }
    return out;
}

std::string Snippet::summary_text() const {
    return fmt::format("{}", fmt::join(summary, " "));
}

std::vector<std::vector<std::string>> tokenize_query(const Query& query, const TokenizerConfig& tokenizer) {
    if (query.terms.empty() || query.terms.size() > 2) {
        throw InvalidQueryError(fmt::format("a query takes 1 or 2 terms, got {}", query.terms.size()));
    }
    std::vector<std::vector<std::string>> out;
    for (const auto& term : query.terms) {
        auto tokens = tokenize(term, tokenizer);
        if (tokens.empty()) {
            throw InvalidQueryError("query term has no searchable tokens: '" + term + "'");
        }
        out.push_back(std::move(tokens));
    }
    return out;
}

CorpusIndex CorpusIndex::build(std::vector<Document> documents, TokenizerConfig tokenizer) {
    CorpusIndex index;
    index.tokenizer_ = std::move(tokenizer);
    std::sort(documents.begin(), documents.end(),
              [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
    for (std::size_t i = 0; i < documents.size(); ++i) {
        if (i > 0 && documents[i].doc_id == documents[i - 1].doc_id) {
            throw DataError(fmt::format("duplicate doc_id {}", documents[i].doc_id));
        }
        if (documents[i].url.empty()) {
            throw DataError(fmt::format("document {} has an empty url", documents[i].doc_id));
        }
        index.ordinal_.emplace(documents[i].doc_id, i);
    }
    index.documents_ = std::move(documents);

    for (const auto& doc : index.documents_) {
        const auto title = tokenize(doc.title, index.tokenizer_);
        const auto body = tokenize(doc.body, index.tokenizer_);
        index.total_tokens_ += title.size() + body.size();
        auto add = [&](const std::string& token, std::uint32_t pos) {
            auto& list = index.postings_[token];
            if (list.empty() || list.back().doc_id != doc.doc_id) {
                list.push_back(Posting{doc.doc_id, {}});
            }
            list.back().positions.push_back(pos);
        };
        std::uint32_t pos = 0;
        for (const auto& token : title) {
            add(token, pos++);
        }
        pos = static_cast<std::uint32_t>(title.size()) + 1;
        for (const auto& token : body) {
            add(token, pos++);
        }
    }
    return index;
}

const std::vector<Posting>& CorpusIndex::postings(std::string_view token) const {
    const auto it = postings_.find(std::string(token));
    return it == postings_.end() ? kNoPostings : it->second;
}

const Document& CorpusIndex::document(std::uint64_t doc_id) const {
    return documents_[ordinal_.at(doc_id)];
}

bool CorpusIndex::contains_phrase(std::uint64_t doc_id, const std::vector<std::string>& tokens) const {
    std::vector<const std::vector<std::uint32_t>*> lists;
    for (const auto& token : tokens) {
        const auto& list = postings(token);
        const auto it = std::lower_bound(list.begin(), list.end(), doc_id,
                                         [](const Posting& p, std::uint64_t id) { return p.doc_id < id; });
        if (it == list.end() || it->doc_id != doc_id) {
            return false;
        }
        lists.push_back(&it->positions);
    }
    for (const auto start : *lists.front()) {
        bool ok = true;
        for (std::size_t i = 1; i < lists.size() && ok; ++i) {
            ok = std::binary_search(lists[i]->begin(), lists[i]->end(), start + static_cast<std::uint32_t>(i));
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

std::vector<std::uint64_t> CorpusIndex::matching_term(const std::vector<std::string>& tokens, bool phrase) const {
    std::vector<std::uint64_t> docs;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::vector<std::uint64_t> ids;
        for (const auto& p : postings(tokens[i])) {
            ids.push_back(p.doc_id);
        }
        docs = i == 0 ? std::move(ids) : intersect(docs, ids);
        if (docs.empty()) {
            return docs;
        }
    }
    if (phrase && tokens.size() > 1) {
        std::erase_if(docs, [&](std::uint64_t id) { return !contains_phrase(id, tokens); });
    }
    return docs;
}

std::vector<std::uint64_t> CorpusIndex::matching_documents(const Query& query) const {
    const auto terms = tokenize_query(query, tokenizer_);
    auto docs = matching_term(terms.front(), query.quoted);
    for (std::size_t i = 1; i < terms.size() && !docs.empty(); ++i) {
        docs = intersect(docs, matching_term(terms[i], query.quoted));
    }
    return docs;
}

QueryResult CorpusIndex::run_query(const Query& query, std::size_t cap) const {
    const auto docs = matching_documents(query);
    QueryResult result;
    result.hit_count = docs.size();
    const auto shown = std::min(docs.size(), cap);
    result.snippets.reserve(shown);
    for (std::size_t i = 0; i < shown; ++i) {
        result.snippets.push_back(make_snippet(document(docs[i]), query, tokenizer_));
    }
    return result;
}

Snippet make_snippet(const Document& doc, const Query& query, const TokenizerConfig& tokenizer) {
    Snippet snippet;
    snippet.url = doc.url;
    snippet.title = doc.title;
    snippet.source_doc_id = doc.doc_id;

    auto body = tokenize(doc.body, tokenizer);
    std::size_t anchor = 0;
    if (!query.terms.empty()) {
        const auto first = tokenize(query.terms.front(), tokenizer);
        if (!first.empty()) {
            const auto it = std::find(body.begin(), body.end(), first.front());
            if (it != body.end()) {
                anchor = static_cast<std::size_t>(it - body.begin());
            }
        }
    }
    const auto half = kSnippetWindow / 2;
    std::size_t start = anchor > half ? anchor - half : 0;
    if (body.size() > kSnippetWindow) {
        start = std::min(start, body.size() - kSnippetWindow);
    } else {
        start = 0;
    }
    const auto end = std::min(body.size(), start + kSnippetWindow);
    snippet.summary.assign(std::make_move_iterator(body.begin() + static_cast<std::ptrdiff_t>(start)),
                           std::make_move_iterator(body.begin() + static_cast<std::ptrdiff_t>(end)));
    return snippet;
}

void CorpusIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write index file: " + path);
    }
    out.write(kIndexMagic.data(), kIndexMagic.size());
    write_u64(out, tokenizer_.stopwords.size());
    for (const auto& word : tokenizer_.stopwords) {
        write_string(out, word);
    }
    write_u64(out, documents_.size());
    for (const auto& doc : documents_) {
        write_u64(out, doc.doc_id);
        write_string(out, doc.url);
        write_string(out, doc.title);
        write_string(out, doc.body);
    }
    if (!out) {
        throw DataError("failed writing index file: " + path);
    }
}

CorpusIndex CorpusIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open index file: " + path);
    }
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kIndexMagic) {
        throw DataError("not an index file: " + path);
    }
    TokenizerConfig tokenizer;
    for (auto n = read_u64(in, path); n > 0; --n) {
        tokenizer.stopwords.insert(read_string(in, path));
    }
    std::vector<Document> docs;
    for (auto n = read_u64(in, path); n > 0; --n) {
        Document doc;
        doc.doc_id = read_u64(in, path);
        doc.url = read_string(in, path);
        doc.title = read_string(in, path);
        doc.body = read_string(in, path);
        docs.push_back(std::move(doc));
    }
    return build(std::move(docs), std::move(tokenizer));
}

std::vector<Document> read_corpus_jsonl(std::istream& in) {
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const auto obj = nlohmann::json::parse(line);
            if (!obj.is_object()) {
                throw DataError("expected a JSON object");
            }
            if (!obj.contains("id") || !obj["id"].is_number_unsigned()) {
                throw DataError("field 'id' must be a non-negative integer");
            }
            if (!obj.contains("url") || !obj["url"].is_string()) {
                throw DataError("field 'url' must be a string");
            }
            Document doc;
            doc.doc_id = obj["id"].get<std::uint64_t>();
            doc.url = obj["url"].get<std::string>();
            doc.title = obj.value("title", std::string{});
            doc.body = obj.value("body", std::string{});
            docs.push_back(std::move(doc));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(fmt::format("corpus line {}: {}", line_no, e.what()));
        } catch (const DataError& e) {
            throw DataError(fmt::format("corpus line {}: {}", line_no, e.what()));
        }
    }
    return docs;
}

std::vector<Document> read_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open corpus file: " + path);
    }
    return read_corpus_jsonl(in);
}

}  // namespace sne
