#include "sne/tokenizer.hpp"

#include <fstream>

#include "sne/error.hpp"

namespace sne {

namespace {

bool is_word_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char lower(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !config.stopwords.contains(current)) {
            tokens.push_back(std::move(current));
        }
        current.clear();
    };
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            current.push_back(lower(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

TokenizerConfig load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open stopword file: " + path);
    }
    TokenizerConfig config;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        for (auto& token : tokenize(line)) {
            config.stopwords.insert(std::move(token));
        }
    }
    return config;
}

}  // namespace sne
