#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sne {

/// Lowercases ASCII, splits on runs of non-alphanumeric characters and drops
/// empty tokens. Bytes >= 0x80 are treated as word characters so UTF-8 names
/// survive intact (without case folding).
struct TokenizerConfig {
    std::set<std::string> stopwords;  ///< matched after lowercasing; empty by default

    bool operator==(const TokenizerConfig&) const = default;
};

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

/// Reads one stopword per line; blank lines and '#' comments are skipped.
TokenizerConfig load_stopwords(const std::string& path);

}  // namespace sne
