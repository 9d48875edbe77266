#pragma once

#include <string>
#include <vector>

namespace sne {

/// A social actor: stable id, display name t_a, and its pattern form used by
/// the quoted-query strategy.
struct Actor {
    std::string id;
    std::string display_name;
    std::string pattern_name;  ///< includes the surrounding quotation marks

    /// Empty `pattern` defaults to the display name wrapped in double quotes.
    static Actor make(std::string id, std::string display_name, std::string pattern = {});

    /// The pattern form without surrounding quotation marks; this is the
    /// term issued with Query::quoted set.
    std::string pattern_term() const;

    bool operator==(const Actor&) const = default;
};

/// Tab-separated actors file: `id<TAB>display name[<TAB>pattern form]`.
/// Blank lines and lines starting with '#' are ignored. Throws DataError on
/// malformed lines or duplicate ids.
std::vector<Actor> read_actors(const std::string& path);

}  // namespace sne
