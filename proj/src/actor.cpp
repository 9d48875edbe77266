#include "sne/actor.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "sne/error.hpp"

namespace sne {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Actor Actor::make(std::string id, std::string display_name, std::string pattern) {
    if (display_name.empty()) {
        throw DataError("actor '" + id + "' has an empty display name");
    }
    if (pattern.empty()) {
        pattern = "\"" + display_name + "\"";
    }
    return Actor{std::move(id), std::move(display_name), std::move(pattern)};
}

std::string Actor::pattern_term() const {
    auto term = pattern_name;
    if (term.size() >= 2 && term.front() == '"' && term.back() == '"') {
        term = term.substr(1, term.size() - 2);
    }
    return term;
}

std::vector<Actor> read_actors(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open actors file: " + path);
    }
    std::vector<Actor> actors;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty() || line.front() == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (auto tab = line.find('\t'); ; tab = line.find('\t', start)) {
            fields.push_back(trim(line.substr(start, tab - start)));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty()) {
            throw DataError(fmt::format("{}: line {}: expected 'id<TAB>display name[<TAB>pattern]'", path, line_no));
        }
        if (!seen.insert(fields[0]).second) {
            throw DataError(fmt::format("{}: line {}: duplicate actor id '{}'", path, line_no, fields[0]));
        }
        actors.push_back(Actor::make(fields[0], fields[1], fields.size() == 3 ? fields[2] : std::string{}));
    }
    return actors;
}

}  // namespace sne
