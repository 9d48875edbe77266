#include "sne/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "sne/error.hpp"

namespace sne {

using nlohmann::json;

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](unsigned char x, unsigned char y) {
        return std::tolower(x) == std::tolower(y);
    });
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? "\"\"" : std::string(1, c);
    }
    return out + "\"";
}

// RFC 4180 line splitting; embedded newlines inside quotes are not supported.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

std::string export_graphml(const SocialGraph& g) {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        "  <key id=\"name\" for=\"node\" attr.name=\"display_name\" attr.type=\"string\"/>\n"
        "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        "  <key id=\"channel\" for=\"edge\" attr.name=\"channel\" attr.type=\"string\"/>\n"
        "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (const auto& v : g.vertices) {
        out += fmt::format("    <node id=\"{}\"><data key=\"name\">{}</data></node>\n", xml_escape(v.id),
                           xml_escape(v.display_name));
    }
    for (const auto& e : g.edges) {
        out += fmt::format(
            "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{}</data>"
            "<data key=\"channel\">{}</data></edge>\n",
            xml_escape(e.source), xml_escape(e.target), format_weight(e.weight), xml_escape(e.channel));
    }
    out += "  </graph>\n</graphml>\n";
    return out;
}

std::string export_dot(const SocialGraph& g) {
    std::string out = "graph social_network {\n";
    for (const auto& v : g.vertices) {
        out += fmt::format("  {} [label={}];\n", dot_quote(v.id), dot_quote(v.display_name));
    }
    for (const auto& e : g.edges) {
        const auto w = format_weight(e.weight);
        out += fmt::format("  {} -- {} [weight={}, label=\"{}\"];\n", dot_quote(e.source), dot_quote(e.target), w, w);
    }
    out += "}\n";
    return out;
}

std::string export_csv(const SocialGraph& g) {
    std::string out = "source,target,weight,channel\n";
    for (const auto& e : g.edges) {
        out += fmt::format("{},{},{},{}\n", csv_field(e.source), csv_field(e.target), format_weight(e.weight),
                           csv_field(e.channel));
    }
    return out;
}

}  // namespace

PairKey make_pair_key(std::string a, std::string b) {
    if (b < a) {
        std::swap(a, b);
    }
    return {std::move(a), std::move(b)};
}

Channel Channel::parse(std::string_view name) {
    if (iequals(name, "mu")) return mu();
    if (iequals(name, "eta")) return eta();
    if (iequals(name, "total")) return total();
    if (auto id = parse_method(name)) return of(*id);
    throw ConfigError("unknown channel '" + std::string(name) + "' (expected a method id, mu, eta or total)");
}

std::string Channel::name() const {
    switch (kind_) {
        case Kind::method: return std::string(method_name(method_));
        case Kind::mu: return "mu";
        case Kind::eta: return "eta";
        case Kind::total: return "total";
    }
    return "?";
}

double Channel::select(const MethodMatrix& m) const {
    switch (kind_) {
        case Kind::method: return m[method_];
        case Kind::mu: return m.mu;
        case Kind::eta: return m.eta;
        case Kind::total: return m.total;
    }
    return 0.0;
}

SocialGraph build_graph(std::span<const Actor> actors, const std::map<PairKey, MethodMatrix>& matrices,
                        const Channel& channel, double threshold) {
    if (!(threshold >= 0.0)) {
        throw ConfigError(fmt::format("threshold must be >= 0, got {}", threshold));
    }
    SocialGraph g;
    std::set<std::string> ids;
    for (const auto& a : actors) {
        if (a.display_name.empty()) {
            throw DataError("actor '" + a.id + "' has an empty display name");
        }
        if (!ids.insert(a.id).second) {
            throw DataError("duplicate actor id '" + a.id + "'");
        }
        g.vertices.push_back(a);
    }
    std::sort(g.vertices.begin(), g.vertices.end(), [](const Actor& x, const Actor& y) { return x.id < y.id; });

    const auto name = channel.name();
    for (const auto& [key, matrix] : matrices) {
        const auto& [a, b] = key;
        if (a == b) {
            throw DataError("self pair '" + a + "' cannot carry a relation");
        }
        if (!ids.contains(a) || !ids.contains(b)) {
            throw DataError("matrix pair (" + a + ", " + b + ") names an unknown actor");
        }
        const double w = channel.select(matrix);
        if (w > threshold) {
            auto [s, t] = make_pair_key(a, b);
            g.edges.push_back(Edge{std::move(s), std::move(t), w, name});
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.source, x.target) < std::tie(y.source, y.target);
    });
    return g;
}

GraphFormat parse_graph_format(std::string_view name) {
    for (auto f : {GraphFormat::graphml, GraphFormat::dot, GraphFormat::csv_edges, GraphFormat::json}) {
        if (iequals(name, to_string(f))) {
            return f;
        }
    }
    if (iequals(name, "csv")) {
        return GraphFormat::csv_edges;
    }
    throw ConfigError("unsupported graph format '" + std::string(name) +
                      "' (supported: graphml, dot, csv-edges, json)");
}

std::string_view to_string(GraphFormat f) {
    switch (f) {
        case GraphFormat::graphml: return "graphml";
        case GraphFormat::dot: return "dot";
        case GraphFormat::csv_edges: return "csv-edges";
        case GraphFormat::json: return "json";
    }
    return "?";
}

std::string format_weight(double w) {
    return fmt::format("{:.6g}", w);
}

double round_weight(double w) {
    return std::strtod(format_weight(w).c_str(), nullptr);
}

json graph_to_json(const SocialGraph& g) {
    json vertices = json::array();
    for (const auto& v : g.vertices) {
        vertices.push_back({{"id", v.id}, {"display_name", v.display_name}, {"pattern_name", v.pattern_name}});
    }
    json edges = json::array();
    for (const auto& e : g.edges) {
        edges.push_back(
            {{"source", e.source}, {"target", e.target}, {"weight", round_weight(e.weight)}, {"channel", e.channel}});
    }
    return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

SocialGraph graph_from_json(const json& j) {
    SocialGraph g;
    try {
        for (const auto& v : j.at("vertices")) {
            g.vertices.push_back(Actor::make(v.at("id").get<std::string>(), v.at("display_name").get<std::string>(),
                                             v.value("pattern_name", std::string{})));
        }
        for (const auto& e : j.at("edges")) {
            auto [s, t] = make_pair_key(e.at("source").get<std::string>(), e.at("target").get<std::string>());
            g.edges.push_back(Edge{std::move(s), std::move(t), e.at("weight").get<double>(),
                                   e.value("channel", std::string{})});
        }
    } catch (const json::exception& ex) {
        throw DataError(std::string("malformed graph JSON: ") + ex.what());
    }
    return g;
}

std::string export_graph(const SocialGraph& g, GraphFormat format) {
    switch (format) {
        case GraphFormat::graphml: return export_graphml(g);
        case GraphFormat::dot: return export_dot(g);
        case GraphFormat::csv_edges: return export_csv(g);
        case GraphFormat::json: return graph_to_json(g).dump(2) + "\n";
    }
    throw ConfigError("unsupported graph format");
}

std::vector<Edge> read_csv_edges(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("edge CSV is empty; expected header 'source,target,weight,channel'");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "source" || header[1] != "target" || header[2] != "weight") {
        throw DataError("edge CSV header must be 'source,target,weight,channel'");
    }
    std::vector<Edge> edges;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() < 3) {
            throw DataError(fmt::format("edge CSV line {}: expected at least 3 fields", line_no));
        }
        char* end = nullptr;
        const double w = std::strtod(f[2].c_str(), &end);
        if (f[2].empty() || *end != '\0') {
            throw DataError(fmt::format("edge CSV line {}: bad weight '{}'", line_no, f[2]));
        }
        edges.push_back(Edge{f[0], f[1], w, f.size() > 3 ? f[3] : std::string{}});
    }
    return edges;
}

SocialGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open graph file: " + path);
    }
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        try {
            return graph_from_json(json::parse(in));
        } catch (const json::parse_error& e) {
            throw DataError(fmt::format("{}: {}", path, e.what()));
        }
    }
    SocialGraph g;
    std::set<std::string> ids;
    for (auto& e : read_csv_edges(in)) {
        auto [s, t] = make_pair_key(e.source, e.target);
        ids.insert(s);
        ids.insert(t);
        g.edges.push_back(Edge{std::move(s), std::move(t), e.weight, e.channel});
    }
    for (const auto& id : ids) {
        g.vertices.push_back(Actor::make(id, id));
    }
    return g;
}

GoldStandard read_gold_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("gold CSV is empty; expected header 'source,target'");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "source" || header[1] != "target") {
        throw DataError("gold CSV header must be 'source,target'");
    }
    GoldStandard gold;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() < 2 || f[0].empty() || f[1].empty()) {
            throw DataError(fmt::format("gold CSV line {}: expected 'source,target'", line_no));
        }
        if (f[0] == f[1]) {
            throw DataError(fmt::format("gold CSV line {}: self pair '{}'", line_no, f[0]));
        }
        gold.insert(make_pair_key(f[0], f[1]));
    }
    return gold;
}

GoldStandard read_gold_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open gold file: " + path);
    }
    return read_gold_csv(in);
}

EvaluationReport evaluate(const SocialGraph& g, const GoldStandard& gold, double threshold) {
    std::set<std::string> known;
    for (const auto& v : g.vertices) {
        known.insert(v.id);
    }
    std::set<std::string> unknown;
    for (const auto& [a, b] : gold) {
        if (!known.contains(a)) unknown.insert(a);
        if (!known.contains(b)) unknown.insert(b);
    }
    if (!unknown.empty()) {
        throw DataError(fmt::format("gold standard names unknown actors: {}", fmt::join(unknown, ", ")));
    }

    std::set<PairKey> extracted;
    for (const auto& e : g.edges) {
        if (e.weight > threshold) {
            extracted.insert(make_pair_key(e.source, e.target));
        }
    }
    EvaluationReport r;
    r.threshold = threshold;
    for (const auto& pair : extracted) {
        r.true_positives += gold.count(pair);
    }
    r.false_positives = extracted.size() - r.true_positives;
    r.false_negatives = gold.size() - r.true_positives;
    const auto tp = static_cast<double>(r.true_positives);
    r.precision = extracted.empty() ? 0.0 : tp / static_cast<double>(extracted.size());
    r.recall = gold.empty() ? 0.0 : tp / static_cast<double>(gold.size());
    const double sum = r.precision + r.recall;
    r.f_measure = sum > 0.0 ? 2.0 * r.precision * r.recall / sum : 0.0;
    return r;
}

}  // namespace sne
