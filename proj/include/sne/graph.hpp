#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sne/actor.hpp"
#include "sne/relation_methods.hpp"

namespace sne {

/// Unordered actor pair stored as (smaller id, larger id).
using PairKey = std::pair<std::string, std::string>;

PairKey make_pair_key(std::string a, std::string b);

/// Which MethodMatrix value becomes the edge weight: one of the twelve
/// methods, or mu, eta, total.
class Channel {
public:
    enum class Kind { method, mu, eta, total };

    static Channel of(MethodId id) { return Channel(Kind::method, id); }
    static Channel mu() { return Channel(Kind::mu); }
    static Channel eta() { return Channel(Kind::eta); }
    static Channel total() { return Channel(Kind::total); }

    /// Case-insensitive; throws ConfigError on an unknown id.
    static Channel parse(std::string_view name);

    std::string name() const;
    double select(const MethodMatrix& m) const;

private:
    explicit Channel(Kind kind, MethodId id = MethodId::bsm) : kind_(kind), method_(id) {}

    Kind kind_;
    MethodId method_;
};

struct Edge {
    std::string source;
    std::string target;
    double weight{0.0};
    std::string channel;

    bool operator==(const Edge&) const = default;
};

/// Undirected weighted graph, one vertex per actor. Edges have
/// source < target and are sorted by (source, target).
struct SocialGraph {
    std::vector<Actor> vertices;
    std::vector<Edge> edges;
};

/// One edge per pair whose channel value exceeds `threshold`. Throws
/// ConfigError for a negative threshold and DataError for duplicate actor
/// ids, self pairs, or pairs naming unknown actors.
SocialGraph build_graph(std::span<const Actor> actors, const std::map<PairKey, MethodMatrix>& matrices,
                        const Channel& channel, double threshold = 0.0);

enum class GraphFormat { graphml, dot, csv_edges, json };

/// Throws ConfigError listing the supported formats.
GraphFormat parse_graph_format(std::string_view name);
std::string_view to_string(GraphFormat f);

/// Fixed rendering of weights: 6 significant digits.
std::string format_weight(double w);
/// w rounded to 6 significant digits.
double round_weight(double w);

std::string export_graph(const SocialGraph& g, GraphFormat format);

/// Parses csv-edges output (`source,target,weight,channel`).
std::vector<Edge> read_csv_edges(std::istream& in);

nlohmann::json graph_to_json(const SocialGraph& g);
SocialGraph graph_from_json(const nlohmann::json& j);

/// Loads a `.json` graph export, or a csv-edges file whose vertices are the
/// edge endpoints.
SocialGraph read_graph_file(const std::string& path);

using GoldStandard = std::set<PairKey>;

/// CSV with header `source,target`.
GoldStandard read_gold_csv(std::istream& in);
GoldStandard read_gold_csv(const std::string& path);

struct EvaluationReport {
    double precision{0.0};
    double recall{0.0};
    double f_measure{0.0};
    std::size_t true_positives{0};
    std::size_t false_positives{0};
    std::size_t false_negatives{0};
    double threshold{0.0};
};

/// Edges with weight above `threshold` are the extraction. Throws DataError
/// listing gold endpoints that are not graph vertices.
EvaluationReport evaluate(const SocialGraph& g, const GoldStandard& gold, double threshold = 0.0);

}  // namespace sne
