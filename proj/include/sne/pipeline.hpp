#pragma once

/** \file pipeline.hpp
 *  \brief End-to-end extraction: gather evidence for every actor pair, score
 *  the twelve methods, and render reports.
 *
 * A run over k actors issues exactly 2k occurrence queries and 2*C(k,2)
 * co-occurrence queries (plain and pattern each). For every pair the
 * co-occurrence query goes first; occurrence results are memoized per actor
 * and strategy.
 */

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sne/graph.hpp"
#include "sne/relation_methods.hpp"
#include "sne/search_gateway.hpp"

namespace sne {

struct RunConfig {
    // Backend: exactly one of these is set.
    std::string index_path;
    std::string corpus_path;
    std::string replay_path;
    std::string live_config_path;

    std::string cache_path;  ///< optional persistent query cache
    std::string actors_path;
    std::vector<MethodId> methods{kAllMethods.begin(), kAllMethods.end()};
    SimilarityKind measure{SimilarityKind::jaccard};
    std::size_t cap{kDefaultSnippetCap};
    double threshold{0.0};
    std::string channel{"total"};
    std::string graph_path;
    std::string graph_format;  ///< empty: inferred from graph_path's extension
    std::string report_path;
    std::string stopwords_path;

    /// Throws ConfigError on an invalid combination or a missing input file.
    void validate(bool require_actors = true) const;

    /// Format from graph_format, else the graph_path extension, else graphml.
    GraphFormat resolved_graph_format() const;

    /// Input-side settings, echoed into the report.
    nlohmann::json echo() const;
};

TokenizerConfig tokenizer_for(const RunConfig& config);

/// Opens the backend selected by the config.
std::unique_ptr<SearchBackend> open_backend(const RunConfig& config, const TokenizerConfig& tokenizer);

/// Issues and memoizes the queries behind PairEvidence.
class EvidenceCollector {
public:
    /// `cache` may be null.
    EvidenceCollector(SearchBackend& backend, QueryCache* cache, std::size_t cap, TokenizerConfig tokenizer = {});

    PairEvidence gather(const Actor& a, const Actor& b);

private:
    QueryResult query(const Query& q);
    QueryResult occurrence(const Actor& actor, Strategy s);
    StrategyEvidence strategy_evidence(const Actor& a, const Actor& b, Strategy s);

    SearchBackend& backend_;
    QueryCache* cache_;
    std::size_t cap_;
    TokenizerConfig tokenizer_;
    std::map<std::pair<std::string, Strategy>, QueryResult> occurrences_;
    std::map<std::pair<std::string, Strategy>, std::string> failed_;
};

struct PairOutcome {
    Actor a;  ///< a.id < b.id
    Actor b;
    std::optional<PairEvidence> evidence;
    std::optional<MethodMatrix> matrix;
    std::string error;
    bool backend_failure{false};

    bool ok() const noexcept { return matrix.has_value(); }
};

struct ExtractionRun {
    std::vector<Actor> actors;  ///< sorted by id
    std::vector<PairOutcome> pairs;  ///< lexicographic by (a.id, b.id)
    DsmRunContext dsm_context;

    bool has_failures() const;
    bool has_backend_failures() const;
    std::map<PairKey, MethodMatrix> matrices() const;
};

/// Gathers all evidence first, then scores every pair against the shared cDSM
/// context. Per-pair backend or data errors are recorded in the outcome
/// rather than thrown. Throws ConfigError for fewer than 2 actors.
ExtractionRun run_extraction(std::vector<Actor> actors, EvidenceCollector& collector,
                             const SimilarityMeasure& measure);

/// `{"config": ..., "pairs": [...]}` with numbers rounded to 6 significant
/// digits.
nlohmann::json run_report(const ExtractionRun& run, const RunConfig& config);

/// One human-readable row: the twelve labeled values plus mu, eta, mu+eta.
std::string format_pair_row(const Actor& a, const Actor& b, const MethodMatrix& m);

}  // namespace sne
