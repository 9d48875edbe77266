#include "sne/pipeline.hpp"

#include <algorithm>
#include <filesystem>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sne/error.hpp"

namespace sne {

using nlohmann::json;

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void require_file(const std::string& path, std::string_view what) {
    if (!path.empty() && !std::filesystem::exists(path)) {
        throw ConfigError(fmt::format("{} not found: {}", what, path));
    }
}

json evidence_counts(const StrategyEvidence& e) {
    return {{"occ_a", e.occ_a.hit_count},
            {"occ_b", e.occ_b.hit_count},
            {"cooc", e.cooc.hit_count},
            {"snippets", {{"a", e.occ_a.snippets.size()}, {"b", e.occ_b.snippets.size()}, {"c", e.cooc.snippets.size()}}}};
}

}  // namespace

void RunConfig::validate(bool require_actors) const {
    const int backends = !index_path.empty() + !corpus_path.empty() + !replay_path.empty() + !live_config_path.empty();
    if (backends != 1) {
        throw ConfigError("select exactly one backend: --index, --corpus, --replay or --live");
    }
    if (cap < 1) {
        throw ConfigError("snippet cap must be >= 1");
    }
    if (!(threshold >= 0.0)) {
        throw ConfigError("threshold must be >= 0");
    }
    if (require_actors && actors_path.empty()) {
        throw ConfigError("an actors file is required (--actors)");
    }
    require_file(index_path, "index file");
    require_file(corpus_path, "corpus file");
    require_file(replay_path, "replay file");
    require_file(live_config_path, "live adapter config");
    require_file(actors_path, "actors file");
    require_file(stopwords_path, "stopword file");
    Channel::parse(channel);
    resolved_graph_format();
}

GraphFormat RunConfig::resolved_graph_format() const {
    if (!graph_format.empty()) {
        return parse_graph_format(graph_format);
    }
    if (ends_with(graph_path, ".dot") || ends_with(graph_path, ".gv")) return GraphFormat::dot;
    if (ends_with(graph_path, ".csv")) return GraphFormat::csv_edges;
    if (ends_with(graph_path, ".json")) return GraphFormat::json;
    return GraphFormat::graphml;
}

json RunConfig::echo() const {
    json backend;
    if (!index_path.empty()) backend = {{"kind", "index"}, {"path", index_path}};
    if (!corpus_path.empty()) backend = {{"kind", "corpus"}, {"path", corpus_path}};
    if (!replay_path.empty()) backend = {{"kind", "replay"}, {"path", replay_path}};
    if (!live_config_path.empty()) backend = {{"kind", "live"}, {"path", live_config_path}};
    json method_names = json::array();
    for (auto id : methods) {
        method_names.push_back(std::string(method_name(id)));
    }
    return {{"backend", backend},
            {"actors", actors_path},
            {"methods", method_names},
            {"measure", std::string(to_string(measure))},
            {"cap", cap},
            {"threshold", threshold},
            {"channel", Channel::parse(channel).name()},
            {"graph_format", std::string(to_string(resolved_graph_format()))},
            {"stopwords", stopwords_path}};
}

TokenizerConfig tokenizer_for(const RunConfig& config) {
    return config.stopwords_path.empty() ? TokenizerConfig{} : load_stopwords(config.stopwords_path);
}

std::unique_ptr<SearchBackend> open_backend(const RunConfig& config, const TokenizerConfig& tokenizer) {
    if (!config.index_path.empty()) {
        auto index = std::make_shared<const CorpusIndex>(CorpusIndex::load(config.index_path));
        return std::make_unique<OfflineBackend>(std::move(index));
    }
    if (!config.corpus_path.empty()) {
        auto index = std::make_shared<const CorpusIndex>(
            CorpusIndex::build(read_corpus_jsonl(config.corpus_path), tokenizer));
        return std::make_unique<OfflineBackend>(std::move(index));
    }
    if (!config.replay_path.empty()) {
        return std::make_unique<ReplayBackend>(config.replay_path);
    }
    if (!config.live_config_path.empty()) {
        return std::make_unique<HttpJsonBackend>(HttpJsonConfig::load(config.live_config_path));
    }
    throw ConfigError("no backend selected");
}

EvidenceCollector::EvidenceCollector(SearchBackend& backend, QueryCache* cache, std::size_t cap,
                                     TokenizerConfig tokenizer)
    : backend_(backend), cache_(cache), cap_(cap), tokenizer_(std::move(tokenizer)) {}

QueryResult EvidenceCollector::query(const Query& q) {
    return cache_ ? search_cached(backend_, *cache_, q, cap_) : backend_.search(q, cap_);
}

QueryResult EvidenceCollector::occurrence(const Actor& actor, Strategy s) {
    const auto key = std::make_pair(actor.id, s);
    if (const auto it = occurrences_.find(key); it != occurrences_.end()) {
        return it->second;
    }
    if (const auto it = failed_.find(key); it != failed_.end()) {
        throw BackendError(it->second, "earlier failure not retried");
    }
    const auto q = s == Strategy::plain ? Query::occurrence(actor.display_name)
                                        : Query::occurrence(actor.pattern_term(), true);
    try {
        auto result = query(q);
        occurrences_.emplace(key, result);
        return result;
    } catch (const BackendError&) {
        failed_.emplace(key, q.text());
        throw;
    }
}

StrategyEvidence EvidenceCollector::strategy_evidence(const Actor& a, const Actor& b, Strategy s) {
    const auto cooc_query = s == Strategy::plain ? Query::cooccurrence(a.display_name, b.display_name)
                                                 : Query::cooccurrence(a.pattern_term(), b.pattern_term(), true);
    auto cooc = query(cooc_query);
    auto occ_a = occurrence(a, s);
    auto occ_b = occurrence(b, s);
    return StrategyEvidence::assemble(std::move(occ_a), std::move(occ_b), std::move(cooc), tokenizer_);
}

PairEvidence EvidenceCollector::gather(const Actor& a, const Actor& b) {
    PairEvidence e;
    e.a = a;
    e.b = b;
    e.plain = strategy_evidence(a, b, Strategy::plain);
    e.pattern = strategy_evidence(a, b, Strategy::pattern);
    return e;
}

bool ExtractionRun::has_failures() const {
    return std::any_of(pairs.begin(), pairs.end(), [](const PairOutcome& p) { return !p.ok(); });
}

bool ExtractionRun::has_backend_failures() const {
    return std::any_of(pairs.begin(), pairs.end(), [](const PairOutcome& p) { return p.backend_failure; });
}

std::map<PairKey, MethodMatrix> ExtractionRun::matrices() const {
    std::map<PairKey, MethodMatrix> out;
    for (const auto& p : pairs) {
        if (p.matrix) {
            out.emplace(make_pair_key(p.a.id, p.b.id), *p.matrix);
        }
    }
    return out;
}

ExtractionRun run_extraction(std::vector<Actor> actors, EvidenceCollector& collector,
                             const SimilarityMeasure& measure) {
    if (actors.size() < 2) {
        throw ConfigError(fmt::format("extraction needs at least 2 actors, got {}", actors.size()));
    }
    std::sort(actors.begin(), actors.end(), [](const Actor& x, const Actor& y) { return x.id < y.id; });
    for (std::size_t i = 1; i < actors.size(); ++i) {
        if (actors[i].id == actors[i - 1].id) {
            throw DataError("duplicate actor id '" + actors[i].id + "'");
        }
    }

    ExtractionRun run;
    run.actors = std::move(actors);
    for (std::size_t i = 0; i < run.actors.size(); ++i) {
        for (std::size_t j = i + 1; j < run.actors.size(); ++j) {
            PairOutcome outcome{run.actors[i], run.actors[j], std::nullopt, std::nullopt, {}, false};
            try {
                outcome.evidence = collector.gather(outcome.a, outcome.b);
            } catch (const BackendError& e) {
                outcome.error = e.what();
                outcome.backend_failure = true;
            } catch (const DataError& e) {
                outcome.error = e.what();
            }
            run.pairs.push_back(std::move(outcome));
        }
    }

    // cDSM barrier: every successful pair's evidence is known from here on.
    std::vector<PairEvidence> complete;
    for (const auto& p : run.pairs) {
        if (p.evidence) {
            complete.push_back(*p.evidence);
        }
    }
    run.dsm_context = DsmRunContext::from(complete);
    for (auto& p : run.pairs) {
        if (p.evidence) {
            p.matrix = method_matrix(*p.evidence, measure, run.dsm_context);
        }
    }
    return run;
}

json run_report(const ExtractionRun& run, const RunConfig& config) {
    json pairs = json::array();
    for (const auto& p : run.pairs) {
        json row = {{"a", p.a.id}, {"b", p.b.id}, {"a_name", p.a.display_name}, {"b_name", p.b.display_name}};
        if (!p.ok()) {
            row["error"] = p.error;
            pairs.push_back(std::move(row));
            continue;
        }
        json sr = json::object();
        for (auto id : config.methods) {
            sr[std::string(method_name(id))] = round_weight((*p.matrix)[id]);
        }
        row["sr"] = std::move(sr);
        row["mu"] = round_weight(p.matrix->mu);
        row["eta"] = round_weight(p.matrix->eta);
        row["total"] = round_weight(p.matrix->total);
        row["evidence"] = {{"plain", evidence_counts(p.evidence->plain)},
                           {"pattern", evidence_counts(p.evidence->pattern)}};
        pairs.push_back(std::move(row));
    }
    return {{"config", config.echo()}, {"pairs", std::move(pairs)}};
}

std::string format_pair_row(const Actor& a, const Actor& b, const MethodMatrix& m) {
    std::string out = fmt::format("{} - {}\n", a.display_name, b.display_name);
    auto row = [&](std::string_view label, std::size_t offset, double mean, std::string_view mean_label) {
        out += fmt::format("  {:<29}", label);
        for (std::size_t k = 0; k < kMethodCount / 2; ++k) {
            const auto id = kAllMethods[offset + k];
            out += fmt::format(" {}={}", method_name(id), format_weight(m[id]));
        }
        out += fmt::format(" {}={}\n", mean_label, format_weight(mean));
    };
    row("Generate and Reveal:", 0, m.mu, "mu");
    row("Enrichment and Confirmation:", kMethodCount / 2, m.eta, "eta");
    out += fmt::format("  mu+eta={}\n", format_weight(m.total));
    return out;
}

}  // namespace sne
