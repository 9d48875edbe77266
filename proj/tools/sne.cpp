// Command-line driver: build-index, extract, pair, evaluate.
//
// Exit codes: 0 success, 1 usage/config, 2 data error, 3 backend error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "sne/corpus_index.hpp"
#include "sne/error.hpp"
#include "sne/graph.hpp"
#include "sne/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Reads `key = value` lines ('#' comments, [sections] ignored) and turns them
// into `--key value` arguments.
std::vector<std::string> config_file_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw sne::ConfigError("cannot open config file: " + path);
    }
    std::vector<std::string> args;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#' || line.front() == '[') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw sne::ConfigError(fmt::format("{}: line {}: expected key = value", path, line_no));
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        std::replace(key.begin(), key.end(), '_', '-');
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

// Config-file arguments are spliced in right after the subcommand so that
// explicit flags, which come later, win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config_path.empty() || args.size() < 2) {
        return args;
    }
    auto extra = config_file_args(config_path);
    args.insert(args.begin() + 2, extra.begin(), extra.end());
    return args;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << contents)) {
        throw sne::DataError("cannot write " + path);
    }
}

void add_backend_options(CLI::App* cmd, sne::RunConfig& cfg, std::string& measure) {
    cmd->add_option("--index", cfg.index_path, "Persisted index (from build-index)");
    cmd->add_option("--corpus", cfg.corpus_path, "JSON-lines corpus, indexed in memory");
    cmd->add_option("--replay", cfg.replay_path, "Recorded responses in cache-file format");
    cmd->add_option("--live", cfg.live_config_path, "HTTP-JSON live adapter config (JSON)");
    cmd->add_option("--cache", cfg.cache_path, "Persistent query cache (JSON lines)");
    cmd->add_option("--measure", measure, "Count measure: jaccard, dice, overlap, cosine, npmi")
        ->check([](const std::string& name) {
            try {
                sne::parse_similarity_kind(name);
                return std::string{};
            } catch (const sne::ConfigError& e) {
                return std::string(e.what());
            }
        });
    cmd->add_option("--cap", cfg.cap, "Snippets retrieved per query")->check(CLI::PositiveNumber);
    cmd->add_option("--stopwords", cfg.stopwords_path, "Stopword list, one per line");
}

sne::SimilarityMeasure measure_for(const sne::RunConfig& cfg, const sne::SearchBackend& backend) {
    sne::SimilarityMeasure m{cfg.measure, backend.corpus_size()};
    if (m.kind == sne::SimilarityKind::npmi && !m.corpus_size) {
        throw sne::ConfigError("npmi needs a backend that reports the corpus size");
    }
    return m;
}

int cmd_build_index(const std::string& corpus, const std::string& out, const std::string& stopwords) {
    const auto tokenizer = stopwords.empty() ? sne::TokenizerConfig{} : sne::load_stopwords(stopwords);
    const auto index = sne::CorpusIndex::build(sne::read_corpus_jsonl(corpus), tokenizer);
    index.save(out);
    fmt::print("documents: {}\ntokens: {}\nvocabulary: {}\n", index.corpus_size(), index.total_tokens(),
               index.vocabulary_size());
    return 0;
}

int cmd_extract(const sne::RunConfig& cfg) {
    cfg.validate();
    const auto tokenizer = sne::tokenizer_for(cfg);
    auto backend = sne::open_backend(cfg, tokenizer);
    const auto measure = measure_for(cfg, *backend);
    std::unique_ptr<sne::QueryCache> cache;
    if (!cfg.cache_path.empty()) {
        cache = std::make_unique<sne::QueryCache>(cfg.cache_path);
    }
    sne::EvidenceCollector collector(*backend, cache.get(), cfg.cap, tokenizer);
    const auto run = sne::run_extraction(sne::read_actors(cfg.actors_path), collector, measure);

    const auto report = sne::run_report(run, cfg).dump(2) + "\n";
    if (cfg.report_path.empty()) {
        std::cout << report;
    } else {
        write_file(cfg.report_path, report);
    }
    const auto graph =
        sne::build_graph(run.actors, run.matrices(), sne::Channel::parse(cfg.channel), cfg.threshold);
    if (!cfg.graph_path.empty()) {
        write_file(cfg.graph_path, sne::export_graph(graph, cfg.resolved_graph_format()));
    }
    std::size_t failed = 0;
    for (const auto& p : run.pairs) {
        if (!p.ok()) {
            ++failed;
            fmt::print(std::cerr, "pair {} - {} failed: {}\n", p.a.id, p.b.id, p.error);
        }
    }
    fmt::print(std::cerr, "pairs: {} ({} failed), edges: {}\n", run.pairs.size(), failed, graph.edges.size());
    if (run.has_backend_failures()) return kExitBackend;
    if (run.has_failures()) return kExitData;
    return 0;
}

sne::Actor find_actor(const std::vector<sne::Actor>& actors, const std::string& key) {
    for (const auto& a : actors) {
        if (a.id == key) return a;
    }
    throw sne::DataError("unknown actor id '" + key + "'");
}

int cmd_pair(const sne::RunConfig& cfg, const std::string& first, const std::string& second) {
    cfg.validate(false);
    sne::Actor a = sne::Actor::make(first, first);
    sne::Actor b = sne::Actor::make(second, second);
    if (!cfg.actors_path.empty()) {
        const auto actors = sne::read_actors(cfg.actors_path);
        a = find_actor(actors, first);
        b = find_actor(actors, second);
    }
    const auto tokenizer = sne::tokenizer_for(cfg);
    auto backend = sne::open_backend(cfg, tokenizer);
    const auto measure = measure_for(cfg, *backend);
    std::unique_ptr<sne::QueryCache> cache;
    if (!cfg.cache_path.empty()) {
        cache = std::make_unique<sne::QueryCache>(cfg.cache_path);
    }
    sne::EvidenceCollector collector(*backend, cache.get(), cfg.cap, tokenizer);
    const auto run = sne::run_extraction({a, b}, collector, measure);
    const auto& outcome = run.pairs.front();
    if (!outcome.ok()) {
        fmt::print(std::cerr, "pair failed: {}\n", outcome.error);
        return outcome.backend_failure ? kExitBackend : kExitData;
    }
    std::cout << sne::format_pair_row(outcome.a, outcome.b, *outcome.matrix);
    return 0;
}

int cmd_evaluate(const std::string& graph_path, const std::string& gold_path, const std::string& actors_path,
                 double threshold, const std::vector<double>& sweep) {
    auto graph = sne::read_graph_file(graph_path);
    if (!actors_path.empty()) {
        std::set<std::string> have;
        for (const auto& v : graph.vertices) have.insert(v.id);
        for (auto& a : sne::read_actors(actors_path)) {
            if (!have.contains(a.id)) graph.vertices.push_back(std::move(a));
        }
    }
    const auto gold = sne::read_gold_csv(gold_path);
    if (gold.empty()) {
        fmt::print(std::cerr, "warning: gold standard is empty; recall is reported as 0\n");
    }
    const auto thresholds = sweep.empty() ? std::vector<double>{threshold} : sweep;
    fmt::print("threshold,precision,recall,f_measure,tp,fp,fn\n");
    for (const double t : thresholds) {
        if (!(t >= 0.0)) {
            throw sne::ConfigError("thresholds must be >= 0");
        }
        const auto r = sne::evaluate(graph, gold, t);
        fmt::print("{},{},{},{},{},{},{}\n", sne::format_weight(t), sne::format_weight(r.precision),
                   sne::format_weight(r.recall), sne::format_weight(r.f_measure), r.true_positives, r.false_positives,
                   r.false_negatives);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social network extraction from search-engine evidence"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_help_flag("-h,--help", "Print help");
    app.footer("Every subcommand also accepts --config FILE with key = value lines; explicit flags win.");

    std::string corpus, index_out, stopwords;
    auto* build = app.add_subcommand("build-index", "Index a JSON-lines corpus");
    build->add_option("--corpus", corpus, "JSON-lines corpus")->required();
    build->add_option("--out", index_out, "Index output path")->required();
    build->add_option("--stopwords", stopwords, "Stopword list, one per line");

    sne::RunConfig extract_cfg;
    auto* extract = app.add_subcommand("extract", "Score every actor pair and export the social graph");
    std::string extract_measure = "jaccard";
    add_backend_options(extract, extract_cfg, extract_measure);
    extract->add_option("--actors", extract_cfg.actors_path, "Actors file: id<TAB>name[<TAB>pattern]")->required();
    std::vector<std::string> methods;
    extract->add_option("--methods", methods, "Methods in the report: 'all' or a comma list")->delimiter(',');
    extract->add_option("--threshold", extract_cfg.threshold, "Edge threshold (edges need weight > threshold)");
    extract->add_option("--channel", extract_cfg.channel, "Edge weight: a method id, mu, eta or total");
    extract->add_option("--graph", extract_cfg.graph_path, "Graph output path");
    extract->add_option("--graph-format", extract_cfg.graph_format, "graphml, dot, csv-edges or json");
    extract->add_option("--report", extract_cfg.report_path, "JSON report path (stdout when omitted)");

    sne::RunConfig pair_cfg;
    std::string first, second;
    auto* pair = app.add_subcommand("pair", "Print the method row for one pair");
    std::string pair_measure = "jaccard";
    add_backend_options(pair, pair_cfg, pair_measure);
    pair->add_option("--actors", pair_cfg.actors_path, "Actors file; positional arguments are then ids");
    pair->add_option("a", first, "First actor")->required();
    pair->add_option("b", second, "Second actor")->required();

    std::string graph_path, gold_path, eval_actors;
    double threshold = 0.0;
    std::vector<double> sweep;
    auto* eval = app.add_subcommand("evaluate", "Precision, recall and F-measure against a gold standard");
    eval->add_option("--graph", graph_path, "Graph as csv-edges or json export")->required();
    eval->add_option("--gold", gold_path, "Gold CSV with header source,target")->required();
    eval->add_option("--actors", eval_actors, "Actors file adding vertices absent from the graph");
    eval->add_option("--threshold", threshold, "Threshold for the single evaluation row");
    eval->add_option("--sweep", sweep, "Comma-separated thresholds, one row each")->delimiter(',');

    try {
        const auto args = expand_config(argc, argv);
        std::vector<const char*> raw;
        for (const auto& a : args) raw.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(raw.size()), raw.data());
        } catch (const CLI::ParseError& e) {
            return app.exit(e) == 0 ? 0 : kExitUsage;
        }

        extract_cfg.measure = sne::parse_similarity_kind(extract_measure);
        pair_cfg.measure = sne::parse_similarity_kind(pair_measure);
        if (!methods.empty() && !(methods.size() == 1 && methods.front() == "all")) {
            extract_cfg.methods.clear();
            for (const auto& m : methods) {
                const auto id = sne::parse_method(m);
                if (!id) throw sne::ConfigError("unknown method '" + m + "'");
                extract_cfg.methods.push_back(*id);
            }
        }

        if (build->parsed()) return cmd_build_index(corpus, index_out, stopwords);
        if (extract->parsed()) return cmd_extract(extract_cfg);
        if (pair->parsed()) return cmd_pair(pair_cfg, first, second);
        if (eval->parsed()) return cmd_evaluate(graph_path, gold_path, eval_actors, threshold, sweep);
    } catch (const sne::ConfigError& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const sne::BackendError& e) {
        fmt::print(std::cerr, "backend error: {}\n", e.what());
        return kExitBackend;
    } catch (const sne::Error& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kExitData;
    }
    return kExitUsage;
}
