#include "sne/relation_methods.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "sne/error.hpp"

namespace sne {

namespace {

constexpr std::array<std::string_view, kMethodCount> kMethodNames{
    "BSM", "bUSM", "cbUSM", "bDSM", "oDSM", "cDSM", "PSM", "pUSM", "cpUSM", "pbDSM", "poDSM", "pcDSM"};

bool iequals(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](unsigned char x, unsigned char y) {
        return std::tolower(x) == std::tolower(y);
    });
}

std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::size_t n = 0;
    for (const auto& w : a) {
        n += b.count(w);
    }
    return n;
}

}  // namespace

std::string_view to_string(SimilarityKind kind) {
    switch (kind) {
        case SimilarityKind::jaccard: return "jaccard";
        case SimilarityKind::dice: return "dice";
        case SimilarityKind::overlap: return "overlap";
        case SimilarityKind::cosine: return "cosine";
        case SimilarityKind::npmi: return "npmi";
    }
    return "?";
}

SimilarityKind parse_similarity_kind(std::string_view name) {
    for (auto kind : {SimilarityKind::jaccard, SimilarityKind::dice, SimilarityKind::overlap, SimilarityKind::cosine,
                      SimilarityKind::npmi}) {
        if (iequals(name, to_string(kind))) {
            return kind;
        }
    }
    throw ConfigError("unknown similarity measure '" + std::string(name) +
                      "' (expected jaccard, dice, overlap, cosine or npmi)");
}

std::string_view to_string(Strategy s) {
    return s == Strategy::plain ? "plain" : "pattern";
}

double count_similarity(const SimilarityMeasure& measure, std::uint64_t na, std::uint64_t nb, std::uint64_t nab) {
    if (measure.kind == SimilarityKind::npmi && !measure.corpus_size) {
        throw ConfigError("npmi needs the corpus size, which this backend does not report");
    }
    if (nab == 0) {
        return 0.0;
    }
    const auto a = static_cast<double>(na);
    const auto b = static_cast<double>(nb);
    const auto ab = static_cast<double>(nab);
    switch (measure.kind) {
        case SimilarityKind::jaccard: {
            const double denom = a + b - ab;
            return denom > 0.0 ? ab / denom : 0.0;
        }
        case SimilarityKind::dice: {
            const double denom = a + b;
            return denom > 0.0 ? 2.0 * ab / denom : 0.0;
        }
        case SimilarityKind::overlap: {
            const double denom = std::min(a, b);
            return denom > 0.0 ? ab / denom : 0.0;
        }
        case SimilarityKind::cosine: {
            const double denom = std::sqrt(a * b);
            return denom > 0.0 ? ab / denom : 0.0;
        }
        case SimilarityKind::npmi: {
            const auto n = static_cast<double>(*measure.corpus_size);
            if (na == 0 || nb == 0 || n <= 0.0) {
                return 0.0;
            }
            const double neg_log_joint = std::log(n) - std::log(ab);
            if (neg_log_joint <= 0.0) {
                return 0.0;
            }
            const double pmi = std::log(n) + std::log(ab) - std::log(a) - std::log(b);
            return std::clamp((pmi / neg_log_joint + 1.0) / 2.0, 0.0, 1.0);
        }
    }
    return 0.0;
}

std::vector<UrlLayers> snippet_urls(std::span<const Snippet> snippets) {
    std::vector<UrlLayers> out;
    out.reserve(snippets.size());
    for (const auto& s : snippets) {
        try {
            out.push_back(parse_url(s.url));
        } catch (const UrlParseError&) {
            // Relative links from live engines carry no layer information.
        }
    }
    return out;
}

StrategyEvidence StrategyEvidence::assemble(QueryResult occ_a, QueryResult occ_b, QueryResult cooc,
                                            const TokenizerConfig& tokenizer) {
    StrategyEvidence e;
    e.bow_a = bow_from_snippets(occ_a.snippets, tokenizer);
    e.bow_b = bow_from_snippets(occ_b.snippets, tokenizer);
    e.bow_c = bow_from_snippets(cooc.snippets, tokenizer);
    e.urls_a = snippet_urls(occ_a.snippets);
    e.urls_b = snippet_urls(occ_b.snippets);
    e.urls_c = snippet_urls(cooc.snippets);
    e.occ_a = std::move(occ_a);
    e.occ_b = std::move(occ_b);
    e.cooc = std::move(cooc);
    return e;
}

PairEvidence PairEvidence::swapped() const {
    PairEvidence out{b, a, plain, pattern};
    for (auto* e : {&out.plain, &out.pattern}) {
        std::swap(e->occ_a, e->occ_b);
        std::swap(e->bow_a, e->bow_b);
        std::swap(e->urls_a, e->urls_b);
    }
    return out;
}

std::string_view method_name(MethodId id) {
    return kMethodNames[static_cast<std::size_t>(id)];
}

std::optional<MethodId> parse_method(std::string_view name) {
    for (std::size_t i = 0; i < kMethodCount; ++i) {
        if (iequals(name, kMethodNames[i])) {
            return static_cast<MethodId>(i);
        }
    }
    return std::nullopt;
}

double cooccurrence_mass(const StrategyEvidence& e) {
    return static_cast<double>(bow_support(e.bow_c).size());
}

DsmRunContext DsmRunContext::from(std::span<const PairEvidence> run) {
    DsmRunContext ctx;
    ctx.pair_count_ = run.size();
    if (run.empty()) {
        return ctx;
    }
    for (const auto& e : run) {
        ctx.plain_mean_ += cooccurrence_mass(e.plain);
        ctx.pattern_mean_ += cooccurrence_mass(e.pattern);
    }
    ctx.plain_mean_ /= static_cast<double>(run.size());
    ctx.pattern_mean_ /= static_cast<double>(run.size());
    return ctx;
}

double DsmRunContext::mean_mass(Strategy s) const {
    if (pair_count_ == 0) {
        throw ConfigError("cDSM needs a run context with at least one pair");
    }
    return s == Strategy::plain ? plain_mean_ : pattern_mean_;
}

double bsm(const PairEvidence& e, const SimilarityMeasure& measure, Strategy s) {
    const auto& ev = e.at(s);
    const auto nab = ev.cooc.hit_count;
    if (nab == 0) {
        return 0.0;
    }
    if (ev.occ_a.hit_count < nab || ev.occ_b.hit_count < nab) {
        return 0.0;
    }
    return count_similarity(measure, ev.occ_a.hit_count, ev.occ_b.hit_count, nab);
}

double busm(const PairEvidence& e, Strategy s) {
    const auto& ev = e.at(s);
    return url_set_similarity(ev.urls_a, ev.urls_b).value;
}

double cbusm(const PairEvidence& e, Strategy s) {
    const auto& ev = e.at(s);
    if (ev.cooc.hit_count == 0 || ev.urls_c.empty()) {
        return 0.0;
    }
    const auto depth_sum = std::accumulate(ev.urls_c.begin(), ev.urls_c.end(), std::size_t{0},
                                           [](std::size_t acc, const UrlLayers& u) { return acc + u.depth(); });
    const double mean_depth = static_cast<double>(depth_sum) / static_cast<double>(ev.urls_c.size());
    return std::min(1.0, mean_depth / static_cast<double>(ev.cooc.hit_count));
}

double dsm(const PairEvidence& e, DsmVariant variant, Strategy s, const DsmRunContext& run) {
    const auto& ev = e.at(s);
    if (variant == DsmVariant::cooccurrence) {
        const double mean = run.mean_mass(s);
        const double x = cooccurrence_mass(ev);
        return x > 0.0 ? x / (x + mean) : 0.0;
    }

    const auto wa = bow_support(ev.bow_a);
    const auto wb = bow_support(ev.bow_b);
    const auto denom = static_cast<double>(wa.size() + wb.size());
    if (denom == 0.0) {
        return 0.0;
    }
    if (variant == DsmVariant::occurrence) {
        return 2.0 * static_cast<double>(intersection_size(wa, wb)) / denom;
    }
    std::size_t shared = 0;
    for (const auto& w : bow_support(ev.bow_c)) {
        shared += (wa.contains(w) || wb.contains(w)) ? 1 : 0;
    }
    return std::min(1.0, 2.0 * static_cast<double>(shared) / denom);
}

MethodMatrix MethodMatrix::integrate(const std::array<double, kMethodCount>& sr) {
    MethodMatrix m;
    m.sr = sr;
    constexpr std::size_t kRow = kMethodCount / 2;
    m.mu = std::accumulate(sr.begin(), sr.begin() + kRow, 0.0) / static_cast<double>(kRow);
    m.eta = std::accumulate(sr.begin() + kRow, sr.end(), 0.0) / static_cast<double>(kRow);
    m.total = m.mu + m.eta;
    return m;
}

MethodMatrix method_matrix(const PairEvidence& e, const SimilarityMeasure& measure, const DsmRunContext& run) {
    std::array<double, kMethodCount> sr{};
    auto fill_row = [&](Strategy s, std::size_t offset) {
        sr[offset + 0] = bsm(e, measure, s);
        sr[offset + 1] = busm(e, s);
        sr[offset + 2] = cbusm(e, s);
        sr[offset + 3] = dsm(e, DsmVariant::basic, s, run);
        sr[offset + 4] = dsm(e, DsmVariant::occurrence, s, run);
        sr[offset + 5] = dsm(e, DsmVariant::cooccurrence, s, run);
    };
    fill_row(Strategy::plain, 0);
    fill_row(Strategy::pattern, kMethodCount / 2);
    return MethodMatrix::integrate(sr);
}

}  // namespace sne
