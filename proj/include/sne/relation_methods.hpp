#pragma once

/** \file relation_methods.hpp
 *  \brief Strength-relation measures between two actors.
 *
 * Twelve methods in two rows of six. The plain row works on unquoted
 * queries, the pattern row on quoted ones:
 *
 *   plain:   BSM  bUSM  cbUSM  bDSM  oDSM  cDSM   -> mu  (mean of the six)
 *   pattern: PSM  pUSM  cpUSM  pbDSM poDSM pcDSM  -> eta (mean of the six)
 *
 * Column by column: hit-count similarity guarded by the co-occurrence
 * consistency check; URL layer similarity of the occurrence snippets; URL
 * depth of co-occurrence snippets against the co-occurrence hit count; and
 * three bag-of-words overlaps. Every value lies in [0, 1].
 */

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sne/actor.hpp"
#include "sne/bow.hpp"
#include "sne/corpus_index.hpp"
#include "sne/url_layers.hpp"

namespace sne {

enum class SimilarityKind { jaccard, dice, overlap, cosine, npmi };

std::string_view to_string(SimilarityKind kind);
/// Throws ConfigError on an unknown name.
SimilarityKind parse_similarity_kind(std::string_view name);

struct SimilarityMeasure {
    SimilarityKind kind{SimilarityKind::jaccard};
    std::optional<std::uint64_t> corpus_size;  ///< |Omega|, required by npmi
};

/// sim(|a|, |b|, |a AND b|). Any zero denominator, or nab == 0, gives 0.
/// npmi is mapped to [0, 1] as (npmi + 1) / 2 and clamped. Assumes
/// nab <= min(na, nb); bsm() enforces that before calling.
double count_similarity(const SimilarityMeasure& measure, std::uint64_t na, std::uint64_t nb, std::uint64_t nab);

enum class Strategy { plain, pattern };

std::string_view to_string(Strategy s);

/// Query results for one strategy plus everything derived from their
/// snippets. URL lists skip snippet URLs that are not absolute.
struct StrategyEvidence {
    QueryResult occ_a;
    QueryResult occ_b;
    QueryResult cooc;
    BowVector bow_a;
    BowVector bow_b;
    BowVector bow_c;
    std::vector<UrlLayers> urls_a;
    std::vector<UrlLayers> urls_b;
    std::vector<UrlLayers> urls_c;

    static StrategyEvidence assemble(QueryResult occ_a, QueryResult occ_b, QueryResult cooc,
                                     const TokenizerConfig& tokenizer = {});
};

std::vector<UrlLayers> snippet_urls(std::span<const Snippet> snippets);

struct PairEvidence {
    Actor a;
    Actor b;
    StrategyEvidence plain;
    StrategyEvidence pattern;

    const StrategyEvidence& at(Strategy s) const noexcept { return s == Strategy::plain ? plain : pattern; }

    /// The same evidence seen from b's side.
    PairEvidence swapped() const;
};

enum class MethodId : std::size_t { bsm, busm, cbusm, bdsm, odsm, cdsm, psm, pusm, cpusm, pbdsm, podsm, pcdsm };

inline constexpr std::size_t kMethodCount = 12;

inline constexpr std::array<MethodId, kMethodCount> kAllMethods{
    MethodId::bsm, MethodId::busm,  MethodId::cbusm, MethodId::bdsm,  MethodId::odsm,  MethodId::cdsm,
    MethodId::psm, MethodId::pusm,  MethodId::cpusm, MethodId::pbdsm, MethodId::podsm, MethodId::pcdsm};

/// Canonical label, e.g. "cbUSM".
std::string_view method_name(MethodId id);
/// Case-insensitive inverse of method_name().
std::optional<MethodId> parse_method(std::string_view name);

enum class DsmVariant { occurrence, basic, cooccurrence };

/// Number of distinct words in the co-occurrence bag of words; the quantity
/// cDSM normalizes by its run mean.
double cooccurrence_mass(const StrategyEvidence& e);

/// Run-wide state needed by cDSM: the mean co-occurrence mass over every
/// evaluated pair, per strategy. Must be built after all evidence is in.
class DsmRunContext {
public:
    DsmRunContext() = default;
    static DsmRunContext from(std::span<const PairEvidence> run);

    std::size_t pair_count() const noexcept { return pair_count_; }
    /// Throws ConfigError when no pairs were recorded.
    double mean_mass(Strategy s) const;

private:
    std::size_t pair_count_{0};
    double plain_mean_{0.0};
    double pattern_mean_{0.0};
};

/// Guarded hit-count method (BSM; PSM with the pattern strategy). Zero when
/// there is no co-occurrence or the counts are inconsistent.
double bsm(const PairEvidence& e, const SimilarityMeasure& measure, Strategy s);

/// URL layer similarity of the two occurrence snippet lists (bUSM / pUSM).
double busm(const PairEvidence& e, Strategy s);

/// min(1, mean co-occurrence URL depth / co-occurrence hit count)
/// (cbUSM / cpUSM).
double cbusm(const PairEvidence& e, Strategy s);

/// Bag-of-words variants over the supports W_a, W_b, W_c:
///   occurrence   (oDSM): 2|W_a & W_b| / (|W_a| + |W_b|)
///   basic        (bDSM): min(1, 2|W_c & (W_a | W_b)| / (|W_a| + |W_b|))
///   cooccurrence (cDSM): x / (x + run mean of x), x = cooccurrence_mass
double dsm(const PairEvidence& e, DsmVariant variant, Strategy s, const DsmRunContext& run);

struct MethodMatrix {
    std::array<double, kMethodCount> sr{};
    double mu{0.0};
    double eta{0.0};
    double total{0.0};

    double operator[](MethodId id) const noexcept { return sr[static_cast<std::size_t>(id)]; }

    /// Fills mu, eta and total from sr.
    static MethodMatrix integrate(const std::array<double, kMethodCount>& sr);

    bool operator==(const MethodMatrix&) const = default;
};

MethodMatrix method_matrix(const PairEvidence& e, const SimilarityMeasure& measure, const DsmRunContext& run);

}  // namespace sne
