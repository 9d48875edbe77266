#include <random>

#include <gtest/gtest.h>

#include "sne/error.hpp"
#include "sne/relation_methods.hpp"
#include "test_support.hpp"

using namespace sne;

namespace {

const SimilarityMeasure kJaccard{};

PairEvidence counts_only(std::uint64_t na, std::uint64_t nb, std::uint64_t nab) {
    PairEvidence e;
    e.a = Actor::make("a", "Mahyuddin K. M. Nasution");
    e.b = Actor::make("b", "MarischaElveny");
    e.plain = StrategyEvidence::assemble(test::hits_only(na), test::hits_only(nb), test::hits_only(nab));
    e.pattern = e.plain;
    return e;
}

QueryResult with_snippets(std::uint64_t hits, std::vector<Snippet> snippets) {
    return QueryResult{hits, std::move(snippets)};
}

PairEvidence text_evidence(const std::string& a_text, const std::string& b_text, const std::string& c_text) {
    PairEvidence e;
    e.a = Actor::make("a", "A");
    e.b = Actor::make("b", "B");
    e.plain = StrategyEvidence::assemble(with_snippets(5, {test::snippet("https://a.example/", "", a_text)}),
                                         with_snippets(5, {test::snippet("https://b.example/", "", b_text)}),
                                         with_snippets(2, {test::snippet("https://c.example/", "", c_text)}));
    e.pattern = e.plain;
    return e;
}

}  // namespace

TEST(CountSimilarity, WorkedJaccardValues) {
    EXPECT_NEAR(count_similarity(kJaccard, 121000, 2130000, 1410), 0.000627, 5e-6);
    EXPECT_NEAR(count_similarity(kJaccard, 6740, 2470, 774), 0.09175, 5e-5);
}

TEST(CountSimilarity, OtherMeasuresOnWorkedCounts) {
    EXPECT_NEAR(count_similarity({SimilarityKind::dice}, 121000, 2130000, 1410), 0.0012528, 5e-8);
    EXPECT_NEAR(count_similarity({SimilarityKind::overlap}, 121000, 2130000, 1410), 0.0116529, 5e-8);
    EXPECT_NEAR(count_similarity({SimilarityKind::cosine}, 121000, 2130000, 1410), 0.0027774, 5e-8);
}

TEST(CountSimilarity, Npmi) {
    const SimilarityMeasure npmi{SimilarityKind::npmi, 1000};
    EXPECT_NEAR(count_similarity(npmi, 100, 50, 20), 0.6771838, 1e-7);
    EXPECT_EQ(count_similarity(npmi, 100, 50, 0), 0.0);
    // Co-occurring everywhere: -log(nab/N) = 0.
    EXPECT_EQ(count_similarity(npmi, 1000, 1000, 1000), 0.0);
    // Perfectly exclusive pair maps to the top of the range.
    EXPECT_NEAR(count_similarity(npmi, 10, 10, 10), 1.0, 1e-12);
    EXPECT_THROW(count_similarity({SimilarityKind::npmi}, 1, 1, 1), ConfigError);
}

TEST(CountSimilarity, ZeroDenominatorsGiveZero) {
    for (auto kind : {SimilarityKind::jaccard, SimilarityKind::dice, SimilarityKind::overlap, SimilarityKind::cosine}) {
        EXPECT_EQ(count_similarity({kind}, 0, 0, 0), 0.0);
        EXPECT_EQ(count_similarity({kind}, 10, 0, 0), 0.0);
        EXPECT_EQ(count_similarity({kind}, 10, 7, 0), 0.0);
    }
}

TEST(CountSimilarity, JaccardStrictlyIncreasingInOverlap) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t na = 1 + rng() % 500;
        const std::uint64_t nb = 1 + rng() % 500;
        double prev = 0.0;
        for (std::uint64_t nab = 1; nab <= std::min(na, nb); ++nab) {
            const double v = count_similarity(kJaccard, na, nb, nab);
            ASSERT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(CountSimilarity, ParseKind) {
    EXPECT_EQ(parse_similarity_kind("Cosine"), SimilarityKind::cosine);
    EXPECT_THROW(parse_similarity_kind("euclid"), ConfigError);
}

TEST(Bsm, WorkedCounts) {
    EXPECT_NEAR(bsm(counts_only(121000, 2130000, 1410), kJaccard, Strategy::plain), 0.000627, 5e-6);
    EXPECT_NEAR(bsm(counts_only(6740, 2470, 774), kJaccard, Strategy::pattern), 0.09175, 5e-5);
}

TEST(Bsm, GuardBranches) {
    EXPECT_EQ(bsm(counts_only(100, 100, 0), kJaccard, Strategy::plain), 0.0);
    EXPECT_EQ(bsm(counts_only(5, 100, 9), kJaccard, Strategy::plain), 0.0);
    EXPECT_EQ(bsm(counts_only(100, 5, 9), {SimilarityKind::overlap}, Strategy::plain), 0.0);
    EXPECT_EQ(bsm(counts_only(9, 9, 9), kJaccard, Strategy::plain), 1.0);
}

TEST(Busm, UrlLists) {
    auto e = counts_only(1, 1, 1);
    EXPECT_EQ(busm(e, Strategy::plain), 0.0);

    e.plain = StrategyEvidence::assemble(
        with_snippets(1, {test::snippet("https://publons.com/researcher/2908750/mahyuddin-k-m-nasution/", "", "")}),
        with_snippets(1, {test::snippet("https://publons.com/researcher/1730428/marischa-elveny/", "", "")}),
        test::hits_only(0));
    EXPECT_EQ(busm(e, Strategy::plain), 0.5);
    EXPECT_EQ(busm(e, Strategy::pattern), 0.0);
}

TEST(Busm, IgnoresRelativeSnippetUrls) {
    const std::vector<Snippet> snippets{test::snippet("/relative/path", "", ""), test::snippet("https://x.y/z", "", "")};
    const auto urls = snippet_urls(snippets);
    ASSERT_EQ(urls.size(), 1u);
    EXPECT_EQ(urls[0].depth(), 2u);
}

TEST(Cbusm, RatioOfMeanDepthToHits) {
    const std::vector<Snippet> depth4{test::snippet("https://publons.com/researcher/1/x", "", "")};
    auto e = counts_only(1, 1, 0);
    e.plain.cooc = test::hits_only(0);
    EXPECT_EQ(cbusm(e, Strategy::plain), 0.0);

    e.plain = StrategyEvidence::assemble(test::hits_only(10), test::hits_only(10), with_snippets(4, depth4));
    EXPECT_EQ(cbusm(e, Strategy::plain), 1.0);

    e.plain = StrategyEvidence::assemble(test::hits_only(10), test::hits_only(10), with_snippets(1410, depth4));
    EXPECT_NEAR(cbusm(e, Strategy::plain), 0.0028369, 5e-8);

    // Depth 2 and 4 average to 3; clamped at 1 when hits < mean depth.
    const std::vector<Snippet> mixed{test::snippet("https://a.b/c", "", ""), test::snippet("https://a.b/c/d/e", "", "")};
    e.plain = StrategyEvidence::assemble(test::hits_only(10), test::hits_only(10), with_snippets(2, mixed));
    EXPECT_EQ(cbusm(e, Strategy::plain), 1.0);
    e.plain = StrategyEvidence::assemble(test::hits_only(10), test::hits_only(10), with_snippets(6, mixed));
    EXPECT_EQ(cbusm(e, Strategy::plain), 0.5);
}

TEST(Dsm, OccurrenceVariant) {
    const auto ctx = DsmRunContext::from(std::vector<PairEvidence>{text_evidence("x", "y", "z")});
    EXPECT_EQ(dsm(text_evidence("a b c", "c b a", ""), DsmVariant::occurrence, Strategy::plain, ctx), 1.0);
    EXPECT_EQ(dsm(text_evidence("a b", "c d", ""), DsmVariant::occurrence, Strategy::plain, ctx), 0.0);
    EXPECT_DOUBLE_EQ(dsm(text_evidence("a b c", "c d", ""), DsmVariant::occurrence, Strategy::plain, ctx), 0.4);
    EXPECT_EQ(dsm(text_evidence("", "", ""), DsmVariant::occurrence, Strategy::plain, ctx), 0.0);
}

TEST(Dsm, BasicVariantRestrictsCooccurrenceWords) {
    const auto ctx = DsmRunContext::from(std::vector<PairEvidence>{text_evidence("x", "y", "z")});
    // W_a = {a, b}, W_b = {c}; W_c within W_a | W_b = {a, c}; noise word "ads" ignored.
    // 2 * 2 / 3 clamps to 1.
    EXPECT_EQ(dsm(text_evidence("a b", "c", "a c ads"), DsmVariant::basic, Strategy::plain, ctx), 1.0);
    EXPECT_DOUBLE_EQ(dsm(text_evidence("a b", "c d", "a c ads"), DsmVariant::basic, Strategy::plain, ctx), 1.0);
    EXPECT_DOUBLE_EQ(dsm(text_evidence("a b e", "c d", "a ads"), DsmVariant::basic, Strategy::plain, ctx), 0.4);
    EXPECT_DOUBLE_EQ(dsm(text_evidence("a b", "c d", "a"), DsmVariant::basic, Strategy::plain, ctx), 0.5);
    EXPECT_EQ(dsm(text_evidence("a", "b", "zzz"), DsmVariant::basic, Strategy::plain, ctx), 0.0);
}

TEST(Dsm, CooccurrenceVariantMatchesRecomputation) {
    const std::vector<PairEvidence> run{text_evidence("a", "b", "w1 w2 w3 w4"), text_evidence("a", "b", "w1 w2"),
                                        text_evidence("a", "b", "")};
    const auto ctx = DsmRunContext::from(run);
    // Recompute by hand: distinct co-occurrence words per pair.
    std::vector<double> x;
    for (const auto* text : {"w1 w2 w3 w4", "w1 w2", ""}) {
        const auto words = test::naive_words(text);
        x.push_back(static_cast<double>(std::set<std::string>(words.begin(), words.end()).size()));
    }
    const double mean = (x[0] + x[1] + x[2]) / 3.0;
    EXPECT_DOUBLE_EQ(mean, 2.0);
    for (std::size_t i = 0; i < run.size(); ++i) {
        const double expected = x[i] > 0 ? x[i] / (x[i] + mean) : 0.0;
        EXPECT_DOUBLE_EQ(dsm(run[i], DsmVariant::cooccurrence, Strategy::plain, ctx), expected) << i;
    }
    EXPECT_DOUBLE_EQ(dsm(run[0], DsmVariant::cooccurrence, Strategy::plain, ctx), 4.0 / 6.0);
}

TEST(Dsm, CooccurrenceVariantNeedsRunContext) {
    EXPECT_THROW(dsm(text_evidence("a", "b", "c"), DsmVariant::cooccurrence, Strategy::plain, DsmRunContext{}),
                 ConfigError);
    EXPECT_NO_THROW(dsm(text_evidence("a", "b", "c"), DsmVariant::occurrence, Strategy::plain, DsmRunContext{}));
}

TEST(MethodMatrix, IntegrationMeans) {
    EXPECT_EQ(MethodMatrix::integrate({}).total, 0.0);
    std::array<double, kMethodCount> ones;
    ones.fill(1.0);
    const auto all = MethodMatrix::integrate(ones);
    EXPECT_EQ(all.mu, 1.0);
    EXPECT_EQ(all.eta, 1.0);
    EXPECT_EQ(all.total, 2.0);

    const auto m = MethodMatrix::integrate({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0, 0, 0, 0, 0, 0});
    EXPECT_NEAR(m.mu, 0.35, 1e-15);
    EXPECT_EQ(m.eta, 0.0);
    EXPECT_NEAR(m.total, 0.35, 1e-15);
}

TEST(MethodMatrix, ColumnOrderFollowsTheMethodTable) {
    std::array<double, kMethodCount> sr{};
    for (std::size_t i = 0; i < kMethodCount; ++i) sr[i] = static_cast<double>(i) / 100.0;
    const auto m = MethodMatrix::integrate(sr);
    EXPECT_EQ(m[MethodId::bsm], 0.00);
    EXPECT_EQ(m[MethodId::cdsm], 0.05);
    EXPECT_EQ(m[MethodId::psm], 0.06);
    EXPECT_EQ(m[MethodId::pcdsm], 0.11);
    EXPECT_EQ(method_name(MethodId::pbdsm), "pbDSM");
    EXPECT_EQ(parse_method("CPUSM"), MethodId::cpusm);
    EXPECT_FALSE(parse_method("xDSM").has_value());
}

TEST(MethodMatrix, ZeroCooccurrenceZeroesCooccurrenceMethods) {
    PairEvidence e = text_evidence("a b", "b c", "");
    e.plain.cooc = test::hits_only(0);
    e.pattern = e.plain;
    const auto ctx = DsmRunContext::from(std::vector<PairEvidence>{e, text_evidence("a", "b", "q")});
    const auto m = method_matrix(e, kJaccard, ctx);
    for (auto id : {MethodId::bsm, MethodId::cbusm, MethodId::cdsm, MethodId::bdsm, MethodId::psm, MethodId::cpusm,
                    MethodId::pcdsm, MethodId::pbdsm}) {
        EXPECT_EQ(m[id], 0.0) << method_name(id);
    }
    EXPECT_GT(m[MethodId::odsm], 0.0);
}

TEST(MethodMatrix, SymmetricUnderActorSwap) {
    const auto e = text_evidence("alpha beta gamma", "beta delta", "alpha delta");
    const auto ctx = DsmRunContext::from(std::vector<PairEvidence>{e});
    EXPECT_EQ(method_matrix(e, kJaccard, ctx), method_matrix(e.swapped(), kJaccard, ctx));
}
