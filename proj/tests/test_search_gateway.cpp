#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sne/error.hpp"
#include "sne/search_gateway.hpp"
#include "test_support.hpp"

using namespace sne;

namespace {

std::shared_ptr<const CorpusIndex> small_index() {
    return std::make_shared<const CorpusIndex>(CorpusIndex::build({
        {0, "https://a.example/x", "Alice", "alice met bob"},
        {1, "https://b.example/y", "", "bob alone"},
    }));
}

std::string temp_path(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove(p);
    return p.string();
}

// Local HTTP server on an ephemeral port for the live adapter.
class LocalServer {
public:
    explicit LocalServer(httplib::Server::Handler handler) {
        server_.Get("/search", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LocalServer() {
        server_.stop();
        thread_.join();
    }
    HttpJsonConfig config(std::chrono::milliseconds delay = std::chrono::milliseconds(0)) const {
        HttpJsonConfig c;
        c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/search?q={query}";
        c.hit_count_pointer = "/stats/hits";
        c.snippets_pointer = "/results";
        c.min_delay = delay;
        c.timeout = std::chrono::seconds(5);
        return c;
    }

private:
    httplib::Server server_;
    int port_{0};
    std::thread thread_;
};

}  // namespace

TEST(QueryCache, SecondIdenticalQueryIsServedFromCache) {
    OfflineBackend offline(small_index());
    test::CountingBackend counting(offline);
    QueryCache cache;
    const auto first = search_cached(counting, cache, Query::occurrence("bob"));
    const auto second = search_cached(counting, cache, Query::occurrence("bob"));
    for (int i = 0; i < 5; ++i) search_cached(counting, cache, Query::occurrence("  BOB "));
    EXPECT_EQ(first, second);
    EXPECT_EQ(counting.calls, 1u);
    EXPECT_EQ(cache.size(), 1u);

    search_cached(counting, cache, Query::occurrence("bob", true));
    search_cached(counting, cache, Query::occurrence("bob"), 1);
    EXPECT_EQ(counting.calls, 3u);
}

TEST(QueryCache, KeyNormalization) {
    EXPECT_EQ(normalize_query_text("  Alice \t  SMITH\n"), "alice smith");
    EXPECT_EQ(CacheKey::of(Query::cooccurrence("A  b", "C"), 10), CacheKey::of(Query::cooccurrence("a b", "c"), 10));
    EXPECT_NE(CacheKey::of(Query::cooccurrence("a", "b"), 10), CacheKey::of(Query::cooccurrence("b", "a"), 10));
}

TEST(QueryCache, PersistsAndReloadsVerbatim) {
    const auto path = temp_path("sne_cache_test.jsonl");
    OfflineBackend offline(small_index());
    QueryResult stored;
    {
        QueryCache cache(path);
        stored = search_cached(offline, cache, Query::cooccurrence("alice", "bob"));
        search_cached(offline, cache, Query::occurrence("bob", true));
    }
    QueryCache reloaded(path);
    EXPECT_EQ(reloaded.size(), 2u);
    test::FailingBackend failing;
    EXPECT_EQ(search_cached(failing, reloaded, Query::cooccurrence("Alice", "Bob")), stored);
    std::filesystem::remove(path);
}

TEST(QueryCache, CorruptFileNamesLine) {
    const auto path = temp_path("sne_cache_corrupt.jsonl");
    std::ofstream(path) << R"({"key":{"terms":["a"],"quoted":false,"cap":10},"result":{"hit_count":1}})" << "\n{oops\n";
    try {
        QueryCache cache(path);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST(QueryCache, ConcurrentLookups) {
    OfflineBackend offline(small_index());
    QueryCache cache;
    search_cached(offline, cache, Query::occurrence("bob"));
    std::vector<std::thread> threads;
    std::atomic<int> mismatches{0};
    const auto expected = offline.search(Query::occurrence("bob"), kDefaultSnippetCap);
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 200; ++i) {
                if (search_cached(offline, cache, Query::occurrence("bob")) != expected) ++mismatches;
                search_cached(offline, cache, Query::occurrence(t % 2 ? "alice" : "bob", true));
            }
        });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ(mismatches.load(), 0);
    EXPECT_EQ(cache.size(), 3u);
}

TEST(OfflineBackend, PassThroughEqualsRunQuery) {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 10; ++round) {
        const auto names = test::random_names(rng, 3);
        auto index = std::make_shared<const CorpusIndex>(CorpusIndex::build(test::random_corpus(rng, 40, names)));
        OfflineBackend backend(index);
        QueryCache cache;
        EXPECT_TRUE(backend.capabilities().exact_hit_counts);
        EXPECT_EQ(backend.corpus_size(), 40u);
        for (const auto& a : names) {
            for (const auto& b : names) {
                for (bool quoted : {false, true}) {
                    const auto q = Query::cooccurrence(a, b, quoted);
                    EXPECT_EQ(search_cached(backend, cache, q, 4), index->run_query(q, 4));
                }
            }
        }
    }
}

TEST(ReplayBackend, ServesRecordingsAndFailsOnMiss) {
    ReplayBackend replay({{CacheKey::of(Query::occurrence("Alice"), 10),
                           QueryResult{3, {test::snippet("https://a/1", "", "x"), test::snippet("https://a/2", "", "y"),
                                           test::snippet("https://a/3", "", "z")}}}});
    EXPECT_EQ(replay.search(Query::occurrence("alice"), 10).hit_count, 3u);
    EXPECT_EQ(replay.search(Query::occurrence("alice"), 2).snippets.size(), 2u);
    EXPECT_THROW(replay.search(Query::occurrence("alice"), 20), BackendError);
    EXPECT_THROW(replay.search(Query::occurrence("bob"), 10), BackendError);
    EXPECT_FALSE(replay.corpus_size().has_value());
}

TEST(HttpJson, ParsesResponseAndCommaCount) {
    HttpJsonConfig cfg;
    cfg.endpoint = "http://h/s?q={query}";
    const auto body = R"({"hit_count": 1410, "snippets": [
        {"url": "https://publons.com/researcher/1/a/", "title": "T", "summary": "one two three"}]})";
    const auto r = parse_http_json_response(body, cfg, Query::cooccurrence("a", "b"), 10);
    EXPECT_EQ(r.hit_count, 1410u);
    ASSERT_EQ(r.snippets.size(), 1u);
    EXPECT_EQ(r.snippets[0].summary, (std::vector<std::string>{"one", "two", "three"}));

    EXPECT_EQ(parse_http_json_response(R"({"hit_count": "1,410"})", cfg, Query::occurrence("a"), 10).hit_count, 1410u);
}

TEST(HttpJson, MalformedResponsesAreParseErrors) {
    HttpJsonConfig cfg;
    cfg.endpoint = "http://h/s?q={query}";
    const auto q = Query::occurrence("Alice");
    for (const char* body : {"<html>", R"({"snippets": []})", R"({"hit_count": -3})", R"({"hit_count": "many"})",
                             R"({"hit_count": 2, "snippets": {}})", R"({"hit_count": 2, "snippets": [{"title": "t"}]})"}) {
        try {
            parse_http_json_response(body, cfg, q, 10);
            FAIL() << body;
        } catch (const BackendParseError& e) {
            EXPECT_EQ(e.query(), "Alice");
        }
    }
}

TEST(HttpJson, ConfigValidation) {
    EXPECT_THROW(HttpJsonConfig::from_json(nlohmann::json{{"endpoint", "http://h/s"}}), ConfigError);
    EXPECT_THROW(HttpJsonConfig::from_json(nlohmann::json::object()), ConfigError);
    const auto c = HttpJsonConfig::from_json({{"endpoint", "http://h/s?q={query}"}, {"delay_ms", 5}});
    EXPECT_EQ(c.min_delay, std::chrono::milliseconds(5));
    EXPECT_EQ(percent_encode("\"a b\""), "%22a%20b%22");
    HttpJsonBackend backend(c);
    EXPECT_EQ(backend.request_url(Query::cooccurrence("A B", "C", true)), "http://h/s?q=%22A%20B%22%20%22C%22");
}

TEST(HttpJsonBackend, LiveStubReturnsEngineCount) {
    std::string seen_query;
    LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen_query = req.get_param_value("q");
        res.set_content(R"({"stats": {"hits": 1410}, "results": [
            {"url": "https://publons.com/researcher/2908750/mahyuddin-k-m-nasution/", "title": "t", "summary": "s"}]})",
                        "application/json");
    });
    HttpJsonBackend backend(server.config());
    QueryCache cache;
    const auto q = Query::cooccurrence("Mahyuddin K. M. Nasution", "MarischaElveny");
    const auto r = search_cached(backend, cache, q);
    EXPECT_EQ(r.hit_count, 1410u);
    EXPECT_EQ(r.snippets.size(), 1u);
    EXPECT_EQ(seen_query, "Mahyuddin K. M. Nasution MarischaElveny");
    EXPECT_FALSE(backend.capabilities().exact_hit_counts);
}

TEST(HttpJsonBackend, DoesNotClampInconsistentCounts) {
    LocalServer server([](const httplib::Request& req, httplib::Response& res) {
        const auto q = req.get_param_value("q");
        res.set_content(q.find(' ') != std::string::npos ? R"({"stats": {"hits": 9}})" : R"({"stats": {"hits": 5}})",
                        "application/json");
    });
    HttpJsonBackend backend(server.config());
    EXPECT_EQ(backend.search(Query::occurrence("a"), 10).hit_count, 5u);
    EXPECT_EQ(backend.search(Query::cooccurrence("a", "b"), 10).hit_count, 9u);
}

TEST(HttpJsonBackend, SpacesRequestsByMinimumDelay) {
    std::vector<std::chrono::steady_clock::time_point> arrivals;
    std::mutex m;
    LocalServer server([&](const httplib::Request&, httplib::Response& res) {
        std::lock_guard lock(m);
        arrivals.push_back(std::chrono::steady_clock::now());
        res.set_content(R"({"stats": {"hits": 1}})", "application/json");
    });
    HttpJsonBackend backend(server.config(std::chrono::milliseconds(150)));
    std::vector<std::thread> threads;
    for (int i = 0; i < 3; ++i) {
        threads.emplace_back([&, i] { backend.search(Query::occurrence("q" + std::to_string(i)), 10); });
    }
    for (auto& t : threads) t.join();
    ASSERT_EQ(arrivals.size(), 3u);
    std::sort(arrivals.begin(), arrivals.end());
    for (std::size_t i = 1; i < arrivals.size(); ++i) {
        EXPECT_GE(arrivals[i] - arrivals[i - 1], std::chrono::milliseconds(140));
    }
}

TEST(HttpJsonBackend, TransportAndStatusFailuresAreRetriable) {
    {
        LocalServer server([](const httplib::Request&, httplib::Response& res) {
            res.status = 503;
            res.set_content("busy", "text/plain");
        });
        HttpJsonBackend backend(server.config());
        try {
            backend.search(Query::occurrence("Alice"), 10);
            FAIL();
        } catch (const BackendParseError&) {
            FAIL() << "status failure is not a parse error";
        } catch (const BackendError& e) {
            EXPECT_EQ(e.query(), "Alice");
        }
    }
    // Nothing listens on a port the OS just handed out and released.
    int dead_port = 0;
    {
        httplib::Server probe;
        dead_port = probe.bind_to_any_port("127.0.0.1");
    }
    HttpJsonConfig cfg;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(dead_port) + "/search?q={query}";
    cfg.min_delay = std::chrono::milliseconds(0);
    cfg.timeout = std::chrono::seconds(2);
    HttpJsonBackend backend(cfg);
    EXPECT_THROW(backend.search(Query::occurrence("Alice"), 10), BackendError);
}
