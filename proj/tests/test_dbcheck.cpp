#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#ifdef QUADCLASS_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "quadclass/dbcheck.hpp"
#include "quadclass/error.hpp"

using namespace quadclass;
using arith::Int;
using dbcheck::Client;
using dbcheck::Crosscheck;
using dbcheck::DbConfig;
using qform::Discriminant;

namespace fs = std::filesystem;

namespace {

std::string fixture(std::string const & name)
{
    std::ifstream in(fs::path(QUADCLASS_FIXTURE_DIR) / name);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir
{
    fs::path path;
    TempDir()
    {
        static std::atomic<int> n{0};
        path = fs::temp_directory_path() /
               ("quadclass-test-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

DbConfig fast(fs::path dir = {})
{
    DbConfig c;
    c.cache_dir = std::move(dir);
    c.url_template = "http://fixture/api?disc={disc}&abs={abs_disc}";
    c.backoff = std::chrono::milliseconds(1);
    c.min_interval = std::chrono::milliseconds(0);
    return c;
}

/* Serves fixture bodies keyed by |D|. */
dbcheck::Fetcher canned(std::map<std::string, std::string> bodies, int * calls = nullptr)
{
    return [bodies = std::move(bodies), calls](std::string const & url) {
        if (calls)
            ++*calls;
        auto pos = url.find("abs=");
        auto it = bodies.find(url.substr(pos + 4));
        if (it == bodies.end())
            return dbcheck::HttpResponse{200, R"({"data": []})"};
        return dbcheck::HttpResponse{200, it->second};
    };
}

} // namespace

TEST_CASE("url expansion")
{
    CHECK(dbcheck::expand_url("x?d={disc}&a={abs_disc}&b={abs_disc}", Int(-23)) == "x?d=-23&a=23&b=23");
}

TEST_CASE("payload parsing")
{
    CHECK(dbcheck::parse_class_number(fixture("lmfdb_212.json")) == 6u);
    CHECK(dbcheck::parse_class_number(R"({"data":[{"class_number":"3"}]})") == 3u);
    CHECK_FALSE(dbcheck::parse_class_number(R"({"data":[]})").has_value());
    CHECK_THROWS_AS(dbcheck::parse_class_number("<html>"), ParseError);
    CHECK_THROWS_AS(dbcheck::parse_class_number(R"({"rows":[]})"), ParseError);
    CHECK_THROWS_AS(dbcheck::parse_class_number(R"({"data":[{"label":"x"}]})"), ParseError);
    CHECK_THROWS_AS(dbcheck::parse_class_number(R"({"data":[{"class_number":0}]})"), ParseError);
    CHECK_THROWS_AS(dbcheck::parse_class_number(R"({"data":[{"class_number":-4}]})"), ParseError);
}

TEST_CASE("cold lookup through the recorded fixture equals the local class number")
{
    TempDir dir;
    int calls = 0;
    Client client(fast(dir.path), canned({{"212", fixture("lmfdb_212.json")}}, &calls));
    Discriminant D(Int(-212));
    auto e = client.lookup(D);
    REQUIRE(e);
    CHECK(e->class_number == qform::class_number(D));
    CHECK(e->source == dbcheck::Source::RemoteDb);
    CHECK(calls == 1);
    // second lookup is served from the cache
    CHECK(client.lookup(D)->class_number == 6);
    CHECK(calls == 1);
    // and a fresh client reads the bucket file back
    Client again(fast(dir.path), canned({}, &calls));
    CHECK(again.lookup(D)->class_number == 6);
    CHECK(calls == 1);
    CHECK(fs::exists(dir.path / "bucket-0.ndjson"));
}

TEST_CASE("cached entry seeded from local enumeration")
{
    TempDir dir;
    dbcheck::Cache cache(dir.path);
    dbcheck::CacheEntry seed{Int(-23), qform::class_number(Discriminant(Int(-23))), dbcheck::Source::LocalCompute,
                             "2026-01-01T00:00:00Z"};
    CHECK(cache.put(seed) == dbcheck::Cache::PutResult::Stored);
    auto cfg = fast(dir.path);
    cfg.offline = true;
    Client client(cfg, canned({}));
    auto e = client.lookup(Discriminant(Int(-23)));
    REQUIRE(e);
    CHECK(e->class_number == 3);
}

TEST_CASE("offline cold lookup is NotAvailable and never touches the network")
{
    auto cfg = fast();
    cfg.offline = true;
    int calls = 0;
    Client client(cfg, canned({}, &calls));
    CHECK_FALSE(client.lookup(Discriminant(Int(-23))).has_value());
    auto c = client.crosscheck(Discriminant(Int(-23)));
    CHECK(c.verdict == Crosscheck::Verdict::NotAvailable);
    CHECK(c.local == 3);
    CHECK(calls == 0);
}

TEST_CASE("crosscheck agrees on -23 and -3")
{
    Client client(fast(), canned({{"23", R"({"data":[{"class_number":3}]})"},
                                  {"3", R"({"data":[{"class_number":1}]})"}}));
    CHECK(client.crosscheck(Discriminant(Int(-23))).verdict == Crosscheck::Verdict::Agree);
    CHECK(client.crosscheck(Discriminant(Int(-3))).verdict == Crosscheck::Verdict::Agree);
}

TEST_CASE("crosscheck reports disagreement")
{
    Client client(fast(), canned({{"23", R"({"data":[{"class_number":5}]})"}}));
    auto c = client.crosscheck(Discriminant(Int(-23)));
    CHECK(c.verdict == Crosscheck::Verdict::Disagree);
    CHECK(c.local == 3);
    CHECK(c.remote == 5u);
}

TEST_CASE("absent from the remote database")
{
    Client client(fast(), canned({}));
    CHECK_FALSE(client.lookup(Discriminant(Int(-23))).has_value());
    CHECK(client.crosscheck(Discriminant(Int(-23))).verdict == Crosscheck::Verdict::NotAvailable);
}

TEST_CASE("transport failures retry three times, then surface or degrade")
{
    int calls = 0;
    Client client(fast(), [&](std::string const &) -> dbcheck::HttpResponse {
        ++calls;
        throw RemoteError("connection refused");
    });
    CHECK_THROWS_AS(client.lookup(Discriminant(Int(-23))), RemoteError);
    CHECK(calls == 3);
    auto c = client.crosscheck(Discriminant(Int(-23)));
    CHECK(c.verdict == Crosscheck::Verdict::NotAvailable);
    CHECK(calls == 6);
}

TEST_CASE("server errors are retried; a later success is used")
{
    int calls = 0;
    Client client(fast(), [&](std::string const &) {
        ++calls;
        return calls < 3 ? dbcheck::HttpResponse{503, ""} : dbcheck::HttpResponse{200, R"({"data":[{"class_number":3}]})"};
    });
    CHECK(client.lookup(Discriminant(Int(-23)))->class_number == 3);
    CHECK(calls == 3);
}

TEST_CASE("malformed remote payload is a ParseError")
{
    Client client(fast(), canned({{"23", "not json"}}));
    CHECK_THROWS_AS(client.lookup(Discriminant(Int(-23))), ParseError);
}

TEST_CASE("cache is append-only per key; conflicts never overwrite")
{
    TempDir dir;
    dbcheck::Cache cache(dir.path);
    dbcheck::CacheEntry a{Int(-23), 3, dbcheck::Source::RemoteDb, "t"};
    CHECK(cache.put(a) == dbcheck::Cache::PutResult::Stored);
    CHECK(cache.put(a) == dbcheck::Cache::PutResult::AlreadyPresent);
    auto b = a;
    b.class_number = 7;
    CHECK(cache.put(b) == dbcheck::Cache::PutResult::Conflict);
    CHECK(cache.get(Int(-23), dbcheck::Source::RemoteDb)->class_number == 3);
    dbcheck::Cache reread(dir.path);
    CHECK(reread.get(Int(-23), dbcheck::Source::RemoteDb)->class_number == 3);

    // a stored local value that differs from a fresh computation is a disagreement
    dbcheck::CacheEntry wrong{Int(-23), 9, dbcheck::Source::LocalCompute, "t"};
    CHECK(cache.put(wrong) == dbcheck::Cache::PutResult::Stored);
    auto cfg = fast(dir.path);
    cfg.offline = true;
    Client client(cfg, canned({}));
    CHECK(client.crosscheck(Discriminant(Int(-23))).verdict == Crosscheck::Verdict::Disagree);
}

TEST_CASE("buckets hold a thousand discriminants each")
{
    dbcheck::Cache cache("/tmp/x");
    CHECK(cache.bucket_path(Int(-23)).filename() == "bucket-0.ndjson");
    CHECK(cache.bucket_path(Int(-1940)).filename() == "bucket-1.ndjson");
    CHECK(cache.bucket_path(Int(-595507)).filename() == "bucket-595.ndjson");
}

TEST_CASE("non-fundamental discriminants are rejected")
{
    Client client(fast(), canned({}));
    CHECK_THROWS_AS(client.lookup(Discriminant(Int(-12))), std::invalid_argument);
}

TEST_CASE("HTTP fetcher against a local server, including the rate limit")
{
    httplib::Server srv;
    std::string body = fixture("lmfdb_212.json");
    srv.Get("/api/nf_fields/", [&](httplib::Request const & req, httplib::Response & res) {
        if (req.get_param_value("disc_abs") == "212")
            res.set_content(body, "application/json");
        else
            res.set_content(R"({"data": []})", "application/json");
    });
    int port = srv.bind_to_any_port("127.0.0.1");
    std::thread t([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    DbConfig cfg;
    cfg.url_template = "http://127.0.0.1:" + std::to_string(port) + "/api/nf_fields/?disc_abs={abs_disc}";
    cfg.min_interval = std::chrono::milliseconds(300);
    Client client(cfg);
    auto start = std::chrono::steady_clock::now();
    CHECK(client.crosscheck(Discriminant(Int(-212))).verdict == Crosscheck::Verdict::Agree);
    CHECK(client.crosscheck(Discriminant(Int(-23))).verdict == Crosscheck::Verdict::NotAvailable);
    CHECK(std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(300));
    CHECK(client.remote_queries() == 2);
    srv.stop();
    t.join();

    // nothing listens any more: unreachable endpoint degrades
    cfg.backoff = std::chrono::milliseconds(1);
    cfg.min_interval = std::chrono::milliseconds(0);
    Client dead(cfg);
    CHECK(dead.crosscheck(Discriminant(Int(-23))).verdict == Crosscheck::Verdict::NotAvailable);
}
