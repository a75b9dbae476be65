#include "quadclass/dbcheck.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <thread>

#ifdef QUADCLASS_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <json.hpp>

#include "quadclass/error.hpp"

namespace quadclass::dbcheck {

namespace {

using nlohmann::json;

std::string utc_now()
{
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

unsigned long bucket_of(Int const & D)
{
    Int q = abs(D) / 1000;
    return q.get_ui();
}

json to_json(CacheEntry const & e)
{
    return {{"discriminant", e.discriminant.get_str()},
            {"class_number", e.class_number},
            {"source", to_string(e.source)},
            {"fetched_at", e.fetched_at}};
}

CacheEntry from_json(json const & j)
{
    CacheEntry e;
    e.discriminant = Int(j.at("discriminant").get<std::string>());
    e.class_number = j.at("class_number").get<std::uint64_t>();
    e.source = source_from_string(j.at("source").get<std::string>());
    e.fetched_at = j.value("fetched_at", "");
    if (e.class_number < 1)
        throw ParseError("cache entry with class number 0");
    return e;
}

void replace_all(std::string & s, std::string const & from, std::string const & to)
{
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
}

} // namespace

std::string to_string(Source s)
{
    return s == Source::LocalCompute ? "local-compute" : "remote-db";
}

Source source_from_string(std::string const & s)
{
    if (s == "local-compute")
        return Source::LocalCompute;
    if (s == "remote-db")
        return Source::RemoteDb;
    throw ParseError("unknown cache source '" + s + "'");
}

std::string to_string(Crosscheck::Verdict v)
{
    switch (v) {
    case Crosscheck::Verdict::Agree:
        return "agree";
    case Crosscheck::Verdict::Disagree:
        return "disagree";
    case Crosscheck::Verdict::NotAvailable:
        return "not-available";
    }
    return "?";
}

DbConfig DbConfig::from_env()
{
    DbConfig c;
    if (char const * url = std::getenv("QUADCLASS_DB_URL"); url && *url)
        c.url_template = url;
    if (char const * dir = std::getenv("QUADCLASS_CACHE_DIR"); dir && *dir)
        c.cache_dir = dir;
    return c;
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path Cache::bucket_path(Int const & D) const
{
    return dir_ / ("bucket-" + std::to_string(bucket_of(D)) + ".ndjson");
}

// caller holds mu_ exclusively
void Cache::load_bucket(unsigned long bucket) const
{
    if (!loaded_.insert(bucket).second || dir_.empty())
        return;
    std::ifstream in(dir_ / ("bucket-" + std::to_string(bucket) + ".ndjson"));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        CacheEntry e;
        try {
            e = from_json(json::parse(line));
        } catch (json::exception const & ex) {
            throw ParseError(std::string("corrupt cache line: ") + ex.what());
        }
        // first record per key wins; later lines cannot override it
        entries_.try_emplace({e.discriminant.get_str(), e.source}, e);
    }
}

std::optional<CacheEntry> Cache::get(Int const & D, Source src) const
{
    Key key{D.get_str(), src};
    {
        std::shared_lock lock(mu_);
        if (loaded_.contains(bucket_of(D))) {
            auto it = entries_.find(key);
            return it == entries_.end() ? std::nullopt : std::optional(it->second);
        }
    }
    std::unique_lock lock(mu_);
    load_bucket(bucket_of(D));
    auto it = entries_.find(key);
    return it == entries_.end() ? std::nullopt : std::optional(it->second);
}

Cache::PutResult Cache::put(CacheEntry const & e)
{
    std::unique_lock lock(mu_);
    load_bucket(bucket_of(e.discriminant));
    Key key{e.discriminant.get_str(), e.source};
    if (auto it = entries_.find(key); it != entries_.end())
        return it->second.class_number == e.class_number ? PutResult::AlreadyPresent : PutResult::Conflict;
    entries_.emplace(key, e);
    if (!dir_.empty()) {
        std::filesystem::create_directories(dir_);
        std::ofstream out(bucket_path(e.discriminant), std::ios::app);
        out << to_json(e).dump() << '\n';
        if (!out)
            throw Error("cannot append to cache file " + bucket_path(e.discriminant).string());
    }
    return PutResult::Stored;
}

std::string expand_url(std::string const & tmpl, Int const & D)
{
    std::string url = tmpl;
    replace_all(url, "{abs_disc}", Int(abs(D)).get_str());
    replace_all(url, "{disc}", D.get_str());
    return url;
}

std::optional<std::uint64_t> parse_class_number(std::string const & body)
{
    json j;
    try {
        j = json::parse(body);
    } catch (json::exception const & e) {
        throw ParseError(std::string("remote payload is not JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("data") || !j["data"].is_array())
        throw ParseError("remote payload lacks a data array");
    auto const & data = j["data"];
    if (data.empty())
        return std::nullopt;
    auto const & rec = data.front();
    if (!rec.is_object() || !rec.contains("class_number"))
        throw ParseError("remote record lacks class_number");
    auto const & h = rec["class_number"];
    std::uint64_t value = 0;
    if (h.is_number_unsigned())
        value = h.get<std::uint64_t>();
    else if (h.is_string() && !h.get<std::string>().empty() &&
             h.get<std::string>().find_first_not_of("0123456789") == std::string::npos)
        value = std::stoull(h.get<std::string>());
    else
        throw ParseError("remote class_number is not a positive integer");
    if (value < 1)
        throw ParseError("remote class_number is not a positive integer");
    return value;
}

Fetcher http_fetcher()
{
    return [](std::string const & url) {
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos)
            throw RemoteError("malformed URL " + url);
        auto path_start = url.find('/', scheme_end + 3);
        std::string origin = url.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
        httplib::Client cli(origin);
        if (!cli.is_valid())
            throw RemoteError("unsupported endpoint " + origin);
        cli.set_connection_timeout(5);
        cli.set_read_timeout(15);
        cli.set_follow_location(true);
        auto res = cli.Get(path);
        if (!res)
            throw RemoteError("GET " + url + ": " + httplib::to_string(res.error()));
        return HttpResponse{res->status, res->body};
    };
}

Client::Client(DbConfig config, Fetcher fetch)
    : config_(std::move(config)), fetch_(std::move(fetch)), cache_(config_.cache_dir)
{
}

void Client::throttle()
{
    auto now = std::chrono::steady_clock::now();
    if (last_query_ && now - *last_query_ < config_.min_interval)
        std::this_thread::sleep_for(config_.min_interval - (now - *last_query_));
    last_query_ = std::chrono::steady_clock::now();
}

std::optional<CacheEntry> Client::remote(qform::Discriminant const & D)
{
    if (auto hit = cache_.get(D.value(), Source::RemoteDb))
        return hit;
    if (config_.offline)
        return std::nullopt;

    std::lock_guard lock(net_mu_);
    std::string url = expand_url(config_.url_template, D.value());
    std::string last_error;
    auto delay = config_.backoff;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
        throttle();
        ++queries_;
        HttpResponse res;
        try {
            res = fetch_(url);
        } catch (RemoteError const & e) {
            last_error = e.what();
            continue;
        }
        if (res.status == 404)
            return std::nullopt;
        if (res.status != 200) {
            last_error = "HTTP " + std::to_string(res.status);
            continue;
        }
        auto h = parse_class_number(res.body);
        if (!h)
            return std::nullopt;
        CacheEntry e{D.value(), *h, Source::RemoteDb, utc_now()};
        if (cache_.put(e) == Cache::PutResult::Conflict)
            return cache_.get(D.value(), Source::RemoteDb);
        return e;
    }
    throw RemoteError("GET " + url + " failed after " + std::to_string(config_.max_attempts) +
                      " attempts: " + last_error);
}

std::optional<CacheEntry> Client::lookup(qform::Discriminant const & D)
{
    if (!D.is_fundamental())
        throw std::invalid_argument("lookup: " + D.value().get_str() + " is not a fundamental discriminant");
    if (auto hit = cache_.get(D.value(), Source::RemoteDb))
        return hit;
    if (auto hit = cache_.get(D.value(), Source::LocalCompute))
        return hit;
    return remote(D);
}

Crosscheck Client::crosscheck(qform::Discriminant const & D, qform::Limits const & limits)
{
    if (!D.is_fundamental())
        throw std::invalid_argument("crosscheck: " + D.value().get_str() + " is not a fundamental discriminant");
    Crosscheck out;
    out.local = qform::class_number(D, limits);

    CacheEntry mine{D.value(), out.local, Source::LocalCompute, utc_now()};
    if (cache_.put(mine) == Cache::PutResult::Conflict) {
        out.verdict = Crosscheck::Verdict::Disagree;
        out.remote = cache_.get(D.value(), Source::LocalCompute)->class_number;
        out.detail = "cached local-compute entry disagrees";
        return out;
    }

    std::optional<CacheEntry> theirs;
    try {
        theirs = remote(D);
    } catch (RemoteError const & e) {
        out.detail = e.what();
        return out;
    }
    if (!theirs) {
        out.detail = config_.offline ? "offline and not cached" : "not in remote database";
        return out;
    }
    out.remote = theirs->class_number;
    out.verdict = *out.remote == out.local ? Crosscheck::Verdict::Agree : Crosscheck::Verdict::Disagree;
    return out;
}

} // namespace quadclass::dbcheck
