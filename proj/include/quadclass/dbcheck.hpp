#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <utility>

#include "quadclass/qform.hpp"

namespace quadclass::dbcheck {

using arith::Int;

enum class Source { LocalCompute, RemoteDb };

std::string to_string(Source s);
Source source_from_string(std::string const & s);

struct CacheEntry
{
    Int discriminant;
    std::uint64_t class_number = 0;
    Source source = Source::RemoteDb;
    std::string fetched_at;     // ISO 8601, UTC
};

/* LMFDB number field API; {abs_disc} and {disc} are substituted. */
inline constexpr char const * default_url_template =
    "https://www.lmfdb.org/api/nf_fields/?degree=2&disc_sign=-1&disc_abs={abs_disc}"
    "&_format=json&_fields=class_number";

struct DbConfig
{
    std::string url_template = default_url_template;
    std::filesystem::path cache_dir;    // empty: memory only
    bool offline = false;
    int max_attempts = 3;
    std::chrono::milliseconds backoff{500};
    std::chrono::milliseconds min_interval{1000};

    /* Reads QUADCLASS_DB_URL and QUADCLASS_CACHE_DIR. */
    static DbConfig from_env();
};

/* Newline-delimited JSON files, one per thousand |D| (bucket-<n>.ndjson),
 * appended to and never rewritten. Keyed by (D, source). */
class Cache
{
  public:
    enum class PutResult { Stored, AlreadyPresent, Conflict };

    explicit Cache(std::filesystem::path dir = {});

    std::optional<CacheEntry> get(Int const & D, Source src) const;
    /* Conflict leaves the stored entry untouched. */
    PutResult put(CacheEntry const & e);

    std::filesystem::path bucket_path(Int const & D) const;

  private:
    using Key = std::pair<std::string, Source>;

    void load_bucket(unsigned long bucket) const;

    std::filesystem::path dir_;
    mutable std::shared_mutex mu_;
    mutable std::set<unsigned long> loaded_;
    mutable std::map<Key, CacheEntry> entries_;
};

struct HttpResponse
{
    int status = 0;
    std::string body;
};

/* Performs one GET; throws RemoteError on transport failure. */
using Fetcher = std::function<HttpResponse(std::string const & url)>;

Fetcher http_fetcher();

std::string expand_url(std::string const & tmpl, Int const & D);

/* Class number from an LMFDB-shaped body {"data": [{"class_number": N}]}.
 * nullopt for an empty data list; ParseError otherwise malformed. */
std::optional<std::uint64_t> parse_class_number(std::string const & body);

struct Crosscheck
{
    enum class Verdict { Agree, Disagree, NotAvailable };

    Verdict verdict = Verdict::NotAvailable;
    std::uint64_t local = 0;
    std::optional<std::uint64_t> remote;
    std::string detail;
};

std::string to_string(Crosscheck::Verdict v);

class Client
{
  public:
    explicit Client(DbConfig config, Fetcher fetch = http_fetcher());

    /* Cached entry (remote preferred), otherwise one remote query unless
     * offline. nullopt when nothing is available. Throws RemoteError after
     * the retries are spent and ParseError on malformed payloads. */
    std::optional<CacheEntry> lookup(qform::Discriminant const & D);

    /* Compares the locally computed h with the remote one. A transport
     * failure degrades to NotAvailable. */
    Crosscheck crosscheck(qform::Discriminant const & D, qform::Limits const & limits = {});

    Cache & cache() { return cache_; }
    std::size_t remote_queries() const { return queries_; }

  private:
    std::optional<CacheEntry> remote(qform::Discriminant const & D);
    void throttle();

    DbConfig config_;
    Fetcher fetch_;
    Cache cache_;
    std::mutex net_mu_;
    std::optional<std::chrono::steady_clock::time_point> last_query_;
    std::size_t queries_ = 0;
};

} // namespace quadclass::dbcheck
