#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace repopulse {

enum class IssueKind { issue, pull_request };
enum class IssueState { open, closed };

std::string_view to_string(IssueKind kind);
std::string_view to_string(IssueState state);

struct IssueRecord {
    std::int64_t id = 0;     // host-unique
    std::int64_t number = 0; // tracker-visible
    IssueKind kind = IssueKind::issue;
    IssueState state = IssueState::open;
    std::int64_t created_at = 0;
    std::optional<std::int64_t> closed_at; // present iff state == closed
    std::string title;
};

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers; // lowercased keys
    std::string body;
};

// Narrow client seam: one REST dialect lives behind it, and tests plug in
// replay/counting transports.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& path_and_query,
                             const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url);

// Raw page bodies on disk, keyed by request path+query. No TTL: a cached
// page is served forever unless the caller forces a refresh.
class PageCache {
public:
    explicit PageCache(std::string dir);
    std::optional<std::string> load(const std::string& key) const;
    void store(const std::string& key, std::string_view body) const;
    static std::string file_name_for(const std::string& key);

private:
    std::string dir_;
};

struct FetchOptions {
    std::string api_base = "https://api.github.com";
    std::string token; // empty = unauthenticated
    bool refresh = false;
    int per_page = 100;
    int max_rate_limit_retries = 5;
    std::function<void(std::int64_t)> sleep_fn; // seconds; default really sleeps
};

// Reads REPO_PULSE_TOKEN, falling back to GITHUB_TOKEN. Never argv.
std::string token_from_environment();

class IssueFetcher {
public:
    IssueFetcher(std::string cache_dir, FetchOptions options,
                 std::unique_ptr<HttpTransport> transport = nullptr);

    // All issue pages for owner/repo (state=all), oldest request first.
    // The network is touched only for pages missing from the cache.
    // Throws PipelineError: auth_error, not_found, rate_limit_exhausted,
    // network_error, malformed_record (page body is not a JSON array).
    std::vector<nlohmann::json> fetch_pages(const std::string& owner, const std::string& repo);

    int requests_made() const { return requests_made_; }

private:
    HttpTransport& transport();
    std::string fetch_with_retries(const std::string& path);

    PageCache cache_;
    FetchOptions options_;
    std::unique_ptr<HttpTransport> transport_;
    int requests_made_ = 0;
};

// One raw host object -> IssueRecord. Kind is pull_request iff the host's
// PR marker field is present. Throws malformed_record when id, number, or
// created_at is missing or unparseable.
IssueRecord normalize(const nlohmann::json& raw);

struct NormalizeResult {
    std::vector<IssueRecord> records; // sorted by id, duplicates removed
    int dropped = 0;                  // invariant violators + duplicate ids
};

// Normalizes every raw record in the pages; records violating the
// closed-state invariants are dropped with a warning on stderr.
NormalizeResult normalize_pages(const std::vector<nlohmann::json>& pages);

} // namespace repopulse
