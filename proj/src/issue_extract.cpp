#include "repopulse/issue_extract.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <thread>
#include <unordered_set>

#include <httplib.h>

#include "repopulse/errors.hpp"
#include "repopulse/fsutil.hpp"
#include "repopulse/timeutil.hpp"

namespace repopulse {

using nlohmann::json;

std::string_view to_string(IssueKind kind) {
    return kind == IssueKind::pull_request ? "pull_request" : "issue";
}

std::string_view to_string(IssueState state) {
    return state == IssueState::closed ? "closed" : "open";
}

namespace {

class HttplibTransport : public HttpTransport {
public:
    explicit HttplibTransport(const std::string& base_url) : client_(base_url) {
        client_.set_follow_location(true);
        client_.set_connection_timeout(15);
        client_.set_read_timeout(60);
    }

    HttpResponse get(const std::string& path_and_query,
                     const std::vector<std::pair<std::string, std::string>>& headers) override {
        httplib::Headers hdrs;
        for (const auto& [key, value] : headers) hdrs.emplace(key, value);
        auto res = client_.Get(path_and_query, hdrs);
        HttpResponse out;
        if (!res) return out; // status 0 signals a transport failure
        out.status = res->status;
        out.body = res->body;
        for (const auto& [key, value] : res->headers) {
            std::string lower = key;
            for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            out.headers[lower] = value;
        }
        return out;
    }

private:
    httplib::Client client_;
};

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::optional<std::int64_t> header_i64(const HttpResponse& res, const std::string& name) {
    const auto it = res.headers.find(name);
    if (it == res.headers.end()) return std::nullopt;
    try {
        return std::stoll(it->second);
    } catch (...) {
        return std::nullopt;
    }
}

} // namespace

std::unique_ptr<HttpTransport> make_http_transport(const std::string& base_url) {
    return std::make_unique<HttplibTransport>(base_url);
}

PageCache::PageCache(std::string dir) : dir_(std::move(dir)) {}

std::string PageCache::file_name_for(const std::string& key) {
    std::string safe;
    safe.reserve(key.size());
    for (const char c : key) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
        safe.push_back(keep ? c : '_');
    }
    if (safe.size() > 120) safe.resize(120);
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(key)));
    return safe + "-" + hash + ".json";
}

std::optional<std::string> PageCache::load(const std::string& key) const {
    if (dir_.empty()) return std::nullopt;
    return read_file(dir_ + "/" + file_name_for(key));
}

void PageCache::store(const std::string& key, std::string_view body) const {
    if (dir_.empty()) return;
    ensure_directory(dir_);
    atomic_write_file(dir_ + "/" + file_name_for(key), body);
}

std::string token_from_environment() {
    if (const char* tok = std::getenv("REPO_PULSE_TOKEN"); tok && *tok) return tok;
    if (const char* tok = std::getenv("GITHUB_TOKEN"); tok && *tok) return tok;
    return {};
}

IssueFetcher::IssueFetcher(std::string cache_dir, FetchOptions options,
                           std::unique_ptr<HttpTransport> transport)
    : cache_(std::move(cache_dir)), options_(std::move(options)), transport_(std::move(transport)) {
    if (!options_.sleep_fn) {
        options_.sleep_fn = [](std::int64_t seconds) {
            if (seconds > 0) std::this_thread::sleep_for(std::chrono::seconds(seconds));
        };
    }
}

HttpTransport& IssueFetcher::transport() {
    if (!transport_) transport_ = make_http_transport(options_.api_base);
    return *transport_;
}

std::string IssueFetcher::fetch_with_retries(const std::string& path) {
    std::vector<std::pair<std::string, std::string>> headers{
        {"Accept", "application/vnd.github+json"},
        {"User-Agent", "repo-pulse"},
    };
    if (!options_.token.empty()) headers.emplace_back("Authorization", "Bearer " + options_.token);

    for (int attempt = 0;; ++attempt) {
        const HttpResponse res = transport().get(path, headers);
        ++requests_made_;

        if (res.status == 200) return res.body;
        if (res.status == 0) {
            throw PipelineError(ExitCode::network_error, "request failed: " + path);
        }
        if (res.status == 401) {
            throw PipelineError(ExitCode::auth_error, "unauthorized (401): " + path);
        }
        if (res.status == 404) {
            throw PipelineError(ExitCode::not_found, "not found (404): " + path);
        }

        const auto retry_after = header_i64(res, "retry-after");
        const auto remaining = header_i64(res, "x-ratelimit-remaining");
        const bool rate_limited =
            res.status == 429 ||
            (res.status == 403 && (retry_after.has_value() || remaining == 0));
        if (res.status == 403 && !rate_limited) {
            throw PipelineError(ExitCode::auth_error, "forbidden (403): " + path);
        }
        if (!rate_limited) {
            throw PipelineError(ExitCode::network_error,
                                "unexpected status " + std::to_string(res.status) + ": " + path);
        }
        if (attempt >= options_.max_rate_limit_retries) {
            throw PipelineError(ExitCode::rate_limit_exhausted,
                                "rate limit retries exhausted: " + path);
        }

        std::int64_t wait = 1;
        if (retry_after) {
            wait = *retry_after;
        } else if (const auto reset = header_i64(res, "x-ratelimit-reset")) {
            wait = *reset - static_cast<std::int64_t>(std::time(nullptr));
        }
        if (wait < 0) wait = 0;
        std::fprintf(stderr, "{\"event\":\"rate_limited\",\"wait_s\":%lld,\"attempt\":%d}\n",
                     static_cast<long long>(wait), attempt + 1);
        options_.sleep_fn(wait);
    }
}

std::vector<json> IssueFetcher::fetch_pages(const std::string& owner, const std::string& repo) {
    std::vector<json> pages;
    for (int page = 1;; ++page) {
        const std::string path = "/repos/" + owner + "/" + repo +
                                 "/issues?state=all&per_page=" + std::to_string(options_.per_page) +
                                 "&page=" + std::to_string(page);
        std::optional<std::string> body;
        if (!options_.refresh) body = cache_.load(path);
        if (!body) {
            std::string fetched = fetch_with_retries(path);
            cache_.store(path, fetched);
            body = std::move(fetched);
        }

        json parsed = json::parse(*body, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_array()) {
            throw PipelineError(ExitCode::malformed_record,
                                "issues page is not a JSON array: " + path);
        }
        const std::size_t count = parsed.size();
        pages.push_back(std::move(parsed));
        if (count < static_cast<std::size_t>(options_.per_page)) break;
    }
    return pages;
}

IssueRecord normalize(const json& raw) {
    if (!raw.is_object()) {
        throw PipelineError(ExitCode::malformed_record, "issue record is not an object");
    }
    const auto require_int = [&raw](const char* field) -> std::int64_t {
        const auto it = raw.find(field);
        if (it == raw.end() || !it->is_number_integer()) {
            throw PipelineError(ExitCode::malformed_record,
                                std::string("issue record missing ") + field);
        }
        return it->get<std::int64_t>();
    };

    IssueRecord record;
    record.id = require_int("id");
    record.number = require_int("number");

    const auto created_it = raw.find("created_at");
    if (created_it == raw.end() || !created_it->is_string()) {
        throw PipelineError(ExitCode::malformed_record, "issue record missing created_at");
    }
    const auto created = parse_rfc3339(created_it->get<std::string>());
    if (!created) {
        throw PipelineError(ExitCode::malformed_record,
                            "unparseable created_at: " + created_it->get<std::string>());
    }
    record.created_at = *created;

    if (const auto it = raw.find("pull_request"); it != raw.end() && !it->is_null()) {
        record.kind = IssueKind::pull_request;
    }
    if (const auto it = raw.find("state"); it != raw.end() && it->is_string()) {
        record.state = it->get<std::string>() == "closed" ? IssueState::closed : IssueState::open;
    }
    if (const auto it = raw.find("closed_at"); it != raw.end() && it->is_string()) {
        record.closed_at = parse_rfc3339(it->get<std::string>());
    }
    if (const auto it = raw.find("title"); it != raw.end() && it->is_string()) {
        record.title = it->get<std::string>();
    }
    return record;
}

NormalizeResult normalize_pages(const std::vector<json>& pages) {
    NormalizeResult result;
    std::unordered_set<std::int64_t> seen;
    for (const json& page : pages) {
        for (const json& raw : page) {
            IssueRecord record = normalize(raw);

            const bool closed_consistent =
                (record.state == IssueState::closed) == record.closed_at.has_value();
            const bool times_ordered =
                !record.closed_at || *record.closed_at >= record.created_at;
            if (!closed_consistent || !times_ordered) {
                ++result.dropped;
                std::fprintf(stderr,
                             "{\"event\":\"issue.dropped\",\"id\":%lld,\"reason\":\"%s\"}\n",
                             static_cast<long long>(record.id),
                             closed_consistent ? "closed_at precedes created_at"
                                               : "state and closed_at disagree");
                continue;
            }
            if (!seen.insert(record.id).second) {
                ++result.dropped;
                std::fprintf(stderr, "{\"event\":\"issue.dropped\",\"id\":%lld,\"reason\":\"duplicate id\"}\n",
                             static_cast<long long>(record.id));
                continue;
            }
            result.records.push_back(std::move(record));
        }
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const IssueRecord& a, const IssueRecord& b) { return a.id < b.id; });
    return result;
}

} // namespace repopulse
