#pragma once

// Brute-force recomputation of every metric straight from raw records.
// Deliberately naive (full scans per bucket, no prefix sums, no sweeps) so
// it stays independent of the production implementation it checks.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "repopulse/issue_extract.hpp"
#include "repopulse/metrics.hpp"
#include "repopulse/vcs_extract.hpp"

namespace oracle {

using repopulse::CommitRecord;
using repopulse::IntervalGrid;
using repopulse::IssueKind;
using repopulse::IssueRecord;

using Values = std::vector<std::optional<double>>;

inline std::int64_t bucket_end(const IntervalGrid& g, int k) {
    return g.start + static_cast<std::int64_t>(k + 1) * g.bucket_width_days * 86400;
}

inline bool in_bucket(const IntervalGrid& g, int k, std::int64_t t) {
    const std::int64_t w = static_cast<std::int64_t>(g.bucket_width_days) * 86400;
    return t >= g.start + k * w && t < g.start + (k + 1) * w;
}

inline bool counts_as_issue(const IssueRecord& issue, bool include_prs) {
    return include_prs || issue.kind != IssueKind::pull_request;
}

inline Values kloc(std::span<const CommitRecord> commits, const IntervalGrid& g) {
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        std::optional<double> last;
        for (const auto& c : commits) {
            if (c.effective_at < bucket_end(g, k)) last = c.kloc;
        }
        out[k] = last;
    }
    return out;
}

inline Values dkloc(std::span<const CommitRecord> commits, const IntervalGrid& g) {
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        double sum = 0.0;
        for (const auto& c : commits) {
            if (in_bucket(g, k, c.effective_at)) sum += c.dkloc;
        }
        out[k] = sum;
    }
    return out;
}

inline Values developer_count(std::span<const CommitRecord> commits, const IntervalGrid& g) {
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        std::set<std::string> keys;
        for (const auto& c : commits) {
            if (in_bucket(g, k, c.effective_at)) keys.insert(c.author_key());
        }
        out[k] = static_cast<double>(keys.size());
    }
    return out;
}

inline Values open_count(std::span<const IssueRecord> issues, const IntervalGrid& g,
                         bool include_prs) {
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        const std::int64_t end = bucket_end(g, k);
        long long open = 0;
        for (const auto& issue : issues) {
            if (!counts_as_issue(issue, include_prs)) continue;
            if (issue.created_at <= end && (!issue.closed_at || *issue.closed_at > end)) ++open;
        }
        out[k] = static_cast<double>(open);
    }
    return out;
}

inline Values closed_count(std::span<const IssueRecord> issues, const IntervalGrid& g,
                           bool include_prs) {
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        const std::int64_t end = bucket_end(g, k);
        long long closed = 0;
        for (const auto& issue : issues) {
            if (!counts_as_issue(issue, include_prs)) continue;
            if (issue.closed_at && *issue.closed_at <= end) ++closed;
        }
        out[k] = static_cast<double>(closed);
    }
    return out;
}

inline Values density(std::span<const IssueRecord> issues, std::span<const CommitRecord> commits,
                      const IntervalGrid& g, bool include_prs) {
    const Values size = kloc(commits, g);
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        if (!size[k] || *size[k] == 0.0) continue;
        const std::int64_t end = bucket_end(g, k);
        long long created = 0;
        for (const auto& issue : issues) {
            if (!counts_as_issue(issue, include_prs)) continue;
            if (issue.created_at <= end) ++created;
        }
        out[k] = static_cast<double>(created) / *size[k];
    }
    return out;
}

inline Values spoilage(std::span<const IssueRecord> issues, const IntervalGrid& g,
                       bool include_prs) {
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        const std::int64_t end = bucket_end(g, k);
        std::int64_t age_sum = 0;
        std::int64_t unresolved = 0;
        for (const auto& issue : issues) {
            if (!counts_as_issue(issue, include_prs)) continue;
            if (issue.created_at <= end && (!issue.closed_at || *issue.closed_at > end)) {
                age_sum += end - issue.created_at;
                ++unresolved;
            }
        }
        if (unresolved == 0) continue;
        out[k] = static_cast<double>(age_sum) / static_cast<double>(unresolved) / 86400.0;
    }
    return out;
}

inline Values productivity(std::span<const CommitRecord> commits, const IntervalGrid& g,
                           bool per_developer) {
    const Values net = dkloc(commits, g);
    if (!per_developer) return net;
    const Values devs = developer_count(commits, g);
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        if (*devs[k] == 0.0) continue;
        out[k] = *net[k] / *devs[k];
    }
    return out;
}

// Exhaustive prefix enumeration: for m = 1..n, re-sum the top-m commit
// counts and take the first m whose share reaches the threshold.
inline Values bus_factor(std::span<const CommitRecord> commits, const IntervalGrid& g,
                         double coverage) {
    Values out(g.bucket_count);
    for (int k = 0; k < g.bucket_count; ++k) {
        std::map<std::string, long long> tally;
        for (const auto& c : commits) {
            if (in_bucket(g, k, c.effective_at)) ++tally[c.author_key()];
        }
        if (tally.empty()) {
            out[k] = 0.0;
            continue;
        }
        std::vector<std::pair<std::string, long long>> ranked(tally.begin(), tally.end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        long long total = 0;
        for (const auto& [key, count] : ranked) total += count;

        for (std::size_t m = 1; m <= ranked.size(); ++m) {
            long long prefix = 0;
            for (std::size_t i = 0; i < m; ++i) prefix += ranked[i].second;
            if (static_cast<double>(prefix) / static_cast<double>(total) >= coverage) {
                out[k] = static_cast<double>(m);
                break;
            }
        }
    }
    return out;
}

} // namespace oracle
