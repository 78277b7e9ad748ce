#pragma once

// Small fixture builders shared by the metrics and acceptance tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "repopulse/issue_extract.hpp"
#include "repopulse/metrics.hpp"
#include "repopulse/vcs_extract.hpp"

namespace builders {

using repopulse::CommitRecord;
using repopulse::IssueKind;
using repopulse::IssueRecord;
using repopulse::IssueState;

struct CommitSpec {
    std::int64_t effective_at;
    long long loc;
    std::string author = "dev@example.com";
};

// Chains kloc/dkloc the way measure_chain does.
inline std::vector<CommitRecord> commits(const std::vector<CommitSpec>& specs) {
    std::vector<CommitRecord> out;
    double previous_kloc = 0.0;
    int seq = 0;
    for (const CommitSpec& spec : specs) {
        CommitRecord r;
        r.hash = "commit" + std::to_string(seq);
        r.parent_hash = seq == 0 ? "" : "commit" + std::to_string(seq - 1);
        r.author_email = spec.author;
        r.author_name = "Dev";
        r.authored_at = spec.effective_at;
        r.committed_at = spec.effective_at;
        r.effective_at = spec.effective_at;
        r.loc = spec.loc;
        r.kloc = static_cast<double>(spec.loc) / 1000.0;
        r.dkloc = out.empty() ? r.kloc : r.kloc - previous_kloc;
        previous_kloc = r.kloc;
        ++seq;
        out.push_back(std::move(r));
    }
    return out;
}

inline IssueRecord issue(std::int64_t id, std::int64_t created_at,
                         std::optional<std::int64_t> closed_at = std::nullopt,
                         IssueKind kind = IssueKind::issue) {
    IssueRecord r;
    r.id = id;
    r.number = id;
    r.kind = kind;
    r.created_at = created_at;
    r.closed_at = closed_at;
    r.state = closed_at ? IssueState::closed : IssueState::open;
    return r;
}

struct RandomInstance {
    std::vector<CommitRecord> commits;
    std::vector<IssueRecord> issues;
    int bucket_days = 30;
    double coverage = 0.5;
    bool include_prs = true;
    bool per_developer = false;
};

// Bounded the way the oracle-equivalence criterion asks: at most 10
// authors, 50 issues, and 12 buckets.
inline RandomInstance random_instance(std::mt19937& rng) {
    RandomInstance inst;
    std::uniform_int_distribution<int> width(1, 45);
    inst.bucket_days = width(rng);
    const std::int64_t w = static_cast<std::int64_t>(inst.bucket_days) * 86400;

    std::uniform_int_distribution<std::int64_t> origin(1'000'000'000, 1'700'000'000);
    const std::int64_t t0 = origin(rng);

    std::uniform_int_distribution<int> author_pool(1, 10);
    const int authors = author_pool(rng);

    std::uniform_int_distribution<int> commit_count(1, 60);
    std::uniform_int_distribution<std::int64_t> offset(0, 11 * w - 1);
    std::uniform_int_distribution<int> author_pick(0, authors - 1);
    std::uniform_int_distribution<long long> loc_step(-400, 600);

    std::vector<std::int64_t> times;
    const int n = commit_count(rng);
    for (int i = 0; i < n; ++i) times.push_back(t0 + offset(rng));
    std::sort(times.begin(), times.end());

    std::vector<CommitSpec> specs;
    long long loc = 0;
    for (const std::int64_t t : times) {
        loc = std::max(0LL, loc + loc_step(rng));
        specs.push_back({t, loc, "author" + std::to_string(author_pick(rng)) + "@example.com"});
    }
    inst.commits = commits(specs);

    std::uniform_int_distribution<int> issue_count(0, 50);
    std::uniform_int_distribution<std::int64_t> created_off(-20 * 86400, 12 * w);
    std::uniform_int_distribution<std::int64_t> ttl(0, 6 * w);
    std::uniform_int_distribution<int> percent(0, 99);
    const int m = issue_count(rng);
    for (int i = 0; i < m; ++i) {
        const std::int64_t created = t0 + created_off(rng);
        std::optional<std::int64_t> closed;
        if (percent(rng) < 60) closed = created + ttl(rng);
        const IssueKind kind = percent(rng) < 20 ? IssueKind::pull_request : IssueKind::issue;
        inst.issues.push_back(issue(1000 + i, created, closed, kind));
    }

    const double coverages[] = {0.25, 0.5, 0.75, 1.0};
    inst.coverage = coverages[static_cast<std::size_t>(percent(rng)) % 4];
    inst.include_prs = percent(rng) < 50;
    inst.per_developer = percent(rng) < 50;
    return inst;
}

} // namespace builders
