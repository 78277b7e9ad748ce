#include "repopulse/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "repopulse/errors.hpp"
#include "repopulse/timeutil.hpp"

namespace repopulse {

std::int64_t IntervalGrid::width_seconds() const {
    return static_cast<std::int64_t>(bucket_width_days) * seconds_per_day;
}

std::int64_t IntervalGrid::bucket_start(int k) const {
    return start + static_cast<std::int64_t>(k) * width_seconds();
}

std::int64_t IntervalGrid::bucket_end(int k) const {
    return start + static_cast<std::int64_t>(k + 1) * width_seconds();
}

int IntervalGrid::bucket_of(std::int64_t t) const {
    if (t < start) return -1;
    const std::int64_t k = (t - start) / width_seconds();
    if (k >= bucket_count) return -1;
    return static_cast<int>(k);
}

std::string_view to_string(Metric metric) {
    switch (metric) {
    case Metric::kloc: return "kloc";
    case Metric::dkloc: return "dkloc";
    case Metric::developer_count: return "developer_count";
    case Metric::issue_count_open: return "issue_count_open";
    case Metric::issue_count_closed: return "issue_count_closed";
    case Metric::issue_density: return "issue_density";
    case Metric::issue_spoilage: return "issue_spoilage";
    case Metric::productivity: return "productivity";
    case Metric::bus_factor: return "bus_factor";
    }
    return "unknown";
}

std::optional<Metric> metric_from_string(std::string_view name) {
    for (const Metric m : all_metrics) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

namespace {

MetricSeries make_series(Metric name, std::string unit, int bucket_count) {
    MetricSeries series;
    series.name = name;
    series.unit = std::move(unit);
    series.values.assign(static_cast<std::size_t>(bucket_count), std::nullopt);
    return series;
}

} // namespace

IntervalGrid build_grid(std::span<const CommitRecord> commits, int width_days,
                        std::optional<std::int64_t> end_override) {
    if (commits.empty()) {
        throw PipelineError(ExitCode::empty_input, "cannot build a grid from zero commits");
    }
    if (width_days < 1) {
        throw PipelineError(ExitCode::usage, "bucket width must be at least one day");
    }

    IntervalGrid grid;
    grid.bucket_width_days = width_days;
    grid.start = floor_to_utc_midnight(commits.front().effective_at);

    std::int64_t end = commits.back().effective_at;
    if (end_override && *end_override > end) end = *end_override;

    grid.bucket_count = static_cast<int>((end - grid.start) / grid.width_seconds()) + 1;
    return grid;
}

MetricSeries kloc_series(std::span<const CommitRecord> commits, const IntervalGrid& grid) {
    MetricSeries series = make_series(Metric::kloc, "KLOC", grid.bucket_count);
    std::size_t next = 0;
    std::optional<double> snapshot;
    for (int k = 0; k < grid.bucket_count; ++k) {
        const std::int64_t end = grid.bucket_end(k);
        while (next < commits.size() && commits[next].effective_at < end) {
            snapshot = commits[next].kloc;
            ++next;
        }
        series.values[static_cast<std::size_t>(k)] = snapshot;
    }
    return series;
}

MetricSeries dkloc_series(std::span<const CommitRecord> commits, const IntervalGrid& grid) {
    MetricSeries series = make_series(Metric::dkloc, "KLOC", grid.bucket_count);
    for (auto& v : series.values) v = 0.0;
    for (const CommitRecord& commit : commits) {
        const int k = grid.bucket_of(commit.effective_at);
        if (k < 0) continue;
        series.values[static_cast<std::size_t>(k)] =
            *series.values[static_cast<std::size_t>(k)] + commit.dkloc;
    }
    return series;
}

MetricSeries developer_count(std::span<const CommitRecord> commits, const IntervalGrid& grid) {
    MetricSeries series = make_series(Metric::developer_count, "developers", grid.bucket_count);
    std::vector<std::set<std::string>> authors(static_cast<std::size_t>(grid.bucket_count));
    for (const CommitRecord& commit : commits) {
        const int k = grid.bucket_of(commit.effective_at);
        if (k < 0) continue;
        authors[static_cast<std::size_t>(k)].insert(commit.author_key());
    }
    for (int k = 0; k < grid.bucket_count; ++k) {
        series.values[static_cast<std::size_t>(k)] =
            static_cast<double>(authors[static_cast<std::size_t>(k)].size());
    }
    return series;
}

namespace {

struct IssueTimeline {
    std::vector<std::int64_t> created;             // sorted
    std::vector<std::int64_t> created_prefix_sum;  // running sum of `created`
    std::vector<std::int64_t> closed;              // sorted closed_at
    std::vector<std::int64_t> closed_created;      // created_at ordered by closed_at
    std::vector<std::int64_t> closed_created_prefix_sum;
};

IssueTimeline build_timeline(std::span<const IssueRecord> issues, bool include_prs) {
    IssueTimeline t;
    std::vector<std::pair<std::int64_t, std::int64_t>> closures; // (closed_at, created_at)
    for (const IssueRecord& issue : issues) {
        if (!include_prs && issue.kind == IssueKind::pull_request) continue;
        t.created.push_back(issue.created_at);
        if (issue.closed_at) closures.emplace_back(*issue.closed_at, issue.created_at);
    }
    std::sort(t.created.begin(), t.created.end());
    std::sort(closures.begin(), closures.end());

    t.created_prefix_sum.resize(t.created.size() + 1, 0);
    for (std::size_t i = 0; i < t.created.size(); ++i) {
        t.created_prefix_sum[i + 1] = t.created_prefix_sum[i] + t.created[i];
    }
    t.closed.reserve(closures.size());
    t.closed_created.reserve(closures.size());
    t.closed_created_prefix_sum.resize(closures.size() + 1, 0);
    for (std::size_t i = 0; i < closures.size(); ++i) {
        t.closed.push_back(closures[i].first);
        t.closed_created.push_back(closures[i].second);
        t.closed_created_prefix_sum[i + 1] = t.closed_created_prefix_sum[i] + closures[i].second;
    }
    return t;
}

std::size_t count_leq(const std::vector<std::int64_t>& sorted, std::int64_t value) {
    return static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
}

} // namespace

IssueCountSeries issue_counts(std::span<const IssueRecord> issues, const IntervalGrid& grid,
                              bool include_prs) {
    IssueCountSeries out{make_series(Metric::issue_count_open, "issues", grid.bucket_count),
                         make_series(Metric::issue_count_closed, "issues", grid.bucket_count)};
    const IssueTimeline t = build_timeline(issues, include_prs);
    for (int k = 0; k < grid.bucket_count; ++k) {
        const std::int64_t end = grid.bucket_end(k);
        const auto created = static_cast<std::int64_t>(count_leq(t.created, end));
        const auto closed = static_cast<std::int64_t>(count_leq(t.closed, end));
        out.open.values[static_cast<std::size_t>(k)] = static_cast<double>(created - closed);
        out.closed.values[static_cast<std::size_t>(k)] = static_cast<double>(closed);
    }
    return out;
}

MetricSeries issue_density(std::span<const IssueRecord> issues, const MetricSeries& kloc,
                           const IntervalGrid& grid, bool include_prs) {
    MetricSeries series = make_series(Metric::issue_density, "issues/KLOC", grid.bucket_count);
    const IssueTimeline t = build_timeline(issues, include_prs);
    for (int k = 0; k < grid.bucket_count; ++k) {
        const auto& size = kloc.values[static_cast<std::size_t>(k)];
        if (!size || *size == 0.0) continue; // undefined
        const std::size_t created = count_leq(t.created, grid.bucket_end(k));
        series.values[static_cast<std::size_t>(k)] = static_cast<double>(created) / *size;
    }
    return series;
}

MetricSeries issue_spoilage(std::span<const IssueRecord> issues, const IntervalGrid& grid,
                            bool include_prs) {
    MetricSeries series = make_series(Metric::issue_spoilage, "days", grid.bucket_count);
    const IssueTimeline t = build_timeline(issues, include_prs);
    for (int k = 0; k < grid.bucket_count; ++k) {
        const std::int64_t end = grid.bucket_end(k);
        const std::size_t created = count_leq(t.created, end);
        const std::size_t closed = count_leq(t.closed, end);
        const auto unresolved = static_cast<std::int64_t>(created) - static_cast<std::int64_t>(closed);
        if (unresolved <= 0) continue; // undefined

        // Age sums stay in integer seconds, so the result is independent of
        // iteration order and the quiescent-gap drift law holds exactly.
        const std::int64_t created_sum = t.created_prefix_sum[created];
        const std::int64_t closed_created_sum = t.closed_created_prefix_sum[closed];
        const std::int64_t age_sum = unresolved * end - (created_sum - closed_created_sum);
        series.values[static_cast<std::size_t>(k)] =
            static_cast<double>(age_sum) / static_cast<double>(unresolved) /
            static_cast<double>(seconds_per_day);
    }
    return series;
}

MetricSeries productivity(std::span<const CommitRecord> commits, const IntervalGrid& grid,
                          bool per_developer) {
    MetricSeries series = make_series(Metric::productivity,
                                      per_developer ? "KLOC/developer/interval" : "KLOC/interval",
                                      grid.bucket_count);
    MetricSeries net = dkloc_series(commits, grid);
    if (!per_developer) {
        series.values = std::move(net.values);
        return series;
    }
    const MetricSeries devs = developer_count(commits, grid);
    for (int k = 0; k < grid.bucket_count; ++k) {
        const double count = *devs.values[static_cast<std::size_t>(k)];
        if (count == 0.0) continue; // undefined
        series.values[static_cast<std::size_t>(k)] =
            *net.values[static_cast<std::size_t>(k)] / count;
    }
    return series;
}

MetricSeries bus_factor(std::span<const CommitRecord> commits, const IntervalGrid& grid,
                        double coverage) {
    if (!(coverage > 0.0 && coverage <= 1.0)) {
        throw PipelineError(ExitCode::invalid_coverage,
                            "coverage must lie in (0, 1], got " + std::to_string(coverage));
    }
    MetricSeries series = make_series(Metric::bus_factor, "developers", grid.bucket_count);
    std::vector<std::map<std::string, long long>> tallies(
        static_cast<std::size_t>(grid.bucket_count));
    for (const CommitRecord& commit : commits) {
        const int k = grid.bucket_of(commit.effective_at);
        if (k < 0) continue;
        ++tallies[static_cast<std::size_t>(k)][commit.author_key()];
    }

    for (int k = 0; k < grid.bucket_count; ++k) {
        const auto& tally = tallies[static_cast<std::size_t>(k)];
        if (tally.empty()) {
            series.values[static_cast<std::size_t>(k)] = 0.0;
            continue;
        }
        std::vector<std::pair<std::string, long long>> ranked(tally.begin(), tally.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        long long total = 0;
        for (const auto& [key, count] : ranked) total += count;

        long long prefix = 0;
        int core = 0;
        for (const auto& [key, count] : ranked) {
            prefix += count;
            ++core;
            if (static_cast<double>(prefix) / static_cast<double>(total) >= coverage) break;
        }
        series.values[static_cast<std::size_t>(k)] = static_cast<double>(core);
    }
    return series;
}

MetricsResult compute_all(std::span<const CommitRecord> commits,
                          std::span<const IssueRecord> issues, const MetricsConfig& config) {
    MetricsResult result;
    result.grid = build_grid(commits, config.bucket_days, config.end_override);

    MetricSeries kloc = kloc_series(commits, result.grid);
    const IssueCountSeries counts = issue_counts(issues, result.grid, config.include_prs);

    result.series.push_back(kloc);
    result.series.push_back(dkloc_series(commits, result.grid));
    result.series.push_back(developer_count(commits, result.grid));
    result.series.push_back(counts.open);
    result.series.push_back(counts.closed);
    result.series.push_back(issue_density(issues, kloc, result.grid, config.include_prs));
    result.series.push_back(issue_spoilage(issues, result.grid, config.include_prs));
    result.series.push_back(productivity(commits, result.grid, config.per_developer));
    result.series.push_back(bus_factor(commits, result.grid, config.coverage));
    return result;
}

} // namespace repopulse
