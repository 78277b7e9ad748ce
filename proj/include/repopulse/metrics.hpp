#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repopulse/issue_extract.hpp"
#include "repopulse/vcs_extract.hpp"

namespace repopulse {

// Uniform half-open buckets [start + k*w, start + (k+1)*w) tiling the
// project timeline; events exactly on a boundary belong to the later bucket.
struct IntervalGrid {
    std::int64_t start = 0;     // first commit's effective_at, midnight-floored UTC
    int bucket_width_days = 30;
    int bucket_count = 0;

    std::int64_t width_seconds() const;
    std::int64_t bucket_start(int k) const;
    std::int64_t bucket_end(int k) const;
    // Index of the bucket containing t; -1 when t lies outside the grid.
    int bucket_of(std::int64_t t) const;
};

enum class Metric {
    kloc,
    dkloc,
    developer_count,
    issue_count_open,
    issue_count_closed,
    issue_density,
    issue_spoilage,
    productivity,
    bus_factor,
};

inline constexpr std::array<Metric, 9> all_metrics{
    Metric::kloc,          Metric::dkloc,          Metric::developer_count,
    Metric::issue_count_open, Metric::issue_count_closed, Metric::issue_density,
    Metric::issue_spoilage, Metric::productivity,  Metric::bus_factor,
};

std::string_view to_string(Metric metric);
std::optional<Metric> metric_from_string(std::string_view name);

struct MetricSeries {
    Metric name = Metric::kloc;
    std::string unit;
    std::vector<std::optional<double>> values; // one entry per bucket; null = undefined
};

// Throws empty_input when there are no commits. end_override extends the
// grid beyond the last commit; it never truncates below it, since every
// commit must land in a bucket.
IntervalGrid build_grid(std::span<const CommitRecord> commits, int width_days = 30,
                        std::optional<std::int64_t> end_override = std::nullopt);

// Snapshot size at each bucket end: kloc of the last commit with
// effective_at < bucket end, carried forward across empty buckets.
MetricSeries kloc_series(std::span<const CommitRecord> commits, const IntervalGrid& grid);

// Net size change per bucket (sum of commit deltas); 0 for empty buckets.
MetricSeries dkloc_series(std::span<const CommitRecord> commits, const IntervalGrid& grid);

// Distinct author keys among the commits of each bucket.
MetricSeries developer_count(std::span<const CommitRecord> commits, const IntervalGrid& grid);

// At each bucket end E: open = created_at <= E and not closed by E;
// closed = closed_at <= E.
struct IssueCountSeries {
    MetricSeries open;
    MetricSeries closed;
};
IssueCountSeries issue_counts(std::span<const IssueRecord> issues, const IntervalGrid& grid,
                              bool include_prs);

// Cumulative issues created by each bucket end, divided by the kloc
// snapshot; null where kloc is zero.
MetricSeries issue_density(std::span<const IssueRecord> issues, const MetricSeries& kloc,
                           const IntervalGrid& grid, bool include_prs);

// Mean age in days of issues unresolved at each bucket end (uniform
// weights); null when nothing is unresolved.
MetricSeries issue_spoilage(std::span<const IssueRecord> issues, const IntervalGrid& grid,
                            bool include_prs);

// Net KLOC added per bucket; may be negative. per_developer divides by the
// bucket's developer count (null when that count is zero).
MetricSeries productivity(std::span<const CommitRecord> commits, const IntervalGrid& grid,
                          bool per_developer = false);

// Smallest number of top contributors (by in-bucket commit count, ties by
// lexicographic author key) whose commit share reaches the coverage
// threshold. Throws invalid_coverage outside (0, 1].
MetricSeries bus_factor(std::span<const CommitRecord> commits, const IntervalGrid& grid,
                        double coverage = 0.5);

struct MetricsConfig {
    int bucket_days = 30;
    double coverage = 0.5;
    bool include_prs = true;
    bool per_developer = false;
    std::optional<std::int64_t> end_override;
};

struct MetricsResult {
    IntervalGrid grid;
    std::vector<MetricSeries> series; // all nine, in enum order
};

MetricsResult compute_all(std::span<const CommitRecord> commits,
                          std::span<const IssueRecord> issues, const MetricsConfig& config);

} // namespace repopulse
