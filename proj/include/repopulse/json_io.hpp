#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "repopulse/issue_extract.hpp"
#include "repopulse/metrics.hpp"
#include "repopulse/vcs_extract.hpp"

namespace repopulse {

// File schemas shared by the pipeline stages. Serialization uses
// ordered_json so key order is part of the format and output bytes are
// stable across runs.

inline constexpr const char* commits_schema = "repo-pulse/commits/1";
inline constexpr const char* issues_schema = "repo-pulse/issues/1";
inline constexpr const char* metrics_schema = "repo-pulse/metrics/1";

struct CommitsFile {
    std::string repo;
    std::string branch;
    std::vector<CommitRecord> records;
};

struct IssuesFile {
    std::string repo; // "owner/name"
    std::vector<IssueRecord> records;
};

struct MetricsFile {
    int bucket_width_days = 30;
    std::int64_t start = 0;
    std::vector<MetricSeries> series;

    IntervalGrid grid() const;
};

nlohmann::ordered_json to_json(const CommitsFile& file);
nlohmann::ordered_json to_json(const IssuesFile& file);
nlohmann::ordered_json to_json(const MetricsFile& file);

// Readers validate the schema marker and record invariants; they throw
// missing_input when the file does not exist and invalid_input otherwise.
CommitsFile read_commits_file(const std::string& path);
IssuesFile read_issues_file(const std::string& path);
MetricsFile read_metrics_file(const std::string& path);

void write_commits_file(const std::string& path, const CommitsFile& file);
void write_issues_file(const std::string& path, const IssuesFile& file);
void write_metrics_file(const std::string& path, const MetricsFile& file);

} // namespace repopulse
