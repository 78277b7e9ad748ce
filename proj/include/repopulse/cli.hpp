#pragma once

#include <string>
#include <vector>

#include "repopulse/loc_counter.hpp"

namespace repopulse {

struct RunConfig {
    std::string repo_path;
    std::string branch;
    std::string owner_repo; // "owner/name"; empty skips issue extraction
    int bucket_days = 30;
    double coverage = 0.5;
    bool include_prs = true;
    bool per_developer = false;
    std::string out_dir = "repo-pulse-out";
    std::string cache_dir;                    // empty = <out_dir>/cache
    std::vector<std::string> include_globs;   // empty = filter defaults
    std::vector<std::string> exclude_globs;   // empty = filter defaults
    long long max_file_bytes = 0;             // 0 = filter default
    std::string style_path;
    bool refresh = false;
    std::string api_base = "https://api.github.com";

    FileFilter file_filter() const;
    std::string resolved_cache_dir() const;
    std::string commits_path() const;
    std::string issues_path() const;
    std::string metrics_path() const;

    // Throws usage / invalid_coverage on out-of-range values.
    void validate() const;
};

// Stages communicate only through their JSON files; each command reads its
// inputs fresh from disk so the subcommands compose exactly like `run`.
// All throw PipelineError; on success they return 0.
int cmd_extract_commits(const RunConfig& config);
int cmd_extract_issues(const RunConfig& config);
int cmd_metrics(const RunConfig& config);
int cmd_render(const RunConfig& config);
int cmd_run(const RunConfig& config);

} // namespace repopulse
