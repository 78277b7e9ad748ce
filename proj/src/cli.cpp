#include "repopulse/cli.hpp"

#include <cstdio>

#include "repopulse/errors.hpp"
#include "repopulse/fsutil.hpp"
#include "repopulse/issue_extract.hpp"
#include "repopulse/json_io.hpp"
#include "repopulse/metrics.hpp"
#include "repopulse/render.hpp"
#include "repopulse/vcs_extract.hpp"

namespace repopulse {

namespace {

void progress(const std::string& event, const std::string& detail_key = {},
              const std::string& detail_value = {}) {
    if (detail_key.empty()) {
        std::fprintf(stderr, "{\"event\":\"%s\"}\n", event.c_str());
    } else {
        std::fprintf(stderr, "{\"event\":\"%s\",\"%s\":\"%s\"}\n", event.c_str(),
                     detail_key.c_str(), detail_value.c_str());
    }
}

std::pair<std::string, std::string> split_owner_repo(const std::string& owner_repo) {
    const std::size_t slash = owner_repo.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == owner_repo.size()) {
        throw PipelineError(ExitCode::usage,
                            "--owner-repo must look like owner/name, got: " + owner_repo);
    }
    return {owner_repo.substr(0, slash), owner_repo.substr(slash + 1)};
}

} // namespace

FileFilter RunConfig::file_filter() const {
    FileFilter filter;
    if (!include_globs.empty()) filter.include_globs = include_globs;
    if (!exclude_globs.empty()) filter.exclude_globs = exclude_globs;
    if (max_file_bytes > 0) filter.max_file_bytes = max_file_bytes;
    return filter;
}

std::string RunConfig::resolved_cache_dir() const {
    return cache_dir.empty() ? out_dir + "/cache" : cache_dir;
}

std::string RunConfig::commits_path() const { return out_dir + "/commits.json"; }
std::string RunConfig::issues_path() const { return out_dir + "/issues.json"; }
std::string RunConfig::metrics_path() const { return out_dir + "/metrics.json"; }

void RunConfig::validate() const {
    if (bucket_days < 1) {
        throw PipelineError(ExitCode::usage, "--bucket-days must be at least 1");
    }
    if (!(coverage > 0.0 && coverage <= 1.0)) {
        throw PipelineError(ExitCode::invalid_coverage, "--coverage must lie in (0, 1]");
    }
}

int cmd_extract_commits(const RunConfig& config) {
    config.validate();
    if (config.repo_path.empty()) {
        throw PipelineError(ExitCode::usage, "--repo is required for extract-commits");
    }
    progress("extract-commits.start", "repo", config.repo_path);

    const std::vector<CommitMeta> chain = walk_commits(config.repo_path, config.branch);
    const std::vector<CommitRecord> records =
        measure_chain(chain, config.repo_path, config.file_filter());

    CommitsFile file;
    file.repo = config.repo_path;
    file.branch = config.branch;
    file.records = records;
    ensure_directory(config.out_dir);
    write_commits_file(config.commits_path(), file);
    progress("extract-commits.done", "records", std::to_string(records.size()));
    return 0;
}

int cmd_extract_issues(const RunConfig& config) {
    config.validate();
    if (config.owner_repo.empty()) {
        throw PipelineError(ExitCode::usage, "--owner-repo is required for extract-issues");
    }
    const auto [owner, repo] = split_owner_repo(config.owner_repo);
    progress("extract-issues.start", "repo", config.owner_repo);

    FetchOptions options;
    options.api_base = config.api_base;
    options.token = token_from_environment();
    options.refresh = config.refresh;
    IssueFetcher fetcher(config.resolved_cache_dir(), options);
    const auto pages = fetcher.fetch_pages(owner, repo);
    const NormalizeResult normalized = normalize_pages(pages);

    IssuesFile file;
    file.repo = config.owner_repo;
    file.records = normalized.records;
    ensure_directory(config.out_dir);
    write_issues_file(config.issues_path(), file);
    progress("extract-issues.done", "records", std::to_string(normalized.records.size()));
    return 0;
}

int cmd_metrics(const RunConfig& config) {
    config.validate();
    const std::string commits_path = config.commits_path();
    if (!read_file(commits_path)) {
        throw PipelineError(ExitCode::missing_input,
                            "missing input file commits.json (expected at " + commits_path +
                                "); produce it with `repo-pulse extract-commits`");
    }
    const CommitsFile commits = read_commits_file(commits_path);

    IssuesFile issues;
    if (read_file(config.issues_path())) {
        issues = read_issues_file(config.issues_path());
    } else {
        progress("metrics.no_issues_file", "path", config.issues_path());
    }

    MetricsConfig mc;
    mc.bucket_days = config.bucket_days;
    mc.coverage = config.coverage;
    mc.include_prs = config.include_prs;
    mc.per_developer = config.per_developer;
    const MetricsResult result = compute_all(commits.records, issues.records, mc);

    MetricsFile file;
    file.bucket_width_days = result.grid.bucket_width_days;
    file.start = result.grid.start;
    file.series = result.series;
    ensure_directory(config.out_dir);
    write_metrics_file(config.metrics_path(), file);
    progress("metrics.done", "buckets", std::to_string(result.grid.bucket_count));
    return 0;
}

int cmd_render(const RunConfig& config) {
    config.validate();
    const std::string metrics_path = config.metrics_path();
    if (!read_file(metrics_path)) {
        throw PipelineError(ExitCode::missing_input,
                            "missing input file metrics.json (expected at " + metrics_path +
                                "); produce it with `repo-pulse metrics`");
    }
    const ChartStyle style =
        config.style_path.empty() ? ChartStyle{} : load_style(config.style_path);
    const std::vector<std::string> files = render_all(metrics_path, style, config.out_dir);
    for (const std::string& f : files) {
        std::fprintf(stdout, "%s\n", f.c_str());
    }
    progress("render.done", "charts", std::to_string(files.size()));
    return 0;
}

int cmd_run(const RunConfig& config) {
    config.validate();
    cmd_extract_commits(config);
    if (!config.owner_repo.empty()) {
        cmd_extract_issues(config);
    } else {
        progress("run.skip_issues", "reason", "no --owner-repo");
    }
    cmd_metrics(config);
    cmd_render(config);
    return 0;
}

} // namespace repopulse
