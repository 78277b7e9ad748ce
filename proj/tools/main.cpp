#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "repopulse/cli.hpp"
#include "repopulse/errors.hpp"

namespace {

void add_common_flags(CLI::App* cmd, repopulse::RunConfig& config) {
    cmd->add_option("--out", config.out_dir, "Output directory for pipeline artifacts");
}

void add_commit_flags(CLI::App* cmd, repopulse::RunConfig& config, bool required_repo) {
    auto* repo = cmd->add_option("--repo", config.repo_path, "Path to the local git repository");
    if (required_repo) repo->required();
    cmd->add_option("--branch", config.branch, "Branch to analyze (default: checked-out branch)");
    cmd->add_option("--include", config.include_globs,
                    "Include glob for source files (repeatable; replaces the default)");
    cmd->add_option("--exclude", config.exclude_globs,
                    "Exclude glob for source files (repeatable; replaces the defaults)");
    cmd->add_option("--max-file-bytes", config.max_file_bytes,
                    "Skip files larger than this many bytes (default 1048576)");
}

void add_issue_flags(CLI::App* cmd, repopulse::RunConfig& config, bool required_owner) {
    auto* owner = cmd->add_option("--owner-repo", config.owner_repo,
                                  "Hosted repository as owner/name for the issue tracker");
    if (required_owner) owner->required();
    cmd->add_option("--cache", config.cache_dir, "Page cache directory (default <out>/cache)");
    cmd->add_flag("--refresh", config.refresh, "Refetch issue pages even when cached");
}

void add_metric_flags(CLI::App* cmd, repopulse::RunConfig& config) {
    cmd->add_option("--bucket-days", config.bucket_days, "Bucket width in days (default 30)");
    cmd->add_option("--coverage", config.coverage,
                    "Bus factor coverage threshold in (0,1] (default 0.5)");
    cmd->add_flag("--exclude-prs", [&config](std::int64_t) { config.include_prs = false; },
                  "Exclude pull requests from issue metrics");
    cmd->add_flag("--per-developer", config.per_developer,
                  "Report productivity per active developer");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"repo-pulse: longitudinal process metrics for software repositories"};
    app.require_subcommand(1);

    repopulse::RunConfig config;

    auto* extract_commits =
        app.add_subcommand("extract-commits", "Walk the commit chain and measure code size");
    add_common_flags(extract_commits, config);
    add_commit_flags(extract_commits, config, true);

    auto* extract_issues =
        app.add_subcommand("extract-issues", "Fetch issue tracker metadata over REST");
    add_common_flags(extract_issues, config);
    add_issue_flags(extract_issues, config, true);

    auto* metrics = app.add_subcommand("metrics", "Compute metric series from extracted data");
    add_common_flags(metrics, config);
    add_metric_flags(metrics, config);

    auto* render = app.add_subcommand("render", "Render metric series as SVG line charts");
    add_common_flags(render, config);
    render->add_option("--style", config.style_path, "Chart style JSON file");

    auto* run = app.add_subcommand("run", "Run the whole pipeline");
    add_common_flags(run, config);
    add_commit_flags(run, config, true);
    add_issue_flags(run, config, false);
    add_metric_flags(run, config);
    run->add_option("--style", config.style_path, "Chart style JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(repopulse::ExitCode::usage);
    }

    try {
        if (extract_commits->parsed()) return repopulse::cmd_extract_commits(config);
        if (extract_issues->parsed()) return repopulse::cmd_extract_issues(config);
        if (metrics->parsed()) return repopulse::cmd_metrics(config);
        if (render->parsed()) return repopulse::cmd_render(config);
        if (run->parsed()) return repopulse::cmd_run(config);
    } catch (const repopulse::PipelineError& e) {
        std::fprintf(stderr, "repo-pulse: error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "repo-pulse: internal error: %s\n", e.what());
        return static_cast<int>(repopulse::ExitCode::internal_error);
    }
    return 0;
}
