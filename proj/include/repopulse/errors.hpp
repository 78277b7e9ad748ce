#pragma once

#include <stdexcept>
#include <string>

namespace repopulse {

// Every error class carries its own process exit code so that callers of the
// CLI can branch on the failure kind.
enum class ExitCode : int {
    ok = 0,
    internal_error = 1,
    usage = 2,

    // vcs_extract
    not_a_repository = 10,
    unknown_branch = 11,
    empty_repository = 12,
    tree_read_error = 13,

    // issue_extract
    auth_error = 20,
    not_found = 21,
    rate_limit_exhausted = 22,
    network_error = 23,
    malformed_record = 24,

    // metrics
    empty_input = 30,
    invalid_coverage = 31,

    // render
    empty_series = 40,
    invalid_style = 41,

    // cli
    missing_input = 50,
    invalid_input = 51,
};

class PipelineError : public std::runtime_error {
public:
    PipelineError(ExitCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ExitCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    ExitCode code_;
};

} // namespace repopulse
