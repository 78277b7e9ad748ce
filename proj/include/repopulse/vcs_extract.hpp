#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repopulse/loc_counter.hpp"

namespace repopulse {

struct CommitMeta {
    std::string hash;        // 40-hex
    std::string parent_hash; // empty for the root commit
    std::string author_name;
    std::string author_email; // lowercased
    std::int64_t authored_at = 0;
    std::int64_t committed_at = 0;
    std::int64_t effective_at = 0; // max(committed_at, previous effective_at)
};

struct CommitRecord {
    std::string hash;
    std::string parent_hash;
    std::string author_name;
    std::string author_email;
    std::int64_t authored_at = 0;
    std::int64_t committed_at = 0;
    std::int64_t effective_at = 0;
    long long loc = 0;
    double kloc = 0.0;
    double dkloc = 0.0; // kloc - kloc(previous record); root carries its own kloc

    // Lowercased email, falling back to lowercased name when the email is
    // empty. This is the identity used by all contributor metrics.
    std::string author_key() const;
};

// First-parent chain of one branch, root first. Empty branch selects the
// repository's checked-out branch (HEAD when detached). A .mailmap file is
// honored via git's %aN/%aE expansions.
//
// Throws PipelineError: not_a_repository, unknown_branch, empty_repository.
std::vector<CommitMeta> walk_commits(const std::string& repo_path, const std::string& branch = {});

// Measures every commit's tree (code lines of files admitted by the filter)
// and fills loc/kloc/dkloc. Tree reads are independent and run on a small
// worker pool; results are re-assembled in chain order before deltas.
// A commit whose tree cannot be read is skipped with a warning on stderr,
// except the root commit, whose failure aborts (tree_read_error).
std::vector<CommitRecord> measure_chain(const std::vector<CommitMeta>& chain,
                                        const std::string& repo_path,
                                        const FileFilter& filter,
                                        unsigned jobs = 0); // 0 = auto

} // namespace repopulse
