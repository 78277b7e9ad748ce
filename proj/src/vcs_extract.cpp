#include "repopulse/vcs_extract.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

#include "repopulse/errors.hpp"
#include "repopulse/subprocess.hpp"

namespace repopulse {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

CommandResult git(const std::string& repo, std::vector<std::string> args) {
    std::vector<std::string> argv{"git", "-C", repo};
    for (auto& a : args) argv.push_back(std::move(a));
    return run_command(argv);
}

void require_repository(const std::string& repo) {
    if (!git(repo, {"rev-parse", "--git-dir"}).ok()) {
        throw PipelineError(ExitCode::not_a_repository, "not a git repository: " + repo);
    }
}

bool has_any_commit(const std::string& repo) {
    return git(repo, {"rev-parse", "--verify", "--quiet", "HEAD"}).ok();
}

std::string resolve_branch(const std::string& repo, const std::string& branch) {
    if (!branch.empty()) {
        if (!git(repo, {"rev-parse", "--verify", "--quiet", branch + "^{commit}"}).ok()) {
            if (!has_any_commit(repo)) {
                throw PipelineError(ExitCode::empty_repository, "repository has no commits: " + repo);
            }
            throw PipelineError(ExitCode::unknown_branch, "unknown branch: " + branch);
        }
        return branch;
    }
    if (!has_any_commit(repo)) {
        throw PipelineError(ExitCode::empty_repository, "repository has no commits: " + repo);
    }
    const CommandResult head = git(repo, {"symbolic-ref", "--short", "--quiet", "HEAD"});
    if (head.ok()) {
        std::string name = head.out;
        while (!name.empty() && (name.back() == '\n' || name.back() == '\r')) name.pop_back();
        if (!name.empty()) return name;
    }
    return "HEAD"; // detached
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = text.find(sep, pos);
        if (next == std::string_view::npos) {
            parts.push_back(text.substr(pos));
            break;
        }
        parts.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return parts;
}

std::int64_t parse_i64(std::string_view s) {
    std::int64_t value = 0;
    std::from_chars(s.data(), s.data() + s.size(), value);
    return value;
}

} // namespace

std::string CommitRecord::author_key() const {
    if (!author_email.empty()) return author_email;
    return lowercase(author_name);
}

std::vector<CommitMeta> walk_commits(const std::string& repo_path, const std::string& branch) {
    require_repository(repo_path);
    const std::string tip = resolve_branch(repo_path, branch);

    // Unit separator between fields, NUL between records.
    const CommandResult log = git(repo_path, {"log", "--first-parent", "--reverse", "-z",
                                              "--format=%H%x1f%P%x1f%aN%x1f%aE%x1f%at%x1f%ct",
                                              tip});
    if (!log.ok()) {
        throw PipelineError(ExitCode::empty_repository,
                            "git log failed for " + repo_path + ": " + log.err);
    }

    std::vector<CommitMeta> chain;
    for (std::string_view record : split(log.out, '\0')) {
        if (record.empty()) continue;
        const auto fields = split(record, '\x1f');
        if (fields.size() != 6) continue;
        CommitMeta meta;
        meta.hash = std::string(fields[0]);
        const auto parents = split(fields[1], ' ');
        if (!parents.empty() && !parents[0].empty()) meta.parent_hash = std::string(parents[0]);
        meta.author_name = std::string(fields[2]);
        meta.author_email = lowercase(std::string(fields[3]));
        meta.authored_at = parse_i64(fields[4]);
        meta.committed_at = parse_i64(fields[5]);
        chain.push_back(std::move(meta));
    }
    if (chain.empty()) {
        throw PipelineError(ExitCode::empty_repository, "repository has no commits: " + repo_path);
    }

    // Monotonic clamp tames rebased or forged committer clocks.
    std::int64_t previous = chain.front().committed_at;
    for (CommitMeta& meta : chain) {
        meta.effective_at = std::max(meta.committed_at, previous);
        previous = meta.effective_at;
    }
    return chain;
}

namespace {

struct TreeEntry {
    std::string mode;
    std::string object; // blob sha
    long long size = 0;
    std::string path;
};

// `git ls-tree -r -l -z`: "<mode> SP <type> SP <sha> SP+ <size> TAB <path>" NUL.
std::optional<std::vector<TreeEntry>> list_tree(const std::string& repo, const std::string& hash) {
    const CommandResult res = git(repo, {"ls-tree", "-r", "-l", "-z", hash});
    if (!res.ok()) return std::nullopt;

    std::vector<TreeEntry> entries;
    for (std::string_view record : split(res.out, '\0')) {
        if (record.empty()) continue;
        const std::size_t tab = record.find('\t');
        if (tab == std::string_view::npos) continue;
        std::string_view head = record.substr(0, tab);

        std::vector<std::string_view> fields;
        std::size_t pos = 0;
        while (pos < head.size()) {
            while (pos < head.size() && head[pos] == ' ') ++pos;
            const std::size_t start = pos;
            while (pos < head.size() && head[pos] != ' ') ++pos;
            if (pos > start) fields.push_back(head.substr(start, pos - start));
        }
        if (fields.size() != 4) continue;
        if (fields[1] != "blob") continue;  // skips submodules (type commit)
        if (fields[0] == "120000") continue; // symlink target text is not source
        TreeEntry entry;
        entry.mode = std::string(fields[0]);
        entry.object = std::string(fields[2]);
        entry.size = fields[3] == "-" ? 0 : parse_i64(fields[3]);
        entry.path = std::string(record.substr(tab + 1));
        entries.push_back(std::move(entry));
    }
    return entries;
}

// One `git cat-file --batch` child per worker; blob contents are requested
// by sha and answered with a sized payload.
class BlobReader {
public:
    explicit BlobReader(const std::string& repo)
        : proc_({"git", "-C", repo, "cat-file", "--batch"}) {}

    std::optional<std::string> read(const std::string& sha) {
        proc_.write_line(sha);
        const auto header = proc_.read_line();
        if (!header) return std::nullopt;
        // "<sha> blob <size>" or "<sha> missing"
        const auto fields = split(*header, ' ');
        if (fields.size() < 3 || fields[1] != "blob") return std::nullopt;
        const std::size_t size = static_cast<std::size_t>(parse_i64(fields[2]));
        std::string content = proc_.read_exact(size);
        if (content.size() != size) return std::nullopt;
        proc_.read_exact(1); // trailing newline
        return content;
    }

private:
    PipeProcess proc_;
};

struct MeasureShared {
    const std::string* repo = nullptr;
    const FileFilter* filter = nullptr;
    const std::vector<CommitMeta>* chain = nullptr;
    std::atomic<std::size_t> next{0};
    std::vector<long long> loc;   // by chain index
    std::vector<char> failed;     // by chain index
    std::mutex cache_mutex;
    // code-line count per blob, keyed by "<sha>:<ext>"; binary blobs count 0
    std::unordered_map<std::string, long long> blob_cache;
};

void measure_worker(MeasureShared& shared) {
    BlobReader reader(*shared.repo);
    for (;;) {
        const std::size_t index = shared.next.fetch_add(1);
        if (index >= shared.chain->size()) return;
        const CommitMeta& commit = (*shared.chain)[index];

        const auto entries = list_tree(*shared.repo, commit.hash);
        if (!entries) {
            shared.failed[index] = 1;
            continue;
        }

        long long total = 0;
        bool ok = true;
        for (const TreeEntry& entry : *entries) {
            if (!shared.filter->admits(entry.path, entry.size)) continue;
            const std::string ext = extension_of(entry.path);
            const std::string key = entry.object + ":" + ext;
            {
                std::lock_guard lock(shared.cache_mutex);
                const auto it = shared.blob_cache.find(key);
                if (it != shared.blob_cache.end()) {
                    total += it->second;
                    continue;
                }
            }
            const auto content = reader.read(entry.object);
            if (!content) {
                ok = false;
                break;
            }
            const long long code = is_binary(*content) ? 0 : count_file(*content, ext).code;
            {
                std::lock_guard lock(shared.cache_mutex);
                shared.blob_cache.emplace(key, code);
            }
            total += code;
        }
        if (!ok) {
            shared.failed[index] = 1;
            continue;
        }
        shared.loc[index] = total;
    }
}

} // namespace

std::vector<CommitRecord> measure_chain(const std::vector<CommitMeta>& chain,
                                        const std::string& repo_path,
                                        const FileFilter& filter,
                                        unsigned jobs) {
    if (chain.empty()) return {};

    MeasureShared shared;
    shared.repo = &repo_path;
    shared.filter = &filter;
    shared.chain = &chain;
    shared.loc.assign(chain.size(), 0);
    shared.failed.assign(chain.size(), 0);

    if (jobs == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        jobs = std::clamp(hw, 1u, 4u);
    }
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(chain.size()));

    if (jobs <= 1) {
        measure_worker(shared);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back([&shared] { measure_worker(shared); });
        for (auto& t : pool) t.join();
    }

    if (shared.failed[0]) {
        throw PipelineError(ExitCode::tree_read_error,
                            "cannot read tree of root commit " + chain[0].hash);
    }

    std::vector<CommitRecord> records;
    records.reserve(chain.size());
    double previous_kloc = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (shared.failed[i]) {
            std::fprintf(stderr, "{\"event\":\"commit.skipped\",\"hash\":\"%s\",\"reason\":\"tree unreadable\"}\n",
                         chain[i].hash.c_str());
            continue;
        }
        CommitRecord record;
        record.hash = chain[i].hash;
        record.parent_hash = chain[i].parent_hash;
        record.author_name = chain[i].author_name;
        record.author_email = chain[i].author_email;
        record.authored_at = chain[i].authored_at;
        record.committed_at = chain[i].committed_at;
        record.effective_at = chain[i].effective_at;
        record.loc = shared.loc[i];
        record.kloc = static_cast<double>(record.loc) / 1000.0;
        record.dkloc = records.empty() ? record.kloc : record.kloc - previous_kloc;
        previous_kloc = record.kloc;
        records.push_back(std::move(record));
    }
    return records;
}

} // namespace repopulse
