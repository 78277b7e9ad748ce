#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>

namespace repopulse {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;

    bool ok() const { return exit_code == 0; }
};

// Runs argv directly (no shell), capturing stdout and stderr.
// extra_env entries are added on top of the inherited environment.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::string& cwd = {},
                          const std::map<std::string, std::string>& extra_env = {},
                          std::string_view stdin_data = {});

// Long-lived child process with its stdin/stdout held open, for request/
// response batch protocols such as `git cat-file --batch`.
class PipeProcess {
public:
    PipeProcess(const std::vector<std::string>& argv, const std::string& cwd = {});
    ~PipeProcess();
    PipeProcess(const PipeProcess&) = delete;
    PipeProcess& operator=(const PipeProcess&) = delete;

    bool valid() const { return pid_ > 0; }
    void write_line(std::string_view line); // appends '\n'
    std::optional<std::string> read_line(); // strips '\n'; nullopt on EOF
    // Reads exactly n bytes; shorter result means EOF.
    std::string read_exact(std::size_t n);

private:
    void close_all();

    pid_t pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

} // namespace repopulse
