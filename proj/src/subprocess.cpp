#include "repopulse/subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace repopulse {

namespace {

void ignore_sigpipe_once() {
    static const bool done = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

[[noreturn]] void exec_child(const std::vector<std::string>& argv,
                             const std::string& cwd,
                             const std::map<std::string, std::string>& extra_env) {
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) _exit(127);
    for (const auto& [key, value] : extra_env) ::setenv(key.c_str(), value.c_str(), 1);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execvp(args[0], args.data());
    _exit(127);
}

struct Pipe {
    int fds[2] = {-1, -1};
    Pipe() {
        if (::pipe(fds) != 0) throw std::runtime_error("pipe() failed");
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    int read_end() const { return fds[0]; }
    int write_end() const { return fds[1]; }
    void close_read() {
        if (fds[0] >= 0) ::close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) ::close(fds[1]);
        fds[1] = -1;
    }
    int release_read() {
        int fd = fds[0];
        fds[0] = -1;
        return fd;
    }
    int release_write() {
        int fd = fds[1];
        fds[1] = -1;
        return fd;
    }
};

} // namespace

CommandResult run_command(const std::vector<std::string>& argv,
                          const std::string& cwd,
                          const std::map<std::string, std::string>& extra_env,
                          std::string_view stdin_data) {
    if (argv.empty()) throw std::invalid_argument("run_command: empty argv");
    ignore_sigpipe_once();

    Pipe in, out, err;
    const pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error("fork() failed");
    if (pid == 0) {
        ::dup2(in.read_end(), STDIN_FILENO);
        ::dup2(out.write_end(), STDOUT_FILENO);
        ::dup2(err.write_end(), STDERR_FILENO);
        in.close_read();
        in.close_write();
        out.close_read();
        out.close_write();
        err.close_read();
        err.close_write();
        exec_child(argv, cwd, extra_env);
    }

    in.close_read();
    out.close_write();
    err.close_write();

    CommandResult result;
    std::size_t written = 0;
    bool stdin_open = true;
    if (stdin_data.empty()) {
        in.close_write();
        stdin_open = false;
    }

    bool out_open = true, err_open = true;
    char buf[65536];
    while (out_open || err_open || stdin_open) {
        pollfd fds[3];
        nfds_t n = 0;
        int out_idx = -1, err_idx = -1, in_idx = -1;
        if (out_open) {
            out_idx = static_cast<int>(n);
            fds[n++] = {out.read_end(), POLLIN, 0};
        }
        if (err_open) {
            err_idx = static_cast<int>(n);
            fds[n++] = {err.read_end(), POLLIN, 0};
        }
        if (stdin_open) {
            in_idx = static_cast<int>(n);
            fds[n++] = {in.write_end(), POLLOUT, 0};
        }
        if (::poll(fds, n, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (out_idx >= 0 && (fds[out_idx].revents & (POLLIN | POLLHUP))) {
            const ssize_t got = ::read(out.read_end(), buf, sizeof(buf));
            if (got <= 0) {
                out.close_read();
                out_open = false;
            } else {
                result.out.append(buf, static_cast<std::size_t>(got));
            }
        }
        if (err_idx >= 0 && (fds[err_idx].revents & (POLLIN | POLLHUP))) {
            const ssize_t got = ::read(err.read_end(), buf, sizeof(buf));
            if (got <= 0) {
                err.close_read();
                err_open = false;
            } else {
                result.err.append(buf, static_cast<std::size_t>(got));
            }
        }
        if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
            const ssize_t put = ::write(in.write_end(), stdin_data.data() + written,
                                        stdin_data.size() - written);
            if (put <= 0) {
                in.close_write();
                stdin_open = false;
            } else {
                written += static_cast<std::size_t>(put);
                if (written == stdin_data.size()) {
                    in.close_write();
                    stdin_open = false;
                }
            }
        }
    }

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

PipeProcess::PipeProcess(const std::vector<std::string>& argv, const std::string& cwd) {
    if (argv.empty()) throw std::invalid_argument("PipeProcess: empty argv");
    ignore_sigpipe_once();

    Pipe in, out;
    const pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error("fork() failed");
    if (pid == 0) {
        ::dup2(in.read_end(), STDIN_FILENO);
        ::dup2(out.write_end(), STDOUT_FILENO);
        in.close_read();
        in.close_write();
        out.close_read();
        out.close_write();
        exec_child(argv, cwd, {});
    }
    pid_ = pid;
    in.close_read();
    out.close_write();
    to_child_ = in.release_write();
    from_child_ = out.release_read();
}

PipeProcess::~PipeProcess() {
    close_all();
    if (pid_ > 0) {
        int status = 0;
        while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {}
    }
}

void PipeProcess::close_all() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = -1;
    from_child_ = -1;
}

void PipeProcess::write_line(std::string_view line) {
    std::string payload(line);
    payload.push_back('\n');
    std::size_t written = 0;
    while (written < payload.size()) {
        const ssize_t put = ::write(to_child_, payload.data() + written, payload.size() - written);
        if (put <= 0) {
            if (put < 0 && errno == EINTR) continue;
            throw std::runtime_error("PipeProcess: write failed");
        }
        written += static_cast<std::size_t>(put);
    }
}

std::optional<std::string> PipeProcess::read_line() {
    for (;;) {
        const std::size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        char buf[8192];
        const ssize_t got = ::read(from_child_, buf, sizeof(buf));
        if (got < 0) {
            if (errno == EINTR) continue;
            return std::nullopt;
        }
        if (got == 0) {
            if (buffer_.empty()) return std::nullopt;
            std::string line = std::move(buffer_);
            buffer_.clear();
            return line;
        }
        buffer_.append(buf, static_cast<std::size_t>(got));
    }
}

std::string PipeProcess::read_exact(std::size_t n) {
    while (buffer_.size() < n) {
        char buf[65536];
        const ssize_t got = ::read(from_child_, buf, sizeof(buf));
        if (got < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (got == 0) break;
        buffer_.append(buf, static_cast<std::size_t>(got));
    }
    const std::size_t take = std::min(n, buffer_.size());
    std::string result = buffer_.substr(0, take);
    buffer_.erase(0, take);
    return result;
}

} // namespace repopulse
