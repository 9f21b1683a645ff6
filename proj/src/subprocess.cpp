#include "synchart/subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include "synchart/error.hpp"

namespace synchart {

namespace {

void ignore_sigpipe()
{
    static std::once_flag once;
    std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

Subprocess::Subprocess(std::vector<std::string> argv)
{
    if (argv.empty()) throw Error(ErrorCode::HarnessUnavailable, "empty command");
    ignore_sigpipe();
    int to_child[2];
    int from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0) throw Error(ErrorCode::HarnessUnavailable, std::strerror(errno));
    if (pipe2(from_child, O_CLOEXEC) != 0) {
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw Error(ErrorCode::HarnessUnavailable, std::strerror(errno));
    }
    std::vector<char*> args;
    for (auto& a : argv) args.push_back(a.data());
    args.push_back(nullptr);

    pid_ = fork();
    if (pid_ < 0) throw Error(ErrorCode::HarnessUnavailable, std::strerror(errno));
    if (pid_ == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        execvp(args[0], args.data());
        _exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
}

Subprocess::~Subprocess()
{
    if (in_fd_ >= 0) ::close(in_fd_);
    in_fd_ = -1;
    if (pid_ > 0) {
        // Give the child a moment to exit on EOF before forcing it.
        for (int i = 0; i < 50; ++i) {
            if (waitpid(pid_, nullptr, WNOHANG) == pid_) {
                pid_ = -1;
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
    }
    kill();
    if (out_fd_ >= 0) ::close(out_fd_);
}

bool Subprocess::write_line(const std::string& line)
{
    if (in_fd_ < 0) return false;
    std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::write(in_fd_, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        off += static_cast<std::size_t>(n);
    }
    return true;
}

Subprocess::ReadStatus Subprocess::read_line(std::string& out, std::chrono::milliseconds timeout)
{
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            out = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return ReadStatus::Line;
        }
        if (out_fd_ < 0) return ReadStatus::Eof;
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) return ReadStatus::Timeout;
        pollfd pfd{out_fd_, POLLIN, 0};
        int r = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (r < 0) {
            if (errno == EINTR) continue;
            return ReadStatus::Eof;
        }
        if (r == 0) return ReadStatus::Timeout;
        char chunk[65536];
        ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            return ReadStatus::Eof;
        }
        if (n == 0) return ReadStatus::Eof;
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

bool Subprocess::alive()
{
    if (pid_ <= 0) return false;
    if (waitpid(pid_, nullptr, WNOHANG) == pid_) {
        pid_ = -1;
        return false;
    }
    return true;
}

void Subprocess::kill()
{
    if (pid_ > 0) {
        ::kill(pid_, SIGKILL);
        waitpid(pid_, nullptr, 0);
        pid_ = -1;
    }
}

std::vector<std::string> split_command(const std::string& command)
{
    std::istringstream in(command);
    std::vector<std::string> out;
    std::string part;
    while (in >> part) out.push_back(part);
    return out;
}

}  // namespace synchart
