#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <sys/types.h>

namespace synchart {

/// Child process with piped stdin/stdout; stderr is inherited.
class Subprocess {
public:
    explicit Subprocess(std::vector<std::string> argv);
    ~Subprocess();
    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;

    bool write_line(const std::string& line);

    enum class ReadStatus { Line, Timeout, Eof };
    /// Reads one '\n'-terminated line (newline stripped) within the deadline.
    ReadStatus read_line(std::string& out, std::chrono::milliseconds timeout);

    bool alive();
    void kill();
    pid_t pid() const { return pid_; }

private:
    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
};

/// Splits a command line on whitespace (no quoting).
std::vector<std::string> split_command(const std::string& command);

}  // namespace synchart
