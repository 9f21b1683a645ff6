#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <condition_variable>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace synchart {

enum class ErrorClass { None, Syntax, MissingSymbol, DataShape, Timeout, SandboxViolation, EmptyImage, Other };

std::string_view to_string(ErrorClass c);
std::optional<ErrorClass> parse_error_class(std::string_view id);

inline constexpr std::size_t kStderrTailMax = 2048;
/// Last `max` bytes of text, never splitting a UTF-8 sequence.
std::string tail_bytes(std::string_view text, std::size_t max = kStderrTailMax);

/// One line of the worker protocol (newline-delimited JSON over stdio).
/// Unknown fields are ignored on decode.
struct HarnessRequest {
    std::string id;
    std::string engine;
    std::string code;
    double timeout_s = 30.0;
    std::string out_path;
};

struct HarnessResponse {
    std::string id;
    std::string status;  // "success" | "failure"
    ErrorClass error_class = ErrorClass::None;
    std::string stderr_tail;
    std::string image_path;
    std::int64_t wall_ms = 0;
};

std::string encode_request(const HarnessRequest& request);
std::string encode_response(const HarnessResponse& response);
/// Throw Error(ParseError) on malformed lines or missing required fields.
HarnessRequest decode_request(std::string_view line);
HarnessResponse decode_response(std::string_view line);

/// Ordered (class, regex) table from assets/error_classes.tsv; the first
/// pattern found in the stderr text decides the class.
class ErrorClassifier {
public:
    static ErrorClassifier parse(std::string_view tsv);
    static const ErrorClassifier& bundled();
    ErrorClass classify(std::string_view stderr_text) const;

private:
    std::vector<std::pair<ErrorClass, std::regex>> rules_;
};

class Subprocess;

/// One harness worker process. Requests are sequential per handle.
class HarnessHandle {
public:
    explicit HarnessHandle(std::vector<std::string> argv, std::chrono::milliseconds grace = std::chrono::seconds(5));
    ~HarnessHandle();
    HarnessHandle(const HarnessHandle&) = delete;
    HarnessHandle& operator=(const HarnessHandle&) = delete;

    /// Sends a request and waits up to timeout_s plus the grace period. A
    /// worker that stays silent is killed and respawned and the call returns
    /// a timeout failure. A worker that dies is respawned and the request
    /// retried once; a second death throws Error(HarnessUnavailable).
    HarnessResponse call(const HarnessRequest& request);

    int restarts() const { return restarts_; }

private:
    void spawn();

    std::vector<std::string> argv_;
    std::chrono::milliseconds grace_;
    std::unique_ptr<Subprocess> proc_;
    int restarts_ = 0;
};

/// Fixed set of K workers; lease() blocks until one is free.
class HarnessPool {
public:
    HarnessPool(std::vector<std::string> argv, int size, std::chrono::milliseconds grace = std::chrono::seconds(5));
    ~HarnessPool();

    class Lease {
    public:
        Lease(HarnessPool& pool, std::size_t slot) : pool_(&pool), slot_(slot) {}
        Lease(Lease&& other) noexcept : pool_(other.pool_), slot_(other.slot_) { other.pool_ = nullptr; }
        Lease(const Lease&) = delete;
        ~Lease();
        HarnessHandle& operator*() const;
        HarnessHandle* operator->() const { return &**this; }

    private:
        HarnessPool* pool_;
        std::size_t slot_;
    };

    Lease lease();
    int size() const { return static_cast<int>(workers_.size()); }
    /// Highest number of leases held at once.
    int peak_in_use() const;

private:
    friend class Lease;
    void release(std::size_t slot);

    std::vector<std::unique_ptr<HarnessHandle>> workers_;
    std::vector<bool> busy_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    int in_use_ = 0;
    int peak_ = 0;
};

}  // namespace synchart
