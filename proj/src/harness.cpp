#include "synchart/harness.hpp"

#include <array>

#include <fmt/format.h>
#include <json.hpp>

#include "synchart/catalog.hpp"
#include "synchart/error.hpp"
#include "synchart/subprocess.hpp"

namespace synchart {

namespace {

constexpr std::array<std::pair<ErrorClass, std::string_view>, 8> kClassNames = {{
    {ErrorClass::None, "none"},
    {ErrorClass::Syntax, "syntax"},
    {ErrorClass::MissingSymbol, "missing_symbol"},
    {ErrorClass::DataShape, "data_shape"},
    {ErrorClass::Timeout, "timeout"},
    {ErrorClass::SandboxViolation, "sandbox_violation"},
    {ErrorClass::EmptyImage, "empty_image"},
    {ErrorClass::Other, "other"},
}};

}  // namespace

std::string_view to_string(ErrorClass c)
{
    for (const auto& [cls, name] : kClassNames) {
        if (cls == c) return name;
    }
    return "other";
}

std::optional<ErrorClass> parse_error_class(std::string_view id)
{
    for (const auto& [cls, name] : kClassNames) {
        if (name == id) return cls;
    }
    return std::nullopt;
}

std::string tail_bytes(std::string_view text, std::size_t max)
{
    if (text.size() <= max) return std::string(text);
    std::size_t start = text.size() - max;
    while (start < text.size() && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) ++start;
    return std::string(text.substr(start));
}

namespace {

using nlohmann::json;

json parse_line(std::string_view line)
{
    try {
        json j = json::parse(line);
        if (!j.is_object()) throw Error(ErrorCode::ParseError, "protocol line is not an object");
        return j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, fmt::format("bad protocol line: {}", e.what()));
    }
}

std::string required_string(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw Error(ErrorCode::ParseError, fmt::format("missing string '{}'", key));
    return it->get<std::string>();
}

std::string optional_string(const json& j, const char* key)
{
    auto it = j.find(key);
    return it != j.end() && it->is_string() ? it->get<std::string>() : std::string();
}

}  // namespace

std::string encode_request(const HarnessRequest& r)
{
    return json{{"id", r.id}, {"engine", r.engine}, {"code", r.code}, {"timeout_s", r.timeout_s}, {"out_path", r.out_path}}
        .dump();
}

std::string encode_response(const HarnessResponse& r)
{
    json j{{"id", r.id},
           {"status", r.status},
           {"stderr_tail", r.stderr_tail},
           {"wall_ms", r.wall_ms}};
    j["error_class"] = r.error_class == ErrorClass::None ? json(nullptr) : json(std::string(to_string(r.error_class)));
    j["image_path"] = r.image_path.empty() ? json(nullptr) : json(r.image_path);
    return j.dump();
}

HarnessRequest decode_request(std::string_view line)
{
    json j = parse_line(line);
    HarnessRequest r;
    r.id = required_string(j, "id");
    r.engine = required_string(j, "engine");
    r.code = required_string(j, "code");
    r.out_path = required_string(j, "out_path");
    auto t = j.find("timeout_s");
    if (t == j.end() || !t->is_number() || t->get<double>() <= 0) {
        throw Error(ErrorCode::ParseError, "timeout_s must be a positive number");
    }
    r.timeout_s = t->get<double>();
    return r;
}

HarnessResponse decode_response(std::string_view line)
{
    json j = parse_line(line);
    HarnessResponse r;
    r.id = required_string(j, "id");
    r.status = required_string(j, "status");
    if (r.status != "success" && r.status != "failure") {
        throw Error(ErrorCode::ParseError, fmt::format("unknown status '{}'", r.status));
    }
    auto ec = j.find("error_class");
    if (ec != j.end() && ec->is_string()) {
        auto cls = parse_error_class(ec->get<std::string>());
        r.error_class = cls.value_or(ErrorClass::Other);
    } else if (r.status == "failure") {
        r.error_class = ErrorClass::Other;
    }
    r.stderr_tail = tail_bytes(optional_string(j, "stderr_tail"));
    r.image_path = optional_string(j, "image_path");
    auto wall = j.find("wall_ms");
    if (wall != j.end() && wall->is_number()) r.wall_ms = wall->get<std::int64_t>();
    return r;
}

ErrorClassifier ErrorClassifier::parse(std::string_view tsv)
{
    ErrorClassifier c;
    std::size_t number = 0;
    for (const auto& raw : split(tsv, '\n')) {
        ++number;
        if (trim(raw).empty() || raw[0] == '#') continue;
        auto tab = raw.find('\t');
        if (tab == std::string::npos) {
            throw Error(ErrorCode::CatalogInvalid, fmt::format("error_classes.tsv:{}: expected class<TAB>regex", number));
        }
        auto cls = parse_error_class(trim(raw.substr(0, tab)));
        if (!cls || *cls == ErrorClass::None) {
            throw Error(ErrorCode::CatalogInvalid, fmt::format("error_classes.tsv:{}: unknown class", number));
        }
        std::string pattern = raw.substr(tab + 1);
        if (!pattern.empty() && pattern.back() == '\r') pattern.pop_back();
        try {
            c.rules_.emplace_back(*cls, std::regex(pattern, std::regex::ECMAScript));
        } catch (const std::regex_error& e) {
            throw Error(ErrorCode::CatalogInvalid, fmt::format("error_classes.tsv:{}: {}", number, e.what()));
        }
    }
    return c;
}

const ErrorClassifier& ErrorClassifier::bundled()
{
    static const ErrorClassifier instance = parse(require_asset("assets/error_classes.tsv"));
    return instance;
}

ErrorClass ErrorClassifier::classify(std::string_view stderr_text) const
{
    const std::string text(stderr_text);
    for (const auto& [cls, re] : rules_) {
        if (std::regex_search(text, re)) return cls;
    }
    return ErrorClass::Other;
}

HarnessHandle::HarnessHandle(std::vector<std::string> argv, std::chrono::milliseconds grace)
    : argv_(std::move(argv)), grace_(grace)
{
    spawn();
}

HarnessHandle::~HarnessHandle() = default;

void HarnessHandle::spawn()
{
    if (proc_) {
        proc_->kill();
        ++restarts_;
    }
    proc_ = std::make_unique<Subprocess>(argv_);
}

HarnessResponse HarnessHandle::call(const HarnessRequest& request)
{
    const std::string line = encode_request(request);
    const auto budget = std::chrono::milliseconds(static_cast<std::int64_t>(request.timeout_s * 1000.0)) + grace_;
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (!proc_ || !proc_->alive()) spawn();
        bool died = !proc_->write_line(line);
        const auto deadline = std::chrono::steady_clock::now() + budget;
        while (!died) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
            std::string reply;
            auto status = proc_->read_line(reply, std::max(left, std::chrono::milliseconds(0)));
            if (status == Subprocess::ReadStatus::Eof) {
                died = true;
                break;
            }
            if (status == Subprocess::ReadStatus::Timeout) {
                spawn();
                HarnessResponse r;
                r.id = request.id;
                r.status = "failure";
                r.error_class = ErrorClass::Timeout;
                r.stderr_tail = fmt::format("harness worker timed out after {} ms", budget.count());
                r.wall_ms = budget.count();
                return r;
            }
            try {
                HarnessResponse r = decode_response(reply);
                if (r.id == request.id) return r;
            } catch (const Error&) {
                // Stray output from the worker; keep reading.
            }
        }
        spawn();
    }
    throw Error(ErrorCode::HarnessUnavailable,
                fmt::format("harness worker exited twice while handling request {}", request.id));
}

HarnessPool::HarnessPool(std::vector<std::string> argv, int size, std::chrono::milliseconds grace)
{
    if (size < 1) throw Error(ErrorCode::ConfigInvalid, "harness pool needs at least one worker");
    for (int i = 0; i < size; ++i) workers_.push_back(std::make_unique<HarnessHandle>(argv, grace));
    busy_.assign(workers_.size(), false);
}

HarnessPool::~HarnessPool() = default;

HarnessPool::Lease::~Lease()
{
    if (pool_) pool_->release(slot_);
}

HarnessHandle& HarnessPool::Lease::operator*() const
{
    return *pool_->workers_[slot_];
}

HarnessPool::Lease HarnessPool::lease()
{
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_use_ < size(); });
    std::size_t slot = 0;
    while (busy_[slot]) ++slot;
    busy_[slot] = true;
    ++in_use_;
    peak_ = std::max(peak_, in_use_);
    return Lease(*this, slot);
}

int HarnessPool::peak_in_use() const
{
    std::lock_guard lock(mu_);
    return peak_;
}

void HarnessPool::release(std::size_t slot)
{
    {
        std::lock_guard lock(mu_);
        busy_[slot] = false;
        --in_use_;
    }
    cv_.notify_one();
}

}  // namespace synchart
