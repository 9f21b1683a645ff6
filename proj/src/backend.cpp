#include "synchart/backend.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "synchart/catalog.hpp"
#include "synchart/error.hpp"

namespace synchart {

std::string TemplateBackend::request(const std::string&, int, double)
{
    throw Error(ErrorCode::BackendFailure, "the template backend does not take prompts");
}

struct HttpTextGenBackend::Impl {
    HttpBackendOptions options;
    std::string base;  // scheme://host[:port]
    std::string path;
    std::mutex mu;
    std::condition_variable cv;
    int in_flight = 0;
    std::atomic<int> sent{0};

    void acquire()
    {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return in_flight < std::max(1, options.max_in_flight); });
        ++in_flight;
    }

    void release()
    {
        {
            std::lock_guard lock(mu);
            --in_flight;
        }
        cv.notify_one();
    }
};

namespace {

std::string response_text(const std::string& body)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BackendFailure, fmt::format("response is not JSON: {}", e.what()));
    }
    if (j.contains("text") && j["text"].is_string()) return j["text"].get<std::string>();
    if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
        const auto& c = j["choices"][0];
        if (c.contains("text") && c["text"].is_string()) return c["text"].get<std::string>();
        if (c.contains("message") && c["message"].contains("content") && c["message"]["content"].is_string()) {
            return c["message"]["content"].get<std::string>();
        }
    }
    throw Error(ErrorCode::BackendFailure, "response carries no text");
}

}  // namespace

HttpTextGenBackend::HttpTextGenBackend(HttpBackendOptions options) : impl_(std::make_unique<Impl>())
{
    impl_->options = std::move(options);
    const std::string& ep = impl_->options.endpoint;
    auto scheme = ep.find("://");
    if (scheme == std::string::npos) throw Error(ErrorCode::ConfigInvalid, fmt::format("bad endpoint '{}'", ep));
    auto slash = ep.find('/', scheme + 3);
    impl_->base = ep.substr(0, slash);
    impl_->path = slash == std::string::npos ? "/" : ep.substr(slash);
}

HttpTextGenBackend::~HttpTextGenBackend() = default;

int HttpTextGenBackend::requests_sent() const
{
    return impl_->sent.load();
}

std::string HttpTextGenBackend::request(const std::string& prompt, int max_tokens, double temperature)
{
    const auto& opt = impl_->options;
    const char* token = std::getenv(opt.token_env.c_str());
    httplib::Headers headers;
    if (token && *token) headers.emplace("Authorization", fmt::format("Bearer {}", token));
    const std::string body =
        nlohmann::json{{"prompt", prompt}, {"max_tokens", max_tokens}, {"temperature", temperature}}.dump();

    impl_->acquire();
    struct Release {
        Impl* impl;
        ~Release() { impl->release(); }
    } release{impl_.get()};

    auto backoff = opt.initial_backoff;
    std::string last;
    for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        httplib::Client client(impl_->base);
        client.set_connection_timeout(opt.timeout);
        client.set_read_timeout(opt.timeout);
        client.set_write_timeout(opt.timeout);
        ++impl_->sent;
        auto res = client.Post(impl_->path, headers, body, "application/json");
        if (!res) {
            last = fmt::format("transport error: {}", httplib::to_string(res.error()));
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last = fmt::format("HTTP {}", res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw Error(ErrorCode::BackendFailure, fmt::format("HTTP {}", res->status));
        }
        return response_text(res->body);
    }
    throw Error(ErrorCode::BackendFailure, fmt::format("giving up after {} attempts: {}", opt.max_retries + 1, last));
}

std::unique_ptr<TextGenBackend> make_backend(std::string_view kind, const std::string& endpoint)
{
    if (kind == "template") return std::make_unique<TemplateBackend>();
    if (kind == "llm") {
        if (endpoint.empty()) throw Error(ErrorCode::ConfigInvalid, "the llm backend needs an endpoint");
        HttpBackendOptions options;
        options.endpoint = endpoint;
        return std::make_unique<HttpTextGenBackend>(options);
    }
    throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown backend '{}'", kind));
}

std::string extract_wrapped(std::string_view response, std::string_view tag)
{
    const std::string open = fmt::format("<{} start>", tag);
    const std::string close = fmt::format("<{} end>", tag);
    auto b = response.find(open);
    if (b == std::string_view::npos) throw Error(ErrorCode::BackendFailure, fmt::format("missing {}", open));
    b += open.size();
    auto e = response.find(close, b);
    if (e == std::string_view::npos) throw Error(ErrorCode::BackendFailure, fmt::format("missing {}", close));
    return std::string(response.substr(b, e - b));
}

std::string fill_prompt(std::string_view name, const std::vector<std::pair<std::string, std::string>>& values)
{
    std::string text(require_asset(fmt::format("assets/prompts/{}.txt", name)));
    for (const auto& [key, value] : values) {
        const std::string slot = "{" + key + "}";
        for (auto pos = text.find(slot); pos != std::string::npos; pos = text.find(slot, pos + value.size())) {
            text.replace(pos, slot.size(), value);
        }
    }
    return text;
}

}  // namespace synchart
