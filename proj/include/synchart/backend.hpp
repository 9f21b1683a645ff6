#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace synchart {

/// Text-generation service: request(prompt, max tokens, temperature) -> text.
class TextGenBackend {
public:
    virtual ~TextGenBackend() = default;
    virtual std::string id() const = 0;
    /// True for the built-in deterministic generator, which never sees prompts.
    virtual bool is_template() const { return false; }
    virtual std::string request(const std::string& prompt, int max_tokens, double temperature) = 0;
};

class TemplateBackend final : public TextGenBackend {
public:
    std::string id() const override { return "template"; }
    bool is_template() const override { return true; }
    std::string request(const std::string& prompt, int max_tokens, double temperature) override;
};

struct HttpBackendOptions {
    std::string endpoint;  // http(s)://host[:port]/path
    std::string token_env = "SYNCHART_LLM_TOKEN";
    int max_retries = 4;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::seconds timeout{120};
    int max_in_flight = 4;
};

/// Client for a text-generation HTTP service.
///
/// POSTs {"prompt", "max_tokens", "temperature"} as JSON with a bearer token
/// read from the environment. Accepts {"text": ...}, {"choices":[{"text"}]} or
/// {"choices":[{"message":{"content"}}]}. Transport errors, 429 and 5xx are
/// retried with exponential backoff; other 4xx fail at once.
class HttpTextGenBackend final : public TextGenBackend {
public:
    explicit HttpTextGenBackend(HttpBackendOptions options);
    ~HttpTextGenBackend() override;

    std::string id() const override { return "llm"; }
    std::string request(const std::string& prompt, int max_tokens, double temperature) override;

    int requests_sent() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::unique_ptr<TextGenBackend> make_backend(std::string_view kind, const std::string& endpoint);

/// Text between `<tag start>` and `<tag end>`; throws BackendFailure when absent.
std::string extract_wrapped(std::string_view response, std::string_view tag);

/// Prompt text from assets/prompts/<name>.txt with {key} placeholders filled.
std::string fill_prompt(std::string_view name, const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace synchart
