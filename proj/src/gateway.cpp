#include "budgetlab/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "budgetlab/errors.hpp"

namespace budgetlab {

namespace {

const char* role_name(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "user";
}

void check_request(const GenerationRequest& request) {
    if (request.messages.empty())
        throw DomainError("generate: request must carry at least one message");
    if (request.max_tokens.has_value() && *request.max_tokens < 1)
        throw DomainError("generate: max_tokens must be positive when set");
}

std::string joined_prompt(const GenerationRequest& request) {
    std::string prompt;
    for (const auto& message : request.messages) {
        if (!prompt.empty()) prompt.push_back('\n');
        prompt += message.content;
    }
    return prompt;
}

bool is_retryable_status(int status) { return status == 429 || (status >= 500 && status < 600); }

}  // namespace

long long whitespace_token_count(const std::string& text) {
    long long count = 0;
    bool in_token = false;
    for (char ch : text) {
        const bool space = std::isspace(static_cast<unsigned char>(ch)) != 0;
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

RetryPolicy retry_policy_from(const BackendConfig& config) {
    RetryPolicy policy;
    policy.max_attempts = config.max_attempts;
    policy.backoff_base_ms = config.backoff_base_ms;
    policy.backoff_factor = config.backoff_factor;
    policy.jitter = config.jitter;
    return policy;
}

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw DomainError("HttpBackend: base_url must be set");

    // Split scheme://authority from the optional path prefix.
    const size_t scheme_end = config_.base_url.find("://");
    const size_t path_start =
        config_.base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        host_ = config_.base_url;
    } else {
        host_ = config_.base_url.substr(0, path_start);
        path_prefix_ = config_.base_url.substr(path_start);
    }
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();

    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
}

GenerationResponse HttpBackend::perform(const GenerationRequest& request) {
    check_request(request);

    nlohmann::json body;
    body["model"] = request.model.empty() ? config_.model : request.model;
    body["messages"] = nlohmann::json::array();
    for (const auto& message : request.messages)
        body["messages"].push_back({{"role", role_name(message.role)},
                                    {"content", message.content}});
    if (request.max_tokens.has_value()) body["max_tokens"] = *request.max_tokens;
    if (request.temperature.has_value()) body["temperature"] = *request.temperature;

    httplib::Client client(host_);
    const auto timeout = std::chrono::milliseconds(
        static_cast<long long>(config_.timeout_seconds * 1000.0));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    const auto result = client.Post(path_prefix_ + "/chat/completions", headers, body.dump(),
                                    "application/json");
    if (!result)
        throw RetryableError("connection failure: " + httplib::to_string(result.error()), 0);

    const int status = result->status;
    if (status != 200) {
        const std::string detail = "HTTP " + std::to_string(status) + " from " + host_;
        if (is_retryable_status(status)) throw RetryableError(detail, status);
        throw RequestError(detail + ": " + result->body.substr(0, 512), status);
    }

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("response body is not JSON: ") + e.what());
    }

    GenerationResponse response;
    try {
        const auto& choice = doc.at("choices").at(0);
        response.text = choice.at("message").at("content").get<std::string>();
        if (choice.contains("finish_reason") && choice["finish_reason"].is_string() &&
            choice["finish_reason"].get<std::string>() == "length")
            response.finish_reason = FinishReason::length;
        const auto& usage = doc.at("usage");
        response.completion_tokens = usage.at("completion_tokens").get<long long>();
        if (usage.contains("completion_tokens_details")) {
            const auto& details = usage["completion_tokens_details"];
            if (details.contains("reasoning_tokens") && details["reasoning_tokens"].is_number())
                response.reasoning_tokens = details["reasoning_tokens"].get<long long>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("response body missing required fields: ") + e.what());
    }
    if (response.completion_tokens < 0)
        throw ProtocolError("response reports a negative completion_tokens");
    return response;
}

MockBackend::MockBackend(std::vector<ScriptRule> script) {
    for (auto& rule : script) {
        if (rule.match_substring.has_value())
            matchers_.push_back(std::move(rule));
        else
            sequence_.push_back(std::move(rule));
    }
}

GenerationResponse MockBackend::perform(const GenerationRequest& request) {
    check_request(request);
    const std::string prompt = joined_prompt(request);

    ScriptRule rule;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        transcript_.push_back(prompt);

        const auto hit = std::find_if(matchers_.begin(), matchers_.end(), [&](const auto& r) {
            return prompt.find(*r.match_substring) != std::string::npos;
        });
        if (hit != matchers_.end()) {
            rule = *hit;
        } else if (!sequence_.empty()) {
            rule = std::move(sequence_.front());
            sequence_.pop_front();
        } else {
            throw ScriptExhaustedError("mock backend: no rule left for prompt: " +
                                       prompt.substr(0, 120));
        }
    }

    if (rule.fail_status.has_value())
        throw RetryableError("mock backend: scripted failure", *rule.fail_status);

    GenerationResponse response;
    response.text = rule.response_text;
    response.completion_tokens = rule.completion_tokens.has_value()
                                     ? *rule.completion_tokens
                                     : whitespace_token_count(rule.response_text);
    response.reasoning_tokens = rule.reasoning_tokens;
    response.finish_reason = rule.finish_reason;
    return response;
}

std::vector<std::string> MockBackend::transcript() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return transcript_;
}

int MockBackend::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<int>(transcript_.size());
}

Gateway::Gateway(Backend& backend, RetryPolicy policy, int max_in_flight)
    : backend_(&backend), policy_(policy), max_in_flight_(max_in_flight) {
    if (policy_.max_attempts < 1) throw DomainError("Gateway: max_attempts must be at least 1");
    if (max_in_flight_ < 1) throw DomainError("Gateway: concurrency must be at least 1");
}

void Gateway::acquire() {
    std::unique_lock<std::mutex> lock(slot_mutex_);
    slot_free_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
    ++in_flight_;
}

void Gateway::release() {
    {
        std::lock_guard<std::mutex> lock(slot_mutex_);
        --in_flight_;
    }
    slot_free_.notify_one();
}

GenerationResponse Gateway::generate(const GenerationRequest& request) {
    check_request(request);
    acquire();
    struct SlotGuard {
        Gateway* self;
        ~SlotGuard() { self->release(); }
    } guard{this};

    int last_status = 0;
    std::string last_message;
    for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
        try {
            GenerationResponse response = backend_->perform(request);
            response.attempts = attempt;
            total_tokens_.fetch_add(response.completion_tokens);
            return response;
        } catch (const RetryableError& e) {
            last_status = e.status;
            last_message = e.what();
            if (attempt == policy_.max_attempts) break;

            double delay_ms = policy_.backoff_base_ms *
                              std::pow(policy_.backoff_factor, attempt - 1);
            if (policy_.jitter > 0.0) {
                std::lock_guard<std::mutex> lock(rng_mutex_);
                std::uniform_real_distribution<double> spread(-policy_.jitter, policy_.jitter);
                delay_ms *= 1.0 + spread(rng_);
            }
            if (delay_ms > 0.0)
                std::this_thread::sleep_for(
                    std::chrono::microseconds(static_cast<long long>(delay_ms * 1000.0)));
        }
    }
    throw TransportError("generate: retries exhausted: " + last_message, last_status,
                         policy_.max_attempts);
}

}  // namespace budgetlab
