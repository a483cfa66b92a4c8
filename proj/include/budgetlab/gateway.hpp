#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace budgetlab {

enum class Role { system, user, assistant };

struct Message {
    Role role = Role::user;
    std::string content;
};

struct GenerationRequest {
    std::string model;
    std::vector<Message> messages;  // at least one
    std::optional<int> max_tokens;
    std::optional<double> temperature;
    std::string request_id;  // caller-chosen tag, carried into transcripts
};

enum class FinishReason { stop, length, error };

struct GenerationResponse {
    std::string text;
    long long completion_tokens = 0;
    long long reasoning_tokens = 0;
    FinishReason finish_reason = FinishReason::stop;
    int attempts = 1;  // attempts the gateway spent to obtain this response
};

// One attempt against some completion provider. Implementations throw
// RetryableError for transient trouble and let the gateway wrapper retry.
class Backend {
  public:
    virtual ~Backend() = default;
    virtual GenerationResponse perform(const GenerationRequest& request) = 0;
};

// Connection settings for an OpenAI-style chat-completions endpoint.
struct BackendConfig {
    std::string base_url;  // e.g. https://api.example.com/v1
    std::string model;
    std::string api_key_env = "OPENAI_API_KEY";  // env var holding the bearer token
    double timeout_seconds = 120.0;
    int max_attempts = 5;
    int backoff_base_ms = 1000;
    double backoff_factor = 2.0;
    double jitter = 0.2;  // +-20% randomization of each backoff delay
    int concurrency = 4;  // in-flight request cap enforced by the gateway
};

// POSTs {base_url}/chat/completions with a bearer token read from the
// configured environment variable. 429 and 5xx statuses, timeouts, and
// connection drops surface as RetryableError; other 4xx as RequestError;
// unparseable bodies as ProtocolError.
class HttpBackend : public Backend {
  public:
    explicit HttpBackend(BackendConfig config);

    GenerationResponse perform(const GenerationRequest& request) override;

  private:
    BackendConfig config_;
    std::string host_;         // scheme://authority
    std::string path_prefix_;  // path portion of base_url, no trailing slash
    std::string api_key_;
};

// One scripted reply (or failure) of the mock backend. Rules with
// `match_substring` are persistent: any prompt containing the substring is
// served by the first such rule forever. Rules without a matcher are consumed
// one per call, in order.
struct ScriptRule {
    std::optional<std::string> match_substring;
    std::string response_text;
    std::optional<int> completion_tokens;  // default: whitespace token count of the text
    int reasoning_tokens = 0;
    FinishReason finish_reason = FinishReason::stop;
    std::optional<int> fail_status;  // serve a RetryableError with this status instead
};

// Deterministic in-memory backend for tests and dry runs. Thread-safe; keeps
// a verbatim transcript of every prompt it receives.
class MockBackend : public Backend {
  public:
    explicit MockBackend(std::vector<ScriptRule> script);

    GenerationResponse perform(const GenerationRequest& request) override;

    // Prompt text per call (messages joined by newlines), in arrival order.
    std::vector<std::string> transcript() const;
    int calls() const;

  private:
    mutable std::mutex mutex_;
    std::vector<ScriptRule> matchers_;
    std::deque<ScriptRule> sequence_;
    std::vector<std::string> transcript_;
};

struct RetryPolicy {
    int max_attempts = 5;
    int backoff_base_ms = 1000;
    double backoff_factor = 2.0;
    double jitter = 0.2;
};

// Retry loop, concurrency gate, and token accounting around a Backend.
// generate() retries RetryableError with exponential backoff and rethrows
// TransportError once attempts are exhausted. Billed completion tokens
// accumulate across all successful calls.
class Gateway {
  public:
    explicit Gateway(Backend& backend, RetryPolicy policy = {}, int max_in_flight = 4);

    GenerationResponse generate(const GenerationRequest& request);

    long long total_completion_tokens() const { return total_tokens_.load(); }

  private:
    void acquire();
    void release();

    Backend* backend_;
    RetryPolicy policy_;
    int max_in_flight_;
    int in_flight_ = 0;
    std::mutex slot_mutex_;
    std::condition_variable slot_free_;
    std::atomic<long long> total_tokens_{0};
    std::mutex rng_mutex_;
    std::mt19937 rng_{0x9e3779b9};
};

// Helpers shared by the harness and tests.
RetryPolicy retry_policy_from(const BackendConfig& config);
long long whitespace_token_count(const std::string& text);

}  // namespace budgetlab
