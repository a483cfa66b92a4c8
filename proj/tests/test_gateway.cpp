#include <atomic>
#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "budgetlab/errors.hpp"
#include "budgetlab/gateway.hpp"

using namespace budgetlab;

namespace {

GenerationRequest simple_request(const std::string& text) {
    GenerationRequest request;
    request.model = "test-model";
    request.messages = {{Role::user, text}};
    return request;
}

RetryPolicy fast_retry(int max_attempts) {
    RetryPolicy policy;
    policy.max_attempts = max_attempts;
    policy.backoff_base_ms = 0;  // no sleeping in unit tests
    return policy;
}

// Serves canned status/body pairs in order; repeats the last one when the
// script runs out.
struct StubServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> calls{0};
    std::vector<std::pair<int, std::string>> replies;
    std::string last_body;
    httplib::Headers last_headers;

    explicit StubServer(std::vector<std::pair<int, std::string>> scripted)
        : replies(std::move(scripted)) {
        server.Post("/v1/chat/completions",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        const int index = calls.fetch_add(1);
                        last_body = req.body;
                        last_headers = req.headers;
                        const auto& reply =
                            replies[std::min<size_t>(index, replies.size() - 1)];
                        res.status = reply.first;
                        res.set_content(reply.second, "application/json");
                    });
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~StubServer() {
        server.stop();
        thread.join();
    }

    BackendConfig config() const {
        BackendConfig backend;
        backend.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
        backend.model = "stub-model";
        backend.api_key_env = "BUDGETLAB_TEST_KEY";
        return backend;
    }
};

std::string ok_body(const std::string& text, int completion_tokens) {
    nlohmann::json body{
        {"choices",
         {{{"message", {{"role", "assistant"}, {"content", text}}},
           {"finish_reason", "stop"}}}},
        {"usage", {{"completion_tokens", completion_tokens}}},
    };
    return body.dump();
}

}  // namespace

TEST_CASE("whitespace token counting") {
    CHECK(whitespace_token_count("") == 0);
    CHECK(whitespace_token_count("   ") == 0);
    CHECK(whitespace_token_count("one") == 1);
    CHECK(whitespace_token_count("  spread\tout\n\nwords  ") == 3);
}

TEST_CASE("mock backend consumes sequence rules in order") {
    MockBackend mock({
        {std::nullopt, "first", 10, 0, FinishReason::stop, std::nullopt},
        {std::nullopt, "second", std::nullopt, 0, FinishReason::stop, std::nullopt},
    });
    CHECK(mock.perform(simple_request("a")).text == "first");
    const auto second = mock.perform(simple_request("b"));
    CHECK(second.text == "second");
    CHECK(second.completion_tokens == 1);  // defaults to the whitespace token count
    CHECK_THROWS_AS(mock.perform(simple_request("c")), ScriptExhaustedError);
    CHECK(mock.calls() == 3);
    CHECK(mock.transcript() == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("mock backend matcher rules persist and win over sequence rules") {
    MockBackend mock({
        {std::string("magic"), "matched", 7, 0, FinishReason::stop, std::nullopt},
        {std::nullopt, "fallback", 1, 0, FinishReason::stop, std::nullopt},
    });
    CHECK(mock.perform(simple_request("some magic here")).text == "matched");
    CHECK(mock.perform(simple_request("magic again")).text == "matched");
    CHECK(mock.perform(simple_request("nothing special")).text == "fallback");
}

TEST_CASE("gateway retries scripted transient failures and counts attempts") {
    MockBackend mock({
        {std::nullopt, "", std::nullopt, 0, FinishReason::stop, 429},
        {std::nullopt, "", std::nullopt, 0, FinishReason::stop, 503},
        {std::nullopt, "recovered", 5, 0, FinishReason::stop, std::nullopt},
    });
    Gateway gateway(mock, fast_retry(5), 2);
    const auto response = gateway.generate(simple_request("try hard"));
    CHECK(response.text == "recovered");
    CHECK(response.attempts == 3);
    CHECK(mock.calls() == 3);
    CHECK(gateway.total_completion_tokens() == 5);
}

TEST_CASE("gateway surfaces exhausted retries as a transport failure") {
    MockBackend mock({
        {std::nullopt, "", std::nullopt, 0, FinishReason::stop, 429},
        {std::nullopt, "", std::nullopt, 0, FinishReason::stop, 429},
    });
    Gateway gateway(mock, fast_retry(2), 1);
    try {
        gateway.generate(simple_request("doomed"));
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(e.status == 429);
        CHECK(e.attempts == 2);
    }
    CHECK(gateway.total_completion_tokens() == 0);
}

TEST_CASE("gateway caps in-flight requests") {
    // A backend that records how many callers are inside it at once.
    struct GaugeBackend : Backend {
        std::atomic<int> inside{0};
        std::atomic<int> peak{0};
        GenerationResponse perform(const GenerationRequest&) override {
            const int now = ++inside;
            int seen = peak.load();
            while (now > seen && !peak.compare_exchange_weak(seen, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
            --inside;
            return {"ok", 1, 0, FinishReason::stop, 1};
        }
    } backend;

    Gateway gateway(backend, fast_retry(1), 2);
    std::vector<std::thread> callers;
    for (int i = 0; i < 8; ++i)
        callers.emplace_back([&] { gateway.generate(simple_request("x")); });
    for (auto& t : callers) t.join();
    CHECK(backend.peak.load() <= 2);
    CHECK(gateway.total_completion_tokens() == 8);
}

TEST_CASE("gateway and requests validate their inputs") {
    MockBackend mock({});
    CHECK_THROWS_AS(Gateway(mock, fast_retry(0), 1), DomainError);
    CHECK_THROWS_AS(Gateway(mock, fast_retry(1), 0), DomainError);
    Gateway gateway(mock, fast_retry(1), 1);
    GenerationRequest empty;
    CHECK_THROWS_AS(gateway.generate(empty), DomainError);
    GenerationRequest bad_max = simple_request("x");
    bad_max.max_tokens = 0;
    CHECK_THROWS_AS(gateway.generate(bad_max), DomainError);
}

TEST_CASE("retry policy is lifted from the backend settings") {
    BackendConfig backend;
    backend.max_attempts = 7;
    backend.backoff_base_ms = 250;
    backend.backoff_factor = 3.0;
    backend.jitter = 0.1;
    const RetryPolicy policy = retry_policy_from(backend);
    CHECK(policy.max_attempts == 7);
    CHECK(policy.backoff_base_ms == 250);
    CHECK(policy.backoff_factor == 3.0);
    CHECK(policy.jitter == 0.1);
}

TEST_CASE("http backend rejects a missing base_url") {
    CHECK_THROWS_AS(HttpBackend(BackendConfig{}), DomainError);
}

TEST_CASE("http backend surfaces non-retryable statuses as request failures") {
    StubServer stub({{400, R"({"error": "bad request"})"}});
    HttpBackend backend(stub.config());
    try {
        backend.perform(simple_request("hello"));
        FAIL("expected RequestError");
    } catch (const RequestError& e) {
        CHECK(e.status == 400);
    }
}

TEST_CASE("http backend treats 429 and 5xx as retryable") {
    StubServer stub({{429, "slow down"}, {503, "buckle up"}});
    HttpBackend backend(stub.config());
    CHECK_THROWS_AS(backend.perform(simple_request("x")), RetryableError);
    CHECK_THROWS_AS(backend.perform(simple_request("x")), RetryableError);
}

TEST_CASE("http backend rejects bodies without the required fields") {
    StubServer stub({
        {200, "this is not json"},
        {200, R"({"choices": []})"},
        {200, R"({"choices": [{"message": {"content": "hi"}}]})"},  // no usage
    });
    HttpBackend backend(stub.config());
    CHECK_THROWS_AS(backend.perform(simple_request("x")), ProtocolError);
    CHECK_THROWS_AS(backend.perform(simple_request("x")), ProtocolError);
    CHECK_THROWS_AS(backend.perform(simple_request("x")), ProtocolError);
}

TEST_CASE("http backend sends no auth header when the key variable is unset") {
    ::unsetenv("BUDGETLAB_TEST_KEY");
    StubServer stub({{200, ok_body("fine", 3)}});
    HttpBackend backend(stub.config());
    const auto response = backend.perform(simple_request("ping"));
    CHECK(response.text == "fine");
    CHECK(response.completion_tokens == 3);
    CHECK(stub.last_headers.find("Authorization") == stub.last_headers.end());
}
