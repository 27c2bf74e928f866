// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "mgv/errors.hpp"

namespace mgv {

struct CompletionRequest {
    std::string prompt;
    int max_tokens = 1;
    double temperature = 0.0;
    std::string model_name; // empty: backend config supplies the model
};

struct CompletionResponse {
    std::string text;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    double latency_s = 0.0;
};

struct BackendConfig {
    std::string base_url;
    std::string api_key_env = "OPENAI_API_KEY";
    std::string model_name;
    std::chrono::milliseconds request_timeout{120000};
    int max_retries = 3;
    std::chrono::milliseconds retry_backoff{500};
};

// One scripted exchange: `matcher` must occur in the prompt for the step to apply.
struct MockStep {
    std::string matcher;
    std::string response;
};

struct MockScript {
    std::vector<MockStep> steps;
    bool strict = true;
    size_t next = 0; // cursor; steps are consumed in order
};

// Throws ValidationError when request invariants are violated
// (max_tokens >= 1, temperature in [0,2]).
void validate_request(const CompletionRequest& request);

// Sends the prompt as a single user message to {base_url}/chat/completions.
// Transient failures (transport, HTTP 5xx/429) are retried up to
// config.max_retries with exponential backoff; 401/403 raise AuthError
// without retry; malformed bodies raise ProtocolError. latency_s covers the
// whole attempt chain.
CompletionResponse complete(const BackendConfig& config, const CompletionRequest& request);

// Consumes the next script step. Token counts are synthesized as whitespace
// token counts. Throws ScriptExhausted, and MatcherMismatch in strict mode.
CompletionResponse mock_complete(MockScript& script, const CompletionRequest& request);

// Completion interface shared by the controller, baselines and harness.
// Implementations must tolerate concurrent calls.
class Backend {
public:
    virtual ~Backend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

class HttpBackend : public Backend {
public:
    explicit HttpBackend(BackendConfig config) : config_(std::move(config)) {}
    CompletionResponse complete(const CompletionRequest& request) override {
        return mgv::complete(config_, request);
    }
    const BackendConfig& config() const { return config_; }

private:
    BackendConfig config_;
};

// Deterministic scripted backend. Cursor advancement is serialized; keeps a
// prompt/response log so tests can replay the exact call sequence.
class MockBackend : public Backend {
public:
    explicit MockBackend(MockScript script) : script_(std::move(script)) {}

    CompletionResponse complete(const CompletionRequest& request) override {
        std::lock_guard<std::mutex> lock(mu_);
        CompletionResponse resp = mock_complete(script_, request);
        calls_.emplace_back(request.prompt, resp.text);
        return resp;
    }

    std::vector<std::pair<std::string, std::string>> calls() const {
        std::lock_guard<std::mutex> lock(mu_);
        return calls_;
    }
    size_t call_count() const {
        std::lock_guard<std::mutex> lock(mu_);
        return calls_.size();
    }
    size_t remaining_steps() const {
        std::lock_guard<std::mutex> lock(mu_);
        return script_.steps.size() - script_.next;
    }

private:
    MockScript script_;
    mutable std::mutex mu_;
    std::vector<std::pair<std::string, std::string>> calls_;
};

} // namespace mgv
