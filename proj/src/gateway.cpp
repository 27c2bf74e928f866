// SPDX-License-Identifier: Apache-2.0
#include "mgv/gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace mgv {
namespace {

int whitespace_tokens(const std::string& text) {
    std::stringstream ss(text);
    std::string tok;
    int n = 0;
    while (ss >> tok) ++n;
    return n;
}

// "http://host:8000/v1" -> {"http://host:8000", "/v1"}
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    size_t scheme = base_url.find("://");
    size_t path = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path), prefix};
}

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

CompletionResponse parse_chat_response(const std::string& body, const std::string& prompt) {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) {
        throw ProtocolError("response body is not JSON: " + body.substr(0, 200));
    }
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
        throw ProtocolError("response has no choices: " + body.substr(0, 200));
    }
    const auto& choice = j["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
        throw ProtocolError("first choice has no message content");
    }
    CompletionResponse resp;
    resp.text = choice["message"]["content"].get<std::string>();
    if (j.contains("usage") && j["usage"].is_object()) {
        resp.prompt_tokens = j["usage"].value("prompt_tokens", 0);
        resp.completion_tokens = j["usage"].value("completion_tokens", 0);
    } else {
        resp.prompt_tokens = whitespace_tokens(prompt);
        resp.completion_tokens = whitespace_tokens(resp.text);
    }
    return resp;
}

} // namespace

void validate_request(const CompletionRequest& request) {
    if (request.max_tokens < 1) {
        throw ValidationError("max_tokens must be >= 1, got " +
                              std::to_string(request.max_tokens));
    }
    if (request.temperature < 0.0 || request.temperature > 2.0) {
        throw ValidationError("temperature must be within [0, 2], got " +
                              std::to_string(request.temperature));
    }
}

CompletionResponse complete(const BackendConfig& config, const CompletionRequest& request) {
    validate_request(request);
    if (config.base_url.empty()) {
        throw ValidationError("backend base_url is empty");
    }

    const auto [origin, path_prefix] = split_base_url(config.base_url);
    const std::string path = path_prefix + "/chat/completions";
    const std::string model =
        request.model_name.empty() ? config.model_name : request.model_name;

    const nlohmann::json payload = {
        {"model", model},
        {"messages", {{{"role", "user"}, {"content", request.prompt}}}},
        {"max_tokens", request.max_tokens},
        {"temperature", request.temperature},
    };
    const std::string body = payload.dump();

    httplib::Headers headers;
    if (!config.api_key_env.empty()) {
        if (const char* key = std::getenv(config.api_key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    const auto start = std::chrono::steady_clock::now();
    std::string last_failure;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(config.retry_backoff * (1 << (attempt - 1)));
        }
        httplib::Client client(origin);
        const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(
            config.request_timeout);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        auto res = client.Post(path, headers, body, "application/json");
        if (!res) {
            last_failure = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            throw AuthError("authentication rejected (HTTP " +
                            std::to_string(res->status) + ")");
        }
        if (retryable_status(res->status)) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw ProtocolError("HTTP " + std::to_string(res->status) + ": " +
                                res->body.substr(0, 200));
        }
        CompletionResponse resp = parse_chat_response(res->body, request.prompt);
        resp.latency_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return resp;
    }
    throw TransportError("request failed after " + std::to_string(config.max_retries + 1) +
                         " attempts; last failure: " + last_failure);
}

CompletionResponse mock_complete(MockScript& script, const CompletionRequest& request) {
    validate_request(request);
    const auto start = std::chrono::steady_clock::now();
    if (script.next >= script.steps.size()) {
        throw ScriptExhausted("mock script exhausted after " +
                              std::to_string(script.steps.size()) + " steps");
    }
    const MockStep& step = script.steps[script.next];
    if (request.prompt.find(step.matcher) == std::string::npos && script.strict) {
        throw MatcherMismatch("step " + std::to_string(script.next) + " matcher \"" +
                              step.matcher + "\" not found in prompt");
    }
    ++script.next;
    CompletionResponse resp;
    resp.text = step.response;
    resp.prompt_tokens = whitespace_tokens(request.prompt);
    resp.completion_tokens = whitespace_tokens(step.response);
    resp.latency_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return resp;
}

} // namespace mgv
