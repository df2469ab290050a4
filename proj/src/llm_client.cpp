// Copyright 2026 The ScribeBench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scribebench/llm_client.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "scribebench/util.hpp"

namespace scribebench::llm {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::stop: return "stop";
    case FinishReason::length: return "length";
    case FinishReason::other: return "other";
  }
  return "other";
}

void ChatRequest::validate() const {
  if (messages.empty()) throw UsageError("chat request has no messages");
  if (messages.front().role == Role::assistant) {
    throw UsageError("chat request must start with a system or user message");
  }
  if (temperature < 0.0) throw UsageError("temperature must be >= 0");
  if (max_tokens < 1) throw UsageError("max_tokens must be positive");
  if (model.empty()) throw UsageError("chat request has no model");
}

void ClientConfig::validate() const {
  if (!(timeout_seconds > 0.0)) throw UsageError("client timeout must be > 0");
  if (max_concurrency < 1) throw UsageError("max_concurrency must be >= 1");
  if (max_retries < 0) throw UsageError("max_retries must be >= 0");
  if (backoff_base_seconds < 0.0) throw UsageError("backoff_base must be >= 0");
  http::parse_base_url(base_url);
}

Json ClientConfig::to_json() const {
  Json j;
  j["base_url"] = base_url;
  j["api_key_env"] = api_key_env_name;
  j["timeout_s"] = timeout_seconds;
  j["max_retries"] = max_retries;
  j["backoff_base_s"] = backoff_base_seconds;
  j["max_concurrency"] = max_concurrency;
  j["requests_per_minute"] = requests_per_minute;
  j["cache_dir"] = cache_dir.string();
  return j;
}

ClientConfig ClientConfig::from_json(const Json& j, ClientConfig c) {
  if (!j.is_object()) throw ValidationError("client config must be an object");
  for (const char* secret : {"api_key", "apiKey", "key", "token"}) {
    if (j.contains(secret)) {
      throw ValidationError(fmt::format(
          "client config contains \"{}\"; secrets are read only from the environment (set api_key_env)",
          secret));
    }
  }
  try {
    if (j.contains("base_url")) c.base_url = j["base_url"].get<std::string>();
    if (j.contains("api_key_env")) c.api_key_env_name = j["api_key_env"].get<std::string>();
    if (j.contains("timeout_s")) c.timeout_seconds = j["timeout_s"].get<double>();
    if (j.contains("max_retries")) c.max_retries = j["max_retries"].get<int>();
    if (j.contains("backoff_base_s")) c.backoff_base_seconds = j["backoff_base_s"].get<double>();
    if (j.contains("max_concurrency")) c.max_concurrency = j["max_concurrency"].get<size_t>();
    if (j.contains("requests_per_minute")) c.requests_per_minute = j["requests_per_minute"].get<size_t>();
    if (j.contains("cache_dir")) c.cache_dir = j["cache_dir"].get<std::string>();
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("client config: {}", e.what()));
  }
  return c;
}

std::string canonical_request(const ChatRequest& req) {
  Json j;
  j["model"] = req.model;
  Json msgs = Json::array();
  for (const auto& m : req.messages) {
    msgs.push_back(Json{{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  j["messages"] = std::move(msgs);
  j["temperature"] = req.temperature;
  j["max_tokens"] = req.max_tokens;
  j["seed"] = req.seed ? Json(*req.seed) : Json(nullptr);
  j["force_structured_output"] = req.force_structured_output;
  return jsonl::dump(j);
}

std::string cache_key(const ChatRequest& req) { return sha256_hex(canonical_request(req)); }

Json wire_body(const ChatRequest& req) {
  Json j;
  j["model"] = req.model;
  Json msgs = Json::array();
  for (const auto& m : req.messages) {
    msgs.push_back(Json{{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  j["messages"] = std::move(msgs);
  j["temperature"] = req.temperature;
  j["max_tokens"] = req.max_tokens;
  if (req.seed) j["seed"] = *req.seed;
  if (req.force_structured_output) j["response_format"] = Json{{"type", "json_object"}};
  return j;
}

ChatResponse parse_chat_response(const std::string& body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw RuntimeFailure("malformed chat response: body is not a JSON object");
  }
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty()) {
    throw RuntimeFailure("malformed chat response: missing choices[0]");
  }
  const Json& choice = (*choices)[0];
  ChatResponse out;
  std::string reason = choice.contains("finish_reason") && choice["finish_reason"].is_string()
                           ? choice["finish_reason"].get<std::string>()
                           : "";
  out.finish_reason = reason == "stop" ? FinishReason::stop
                      : reason == "length" ? FinishReason::length
                                           : FinishReason::other;
  const Json* content = nullptr;
  if (choice.contains("message") && choice["message"].is_object() &&
      choice["message"].contains("content")) {
    content = &choice["message"]["content"];
  }
  if (content && content->is_string()) {
    out.content = content->get<std::string>();
  } else if (out.finish_reason == FinishReason::stop) {
    throw RuntimeFailure("malformed chat response: finish_reason is stop but content is missing");
  }
  if (j.contains("usage") && j["usage"].is_object()) {
    const Json& usage = j["usage"];
    out.prompt_tokens = usage.value("prompt_tokens", int64_t{0});
    out.completion_tokens = usage.value("completion_tokens", int64_t{0});
  }
  return out;
}

ChatClient::ChatClient(ClientConfig config)
    : config_(std::move(config)),
      endpoint_(http::parse_base_url(config_.base_url)),
      cache_(config_.cache_dir),
      in_flight_(config_.max_concurrency),
      limiter_(config_.requests_per_minute) {
  config_.validate();
}

ChatResponse ChatClient::chat(const ChatRequest& req) {
  req.validate();
  const std::string key = cache_key(req);
  if (auto body = cache_.get(key)) {
    ++cache_hits_;
    ChatResponse resp = parse_chat_response(*body);
    resp.from_cache = true;
    return resp;
  }

  Semaphore::Guard slot(in_flight_);
  http::Headers headers;
  if (!config_.api_key_env_name.empty()) {
    if (const char* secret = std::getenv(config_.api_key_env_name.c_str()); secret && *secret) {
      headers.emplace("Authorization", std::string("Bearer ") + secret);
    }
  }
  const std::string body = jsonl::dump(wire_body(req));
  http::RetryPolicy policy{config_.max_retries, config_.backoff_base_seconds};
  int retries = 0;
  http::Response res = http::with_retries(
      policy,
      [&] {
        ++network_calls_;
        return http::post_json(endpoint_, "/v1/chat/completions", body, headers,
                               config_.timeout_seconds);
      },
      [&] { limiter_.acquire(); }, &retries);
  retries_ += static_cast<size_t>(retries);

  if (res.transport_failed()) {
    throw TransportError(fmt::format("chat request to {} failed after {} retries: {}",
                                     config_.base_url, retries, res.error),
                         0);
  }
  if (res.status < 200 || res.status >= 300) {
    std::string snippet = res.body.substr(0, 200);
    throw TransportError(fmt::format("chat request to {} returned HTTP {} after {} retries: {}",
                                     config_.base_url, res.status, retries, snippet),
                         res.status);
  }
  ChatResponse resp = parse_chat_response(res.body);
  cache_.put(key, res.body);
  return resp;
}

ClientStats ChatClient::stats() const {
  ClientStats s;
  s.cache_hits = cache_hits_.load();
  s.network_calls = network_calls_.load();
  s.retries = retries_.load();
  s.peak_in_flight = in_flight_.peak();
  return s;
}

}  // namespace scribebench::llm
