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

#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scribebench/concurrency.hpp"
#include "scribebench/errors.hpp"
#include "scribebench/http.hpp"
#include "scribebench/jsonl.hpp"
#include "scribebench/response_cache.hpp"

namespace scribebench::llm {

enum class Role { system, user, assistant };
std::string_view to_string(Role role);

struct Message {
  Role role = Role::user;
  std::string content;

  bool operator==(const Message&) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::optional<int64_t> seed;
  bool force_structured_output = false;

  /// Throws UsageError when messages are empty, the first message is an
  /// assistant turn, temperature < 0 or max_tokens < 1.
  void validate() const;
};

enum class FinishReason { stop, length, other };
std::string_view to_string(FinishReason reason);

struct ChatResponse {
  std::string content;
  FinishReason finish_reason = FinishReason::other;
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
  bool from_cache = false;
};

// Defaults for the three kinds of calls the toolkit makes.
inline constexpr double kJudgeTemperature = 0.0;
inline constexpr double kGenerationTemperature = 0.2;
inline constexpr double kSynthesisTemperature = 0.7;

struct ClientConfig {
  std::string base_url = "http://127.0.0.1:8000";
  std::string api_key_env_name;  // empty: no Authorization header
  double timeout_seconds = 120.0;
  int max_retries = 3;
  double backoff_base_seconds = 1.0;
  size_t max_concurrency = 4;
  size_t requests_per_minute = 0;  // 0: unlimited
  std::filesystem::path cache_dir = ".scribebench/cache";

  void validate() const;
  Json to_json() const;
  static ClientConfig from_json(const Json& j, ClientConfig defaults);
  static ClientConfig from_json(const Json& j) { return from_json(j, ClientConfig{}); }
};

/// 64 hex characters; SHA-256 over the canonical request serialization
/// (fields in fixed order, messages in order).
std::string cache_key(const ChatRequest& req);
std::string canonical_request(const ChatRequest& req);

/// Wire body for POST {base_url}/v1/chat/completions.
Json wire_body(const ChatRequest& req);

/// Reads choices[0].message.content and choices[0].finish_reason. Throws
/// RuntimeFailure for malformed bodies.
ChatResponse parse_chat_response(const std::string& body);

class TransportError : public RuntimeFailure {
 public:
  TransportError(const std::string& what, int status) : RuntimeFailure(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct ClientStats {
  size_t cache_hits = 0;
  size_t network_calls = 0;  // HTTP attempts, retries included
  size_t retries = 0;
  size_t peak_in_flight = 0;
};

/// Thread-safe chat-completions client with a write-once response cache,
/// retry with jittered exponential backoff, a sliding-window rate limit and
/// a cap on concurrent requests. Share one instance across workers.
class ChatClient {
 public:
  explicit ChatClient(ClientConfig config);

  /// Returns the cached response when present; otherwise performs the call,
  /// retrying timeouts, 429 and 5xx up to max_retries, and caches the body
  /// before returning. Other 4xx fail immediately with TransportError.
  ChatResponse chat(const ChatRequest& req);

  ClientStats stats() const;
  const ClientConfig& config() const { return config_; }

 private:
  ClientConfig config_;
  http::Endpoint endpoint_;
  ResponseCache cache_;
  Semaphore in_flight_;
  RateLimiter limiter_;
  std::atomic<size_t> cache_hits_{0};
  std::atomic<size_t> network_calls_{0};
  std::atomic<size_t> retries_{0};
};

}  // namespace scribebench::llm
