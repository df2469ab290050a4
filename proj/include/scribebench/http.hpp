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

#include <functional>
#include <map>
#include <string>
#include <string_view>

namespace scribebench::http {

struct Endpoint {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // "" or "/something", never a trailing slash
};

/// Splits a base URL such as "http://localhost:8080/api" into origin and
/// path prefix. Throws UsageError for anything that is not http(s).
Endpoint parse_base_url(std::string_view base_url);

struct Response {
  int status = 0;  // 0 means the request never completed (timeout, refused)
  std::string body;
  std::string error;

  bool transport_failed() const { return status == 0; }
  /// Timeouts, connection failures, 429 and 5xx.
  bool retryable() const { return status == 0 || status == 429 || status >= 500; }
};

using Headers = std::multimap<std::string, std::string>;

Response post_json(const Endpoint& endpoint, std::string_view path, const std::string& body,
                   const Headers& headers, double timeout_seconds);

struct RetryPolicy {
  int max_retries = 3;
  double backoff_base_seconds = 1.0;
};

/// Delay before retry number `attempt` (1-based): base * 2^(attempt-1),
/// scaled by a jitter factor drawn from [0.5, 1.0].
double backoff_delay(const RetryPolicy& policy, int attempt);

/// Issues `send` until it returns a non-retryable response or the retry
/// budget is spent. `on_attempt` runs before every attempt, including the
/// first, and is where callers hook rate limiting.
Response with_retries(const RetryPolicy& policy, const std::function<Response()>& send,
                      const std::function<void()>& on_attempt, int* retries_used = nullptr);

}  // namespace scribebench::http
