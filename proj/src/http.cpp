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

#include "scribebench/http.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <regex>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "scribebench/errors.hpp"

namespace scribebench::http {

Endpoint parse_base_url(std::string_view base_url) {
  static const std::regex re(R"(^(https?://[^/?#]+)(/[^?#]*)?$)", std::regex::icase);
  std::string url(base_url);
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw UsageError(fmt::format("invalid base URL \"{}\" (expected http[s]://host[:port][/path])", url));
  }
  Endpoint ep;
  ep.origin = m[1].str();
  ep.path_prefix = m[2].matched ? m[2].str() : "";
  while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
  return ep;
}

Response post_json(const Endpoint& endpoint, std::string_view path, const std::string& body,
                   const Headers& headers, double timeout_seconds) {
  httplib::Client client(endpoint.origin);
  auto sec = static_cast<time_t>(timeout_seconds);
  auto usec = static_cast<time_t>((timeout_seconds - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  httplib::Headers h(headers.begin(), headers.end());
  std::string full_path = endpoint.path_prefix + std::string(path);
  auto res = client.Post(full_path, h, body, "application/json");
  Response out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  return out;
}

double backoff_delay(const RetryPolicy& policy, int attempt) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_real_distribution<double> jitter(0.5, 1.0);
  return policy.backoff_base_seconds * std::pow(2.0, attempt - 1) * jitter(rng);
}

Response with_retries(const RetryPolicy& policy, const std::function<Response()>& send,
                      const std::function<void()>& on_attempt, int* retries_used) {
  int retries = 0;
  while (true) {
    if (on_attempt) on_attempt();
    Response res = send();
    if (!res.retryable() || retries >= policy.max_retries) {
      if (retries_used) *retries_used = retries;
      return res;
    }
    ++retries;
    std::this_thread::sleep_for(std::chrono::duration<double>(backoff_delay(policy, retries)));
  }
}

}  // namespace scribebench::http
