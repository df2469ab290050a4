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

#include "scribebench/concurrency.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace scribebench {

Semaphore::Semaphore(size_t limit) : limit_(std::max<size_t>(limit, 1)) {}

void Semaphore::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_use_ < limit_; });
  ++in_use_;
  peak_ = std::max(peak_, in_use_);
}

void Semaphore::release() {
  {
    std::lock_guard lock(mu_);
    --in_use_;
  }
  cv_.notify_one();
}

size_t Semaphore::peak() const {
  std::lock_guard lock(mu_);
  return peak_;
}

RateLimiter::RateLimiter(size_t per_minute, NowFn now, SleepFn sleep)
    : per_minute_(per_minute), now_(std::move(now)), sleep_(std::move(sleep)) {
  if (!now_) now_ = [] { return Clock::now(); };
  if (!sleep_) sleep_ = [](Clock::duration d) { std::this_thread::sleep_for(d); };
}

RateLimiter::Clock::time_point RateLimiter::acquire() {
  constexpr auto kWindow = std::chrono::seconds(60);
  std::unique_lock lock(mu_);
  while (true) {
    auto now = now_();
    if (per_minute_ == 0) return now;
    while (!admitted_.empty() && now - admitted_.front() >= kWindow) admitted_.pop_front();
    if (admitted_.size() < per_minute_) {
      admitted_.push_back(now);
      return now;
    }
    // Holding the lock while waiting keeps admissions in FIFO order.
    sleep_(admitted_.front() + kWindow - now);
  }
}

void parallel_for(size_t count, size_t workers, const std::function<void(size_t)>& fn) {
  if (count == 0) return;
  workers = std::clamp<size_t>(workers, 1, count);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto run = [&] {
    while (!failed.load()) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (size_t w = 0; w < workers; ++w) threads.emplace_back(run);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace scribebench
