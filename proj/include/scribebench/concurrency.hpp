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

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>

namespace scribebench {

/// Counting semaphore with a runtime limit and peak tracking.
class Semaphore {
 public:
  explicit Semaphore(size_t limit);

  void acquire();
  void release();
  size_t peak() const;

  class Guard {
   public:
    explicit Guard(Semaphore& s) : s_(s) { s_.acquire(); }
    ~Guard() { s_.release(); }
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;

   private:
    Semaphore& s_;
  };

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  size_t limit_;
  size_t in_use_ = 0;
  size_t peak_ = 0;
};

/// Admits at most `per_minute` acquisitions in any 60 second window by
/// remembering the timestamps of the most recent admissions. A limit of 0
/// disables limiting. Clock and sleep are injectable for tests.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;
  using NowFn = std::function<Clock::time_point()>;
  using SleepFn = std::function<void(Clock::duration)>;

  explicit RateLimiter(size_t per_minute, NowFn now = {}, SleepFn sleep = {});

  /// Blocks until admission; returns the admission time.
  Clock::time_point acquire();

 private:
  size_t per_minute_;
  NowFn now_;
  SleepFn sleep_;
  std::mutex mu_;
  std::deque<Clock::time_point> admitted_;
};

/// Runs fn(0..count-1) on up to `workers` threads. The first exception is
/// rethrown after all workers stop; remaining indices are skipped.
void parallel_for(size_t count, size_t workers, const std::function<void(size_t)>& fn);

}  // namespace scribebench
