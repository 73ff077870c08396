// Copyright 2026 The vlmfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VLMFUZZ_CLOCK_H_
#define VLMFUZZ_CLOCK_H_

#include <chrono>
#include <cstdint>
#include <thread>

namespace vlmfuzz {

// Monotonic milliseconds. The simulated backend advances time only when
// someone sleeps, which makes budgets and progress timeouts instant in tests.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t NowMs() const = 0;
  virtual void SleepMs(int64_t ms) = 0;
};

class SimClock : public Clock {
 public:
  int64_t NowMs() const override { return now_ms_; }
  void SleepMs(int64_t ms) override {
    if (ms > 0) now_ms_ += ms;
  }
  void AdvanceTo(int64_t ms) {
    if (ms > now_ms_) now_ms_ = ms;
  }

 private:
  int64_t now_ms_ = 0;
};

class SteadyClock : public Clock {
 public:
  SteadyClock() : start_(std::chrono::steady_clock::now()) {}
  int64_t NowMs() const override {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }
  void SleepMs(int64_t ms) override {
    if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace vlmfuzz

#endif  // VLMFUZZ_CLOCK_H_
