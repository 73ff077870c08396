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


#ifndef VLMFUZZ_BUDGET_H_
#define VLMFUZZ_BUDGET_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vlmfuzz/device.h"
#include "vlmfuzz/manifest.h"
#include "vlmfuzz/rng.h"

namespace vlmfuzz {

struct ComplexityAssessment {
  std::string component;
  int interactive_count = 0;
  int menu_item_count = 0;
  bool launch_failed = false;

  int weight() const { return interactive_count + menu_item_count; }
  bool operator==(const ComplexityAssessment&) const = default;
};

struct BudgetPlan {
  // Seconds per component, in assessment order.
  std::vector<std::pair<std::string, int64_t>> per_component;
  int64_t total = 0;

  int64_t For(const std::string& component) const;
  int64_t Sum() const;
  bool operator==(const BudgetPlan&) const = default;
};

// Launches each component, waits `idle_wait_ms`, counts distinct interactive
// widgets, then probes MENU once and counts what it reveals. Receivers are
// not launched. Crashes seen on the way are appended to `crashes` if given.
std::vector<ComplexityAssessment> AssessComplexity(
    DeviceAdapter& device, const Manifest& manifest, Rng& rng,
    int64_t idle_wait_ms, std::vector<CrashEvent>* crashes = nullptr);

// Proportional split of `total_seconds` with a per-component floor of
// max(30, total / (10 n)), capped at total / n, where n counts launchable
// components. Zero-weight components get the floor, failed ones get 0 and
// the rounding remainder goes to the heaviest component. Throws
// kNoLaunchableComponents / kInvalidArgument.
BudgetPlan AllocateBudget(const std::vector<ComplexityAssessment>& assessments,
                          int64_t total_seconds);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_BUDGET_H_
