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


#include "vlmfuzz/budget.h"

#include <algorithm>
#include <set>
#include <tuple>

#include <spdlog/spdlog.h>

#include "vlmfuzz/error.h"

namespace vlmfuzz {

int64_t BudgetPlan::For(const std::string& component) const {
  for (const auto& [name, seconds] : per_component) {
    if (name == component) return seconds;
  }
  return 0;
}

int64_t BudgetPlan::Sum() const {
  int64_t sum = 0;
  for (const auto& entry : per_component) sum += entry.second;
  return sum;
}

std::vector<ComplexityAssessment> AssessComplexity(
    DeviceAdapter& device, const Manifest& manifest, Rng& rng,
    int64_t idle_wait_ms, std::vector<CrashEvent>* crashes) {
  std::vector<ComplexityAssessment> out;
  auto drain = [&] {
    for (auto& c : device.DrainCrashEvents()) {
      if (crashes != nullptr) crashes->push_back(std::move(c));
    }
  };
  for (const ComponentDecl& comp : manifest.components) {
    ComplexityAssessment a;
    a.component = comp.name;
    if (comp.kind == ComponentKind::kReceiver) {
      out.push_back(a);
      continue;
    }
    try {
      const Intent intent =
          BuildLaunchIntent(comp, manifest.package_name, rng);
      const bool launched = device.Launch(intent);
      device.clock().SleepMs(idle_wait_ms);
      drain();
      if (!launched) {
        a.launch_failed = true;
      } else if (comp.kind == ComponentKind::kActivity) {
        const UiSnapshot snap = CaptureSnapshot(device, false);
        std::set<std::tuple<std::string, std::string, std::string, Rect>> seen;
        for (int i : InteractiveIndices(snap)) {
          const Widget& w = snap.widgets[i];
          seen.emplace(w.class_name, w.resource_id, w.text, w.bounds);
        }
        a.interactive_count = static_cast<int>(seen.size());
        const StateId before = StateSignature(snap);
        device.PressMenu();
        device.clock().SleepMs(idle_wait_ms);
        const UiSnapshot menu = CaptureSnapshot(device, false);
        if (StateSignature(menu) != before && menu.overlay) {
          a.menu_item_count = static_cast<int>(InteractiveIndices(menu).size());
          device.PressBack();
          device.clock().SleepMs(idle_wait_ms);
        }
        drain();
      }
    } catch (const Error& e) {
      if (!e.IsDeviceError()) throw;
      spdlog::warn("assessment of {} failed: {}", comp.name, e.what());
      a = ComplexityAssessment{comp.name, 0, 0, true};
    }
    out.push_back(a);
  }
  return out;
}

BudgetPlan AllocateBudget(const std::vector<ComplexityAssessment>& assessments,
                          int64_t total_seconds) {
  if (total_seconds <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "total budget must be positive");
  }
  const int64_t n = std::count_if(
      assessments.begin(), assessments.end(),
      [](const ComplexityAssessment& a) { return !a.launch_failed; });
  if (n == 0) {
    throw Error(ErrorCode::kNoLaunchableComponents,
                "no component could be launched");
  }
  const int64_t floor =
      std::min(std::max<int64_t>(30, total_seconds / (10 * n)),
               total_seconds / n);

  BudgetPlan plan;
  plan.total = total_seconds;
  if (n == 1) {
    // Nothing to share with, whatever the weight.
    for (const ComplexityAssessment& a : assessments) {
      plan.per_component.emplace_back(a.component,
                                      a.launch_failed ? 0 : total_seconds);
    }
    return plan;
  }
  std::vector<int64_t> share(assessments.size(), 0);
  std::vector<size_t> positive;
  int64_t zero_count = 0;
  for (size_t i = 0; i < assessments.size(); ++i) {
    if (assessments[i].launch_failed) continue;
    if (assessments[i].weight() > 0) {
      positive.push_back(i);
    } else {
      share[i] = floor;
      ++zero_count;
    }
  }
  const int64_t remaining = total_seconds - floor * zero_count;
  // Water-filling: components whose proportional share falls below the floor
  // are pinned to it and the rest is re-split among the others.
  std::vector<bool> pinned(assessments.size(), false);
  while (!positive.empty()) {
    int64_t pinned_count = 0;
    int64_t weight_sum = 0;
    for (size_t i : positive) {
      if (pinned[i]) {
        ++pinned_count;
      } else {
        weight_sum += assessments[i].weight();
      }
    }
    if (weight_sum == 0) break;
    const int64_t pool = remaining - floor * pinned_count;
    bool changed = false;
    for (size_t i : positive) {
      if (pinned[i]) {
        share[i] = floor;
        continue;
      }
      share[i] = static_cast<int64_t>(
          static_cast<__int128>(std::max<int64_t>(pool, 0)) *
          assessments[i].weight() / weight_sum);
    }
    for (size_t i : positive) {
      if (!pinned[i] && share[i] < floor) {
        pinned[i] = true;
        share[i] = floor;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (!positive.empty()) {
    int64_t sum = 0;
    for (int64_t s : share) sum += s;
    int max_weight = 0;
    for (size_t i : positive) {
      max_weight = std::max(max_weight, assessments[i].weight());
    }
    std::vector<size_t> heaviest;
    for (size_t i : positive) {
      if (assessments[i].weight() == max_weight) heaviest.push_back(i);
    }
    // Tied leaders split the leftover evenly so equal weights keep equal
    // budgets; the indivisible rest stays unallocated.
    const int64_t leftover = std::max<int64_t>(total_seconds - sum, 0);
    const int64_t each = leftover / static_cast<int64_t>(heaviest.size());
    for (size_t i : heaviest) share[i] += each;
  }
  for (size_t i = 0; i < assessments.size(); ++i) {
    plan.per_component.emplace_back(assessments[i].component, share[i]);
  }
  return plan;
}

}  // namespace vlmfuzz
