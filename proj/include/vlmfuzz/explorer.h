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


#ifndef VLMFUZZ_EXPLORER_H_
#define VLMFUZZ_EXPLORER_H_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vlmfuzz/action.h"
#include "vlmfuzz/budget.h"
#include "vlmfuzz/catalog.h"
#include "vlmfuzz/device.h"
#include "vlmfuzz/manifest.h"
#include "vlmfuzz/recording_device.h"
#include "vlmfuzz/rng.h"
#include "vlmfuzz/state.h"
#include "vlmfuzz/vlm.h"

namespace vlmfuzz {

struct ExplorerConfig {
  int tau = 2;
  int64_t idle_wait_ms = 1500;
  int64_t progress_timeout_ms = 60000;
  int64_t total_budget_seconds = 3600;
  uint64_t rng_seed = 0;
  std::vector<std::string> non_ignore_components;
  bool vlm_enabled = false;

  // Throws kInvalidArgument.
  void Validate() const;
};

enum class ProgressResult { kChanged, kTimedOut, kNotApplicable };

std::string_view ProgressResultName(ProgressResult r);

struct ProgressWait {
  int64_t start_ms = 0;
  int64_t end_ms = 0;
  ProgressResult result = ProgressResult::kNotApplicable;
};

struct ComponentRun {
  std::string component;
  int64_t budget_seconds = 0;
  int64_t start_ms = 0;
  int64_t end_ms = 0;
  int passes = 0;
  bool skipped = false;
  std::string error;  // device error that ended the component, if any

  bool operator==(const ComponentRun&) const = default;
};

struct RunResult {
  std::vector<ComplexityAssessment> assessments;
  BudgetPlan plan;
  std::vector<ComponentRun> components;
  int64_t started_ms = 0;
  int64_t finished_ms = 0;
};

class Explorer {
 public:
  // `vlm` and `catalog` may be null. Neither is owned.
  Explorer(DeviceAdapter& device, Manifest manifest, ExplorerConfig config,
           VlmClient* vlm = nullptr, const BroadcastCatalog* catalog = nullptr);

  // Assess, allocate and explore every component.
  RunResult Run();
  // The main loop over a fixed plan. Appends to `result->components`.
  void Explore(const BudgetPlan& plan, RunResult* result);

  // One analyzer on whatever the device currently shows. Recurses on UI
  // changes.
  void AnalyzeUi();

  ProgressResult WaitForProgress();
  // Throws kWidgetVanished when no widget with the same resource id and
  // bounds is on screen.
  bool VerifyTextAccepted(const Widget& widget, const std::string& sent);

  // Stop acting once the clock passes this point.
  void set_deadline_ms(int64_t ms) { deadline_ms_ = ms; }

  RecordingDevice& recorder() { return rec_; }
  const RecordingDevice& recorder() const { return rec_; }
  const VisitCounter& visits() const { return visits_; }
  const UiStack& stack() const { return stack_; }
  const std::vector<ProgressWait>& progress_waits() const {
    return progress_waits_;
  }
  const ExplorerConfig& config() const { return config_; }
  const Manifest& manifest() const { return manifest_; }
  Rng& rng() { return rng_; }
  // Number of vision plans that left widgets untouched or failed.
  int vision_fallbacks() const { return vision_fallbacks_; }
  int replays_failed() const { return replays_failed_; }

 private:
  struct Frame {
    std::string key;
    StateId expected;
    size_t base_len = 0;
    int episode = 0;
    bool abandoned = false;
    std::set<std::string> covered;  // widget keys that got an action
  };
  enum class StepStatus { kDone, kSkipped, kStop };

  bool OutOfTime() const;
  bool IsAut(const UiSnapshot& snap) const;
  bool EnsureFrame(Frame& f);
  StepStatus Perform(Frame& f, Action action, const std::string* widget_key);
  void AfterAction(Frame& f, const ActionOutcome& outcome);
  void InputWithCheck(Frame& f, const std::string& widget_key,
                      const std::string& text);
  bool PerformVisionActions(Frame& f, const UiSnapshot& snap);
  void PerformNonVisionActions(Frame& f, const UiSnapshot& snap);
  void FinishScreen(Frame& f);
  void RotateAndRestoreScreen(Frame& f);
  void ExploreActivity(const ComponentDecl& comp, ComponentRun& run);
  void SendBroadcasts(const ComponentDecl& comp);

  DeviceAdapter& device_;
  Manifest manifest_;
  ExplorerConfig config_;
  VlmClient* vlm_;
  const BroadcastCatalog* catalog_;
  Rng rng_;
  RecordingDevice rec_;
  UiStack stack_;
  VisitCounter visits_;
  std::set<std::string> app_switched_;
  std::vector<ProgressWait> progress_waits_;
  int64_t deadline_ms_ = std::numeric_limits<int64_t>::max();
  int next_episode_ = 0;
  int vision_fallbacks_ = 0;
  int replays_failed_ = 0;
};

// Identity of a widget across snapshots of one screen.
std::string WidgetKey(const Widget& w);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_EXPLORER_H_
