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


#ifndef VLMFUZZ_RECORDING_DEVICE_H_
#define VLMFUZZ_RECORDING_DEVICE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "vlmfuzz/action.h"
#include "vlmfuzz/device.h"
#include "vlmfuzz/hierarchy.h"
#include "vlmfuzz/state.h"

namespace vlmfuzz {

struct EventRecord {
  int64_t mono_ms = 0;
  std::string component;  // visible before the action
  std::string action;     // DSL
  StateId before;
  StateId result;
  std::string before_key;
  std::string result_key;
  // Target widget, when the action carried a label that resolved.
  std::string target_resource_id;
  std::string target_text;
  Rect target_bounds;
  int episode = -1;
  bool executed = true;
};

struct CoverageSample {
  int64_t mono_ms = 0;
  int64_t states_discovered = 0;
  int64_t transitions_discovered = 0;
  int64_t components_launched = 0;

  bool operator==(const CoverageSample&) const = default;
};

struct ActionOutcome {
  bool executed = false;
  StateId before;
  StateId after;
  std::string before_key;
  std::string after_key;
  bool changed() const { return before != after; }
};

// Wraps a DeviceAdapter so that every action is logged, idle-waited,
// re-dumped and folded into the exploration graph and transition record.
class RecordingDevice : public ReplayTarget {
 public:
  RecordingDevice(DeviceAdapter& device, int64_t idle_wait_ms);

  void SetEventSink(std::ostream* sink) { sink_ = sink; }
  void SetCoverageInterval(int64_t ms) { coverage_interval_ms_ = ms; }
  void SetEpisode(int episode) { episode_ = episode; }
  int episode() const { return episode_; }

  // Current screen. Cached until the next action or sleep.
  const UiSnapshot& Live();
  // Same, with the screenshot attached.
  const UiSnapshot& LiveWithScreenshot();
  void Sleep(int64_t ms);
  void Invalidate() { live_.reset(); }

  ActionOutcome Execute(const Action& action);

  // ReplayTarget.
  bool Relaunch(const Intent& origin) override;
  void Perform(const Action& action) override { Execute(action); }
  StateId LiveStateId() override { return StateSignature(Live()); }

  const TransitionRecord& record() const { return record_; }
  void set_record(TransitionRecord r) { record_ = std::move(r); }

  ExplorationGraph& graph() { return graph_; }
  const ExplorationGraph& graph() const { return graph_; }
  const std::vector<EventRecord>& events() const { return events_; }
  std::vector<CrashEvent>& crashes() { return crashes_; }
  const std::vector<CoverageSample>& coverage() const { return coverage_; }
  const std::set<std::string>& launched_components() const {
    return launched_;
  }
  // Appends a sample at the current time.
  void FinalCoverageSample();

  DeviceAdapter& device() { return device_; }
  Clock& clock() { return device_.clock(); }
  int64_t idle_wait_ms() const { return idle_wait_ms_; }

 private:
  CoverageSample Sample(int64_t at) const;
  void SampleDue();

  DeviceAdapter& device_;
  int64_t idle_wait_ms_;
  std::ostream* sink_ = nullptr;
  std::optional<UiSnapshot> live_;
  TransitionRecord record_;
  ExplorationGraph graph_;
  std::vector<EventRecord> events_;
  std::vector<CrashEvent> crashes_;
  std::vector<CoverageSample> coverage_;
  std::set<std::string> launched_;
  int64_t coverage_interval_ms_ = 60000;
  int64_t next_sample_ms_ = 0;
  int episode_ = -1;
};

}  // namespace vlmfuzz

#endif  // VLMFUZZ_RECORDING_DEVICE_H_
