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


#include "vlmfuzz/recording_device.h"

#include <memory>

namespace vlmfuzz {

RecordingDevice::RecordingDevice(DeviceAdapter& device, int64_t idle_wait_ms)
    : device_(device), idle_wait_ms_(idle_wait_ms) {
  next_sample_ms_ = device_.clock().NowMs();
}

const UiSnapshot& RecordingDevice::Live() {
  if (!live_) live_ = CaptureSnapshot(device_, false);
  return *live_;
}

const UiSnapshot& RecordingDevice::LiveWithScreenshot() {
  Live();
  if (!live_->screenshot) {
    live_->screenshot =
        std::make_shared<const Image>(DecodePng(device_.Screenshot()));
  }
  return *live_;
}

void RecordingDevice::Sleep(int64_t ms) {
  device_.clock().SleepMs(ms);
  live_.reset();
  SampleDue();
}

CoverageSample RecordingDevice::Sample(int64_t at) const {
  return {at, static_cast<int64_t>(graph_.StateCount()),
          static_cast<int64_t>(graph_.TransitionCount()),
          static_cast<int64_t>(launched_.size())};
}

void RecordingDevice::SampleDue() {
  const int64_t now = device_.clock().NowMs();
  while (now >= next_sample_ms_) {
    coverage_.push_back(Sample(next_sample_ms_));
    next_sample_ms_ += coverage_interval_ms_;
  }
}

void RecordingDevice::FinalCoverageSample() {
  SampleDue();
  const int64_t now = device_.clock().NowMs();
  if (!coverage_.empty() && coverage_.back().mono_ms == now) {
    coverage_.back() = Sample(now);
  } else {
    coverage_.push_back(Sample(now));
  }
}

ActionOutcome RecordingDevice::Execute(const Action& action) {
  const bool is_launch = std::holds_alternative<Launch>(action);
  const bool is_broadcast = std::holds_alternative<Broadcast>(action);
  const UiSnapshot before = Live();
  const UiState before_state = UiState::FromSnapshot(before);
  EventRecord event;
  event.mono_ms = device_.clock().NowMs();
  event.component = before.component;
  event.action = FormatAction(action);
  event.before = before_state.id;
  event.before_key = UiKey(before);
  event.episode = episode_;
  if (auto label = ActionLabel(action)) {
    if (const Widget* w = ResolveLabel(before, *label)) {
      event.target_resource_id = w->resource_id;
      event.target_text = w->text.empty() ? w->content_desc : w->text;
      event.target_bounds = w->bounds;
    }
  }
  // Launches and broadcasts start from wherever the device happens to be,
  // which is not part of the app's state space.
  if (!is_launch && !is_broadcast) {
    graph_.AddState(before_state, event.mono_ms);
  }

  live_.reset();
  event.executed = ExecuteAction(device_, action, before);
  if (is_launch) {
    const Intent& intent = std::get<Launch>(action).intent;
    record_.origin = intent;
    record_.steps.clear();
    if (event.executed) launched_.insert(intent.target);
  } else if (!is_broadcast) {
    record_.steps.push_back({before_state, action});
  }
  Sleep(idle_wait_ms_);

  const UiSnapshot& after = Live();
  const UiState after_state = UiState::FromSnapshot(after);
  if (!is_broadcast) {
    graph_.AddState(after_state, device_.clock().NowMs());
    if (!is_launch) {
      graph_.AddTransition({before_state.id, event.action, after_state.id});
    }
  }
  for (CrashEvent& crash : device_.DrainCrashEvents()) {
    if (crash.component.empty()) crash.component = before.component;
    crashes_.push_back(std::move(crash));
  }
  event.result = after_state.id;
  event.result_key = UiKey(after);
  if (sink_ != nullptr) {
    *sink_ << event.mono_ms << '\t' << event.component << '\t' << event.action
           << '\t' << event.result.ToString() << '\n';
    sink_->flush();
  }
  ActionOutcome outcome{event.executed, event.before, event.result,
                        event.before_key, event.result_key};
  events_.push_back(std::move(event));
  SampleDue();
  return outcome;
}

bool RecordingDevice::Relaunch(const Intent& origin) {
  return Execute(Launch{origin}).executed;
}

}  // namespace vlmfuzz
