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


#ifndef VLMFUZZ_DEVICE_H_
#define VLMFUZZ_DEVICE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vlmfuzz/action.h"
#include "vlmfuzz/clock.h"
#include "vlmfuzz/hierarchy.h"
#include "vlmfuzz/manifest.h"

namespace vlmfuzz {

struct CrashEvent {
  std::string exception_type;
  std::string message;
  std::string stack_top_frame;
  bool fatal = true;
  int64_t mono_ms = 0;
  std::string component;  // filled in by the recorder when known

  bool operator==(const CrashEvent&) const = default;
};

// What the explorer needs from a target. Implementations: SimDevice (desk
// scale) and AdbDevice (real hardware). Calls come from one thread.
class DeviceAdapter {
 public:
  virtual ~DeviceAdapter() = default;

  // False when the component could not be started.
  virtual bool Launch(const Intent& intent) = 0;
  virtual void Broadcast(const Intent& intent) = 0;
  virtual void Tap(int x, int y) = 0;
  virtual void LongPress(int x, int y) = 0;
  virtual void Swipe(int x1, int y1, int x2, int y2, int duration_ms) = 0;
  // Replaces the content of the editor `target` with `text`.
  virtual void InputText(const Widget& target, const std::string& text) = 0;
  virtual void PressBack() = 0;
  virtual void PressEnter() = 0;
  virtual void PressMenu() = 0;
  virtual void PressHome() = 0;
  // Brings the app under test back to the foreground after PressHome.
  virtual void ResumeApp() = 0;
  virtual void SetOrientation(Orientation o) = 0;
  virtual std::string DumpHierarchy() = 0;
  virtual std::string Screenshot() = 0;  // PNG bytes
  virtual std::string CurrentComponent() = 0;
  virtual std::vector<CrashEvent> DrainCrashEvents() = 0;
  virtual Rect ScreenRect() = 0;
  virtual Clock& clock() = 0;
};

// Dump + parse, attaching the screenshot when `with_screenshot` is set.
UiSnapshot CaptureSnapshot(DeviceAdapter& device, bool with_screenshot);

// Resolves a 1-based label against `snapshot`; nullptr when out of range.
const Widget* ResolveLabel(const UiSnapshot& snapshot, int label);

// Sends `action` using `snapshot` to resolve labels. Returns false when the
// label did not resolve (nothing was sent) or a launch failed.
bool ExecuteAction(DeviceAdapter& device, const Action& action,
                   const UiSnapshot& snapshot);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_DEVICE_H_
