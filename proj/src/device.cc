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


#include "vlmfuzz/device.h"

#include <memory>

namespace vlmfuzz {
namespace {

double DistanceFraction(Distance d) {
  switch (d) {
    case Distance::kShort: return 0.15;
    case Distance::kMedium: return 0.3;
    case Distance::kLong: return 0.5;
  }
  return 0.3;
}

void SwipeFrom(DeviceAdapter& device, int x, int y, Direction dir,
               Distance dist) {
  const Rect screen = device.ScreenRect();
  const int dx = static_cast<int>(screen.Width() * DistanceFraction(dist));
  const int dy = static_cast<int>(screen.Height() * DistanceFraction(dist));
  int x2 = x, y2 = y;
  switch (dir) {
    case Direction::kUp: y2 -= dy; break;
    case Direction::kDown: y2 += dy; break;
    case Direction::kLeft: x2 -= dx; break;
    case Direction::kRight: x2 += dx; break;
  }
  device.Swipe(x, y, x2, y2, 300);
}

}  // namespace

UiSnapshot CaptureSnapshot(DeviceAdapter& device, bool with_screenshot) {
  const std::string xml = device.DumpHierarchy();
  const std::string component = device.CurrentComponent();
  UiSnapshot snapshot = ParseHierarchy(xml, component, device.ScreenRect());
  snapshot.captured_at_ms = device.clock().NowMs();
  if (with_screenshot) {
    snapshot.screenshot =
        std::make_shared<const Image>(DecodePng(device.Screenshot()));
  }
  return snapshot;
}

const Widget* ResolveLabel(const UiSnapshot& snapshot, int label) {
  const std::vector<int> idx = InteractiveIndices(snapshot);
  if (label < 1 || label > static_cast<int>(idx.size())) return nullptr;
  return &snapshot.widgets[idx[label - 1]];
}

bool ExecuteAction(DeviceAdapter& device, const Action& action,
                   const UiSnapshot& snapshot) {
  const Widget* target = nullptr;
  if (auto label = ActionLabel(action)) {
    target = ResolveLabel(snapshot, *label);
    if (target == nullptr) return false;
  }
  if (std::holds_alternative<Tap>(action)) {
    device.Tap(target->bounds.CenterX(), target->bounds.CenterY());
  } else if (std::holds_alternative<LongPress>(action)) {
    device.LongPress(target->bounds.CenterX(), target->bounds.CenterY());
  } else if (const auto* s = std::get_if<Swipe>(&action)) {
    SwipeFrom(device, target->bounds.CenterX(), target->bounds.CenterY(),
              s->direction, s->distance);
  } else if (const auto* in = std::get_if<Input>(&action)) {
    device.InputText(*target, in->text);
  } else if (std::holds_alternative<TapBack>(action)) {
    device.PressBack();
  } else if (std::holds_alternative<TapEnter>(action)) {
    device.PressEnter();
  } else if (std::holds_alternative<TapMenu>(action)) {
    device.PressMenu();
  } else if (const auto* sc = std::get_if<Scroll>(&action)) {
    // Finger moves against the scroll direction.
    const Direction finger =
        sc->direction == Direction::kDown ? Direction::kUp : Direction::kDown;
    const Rect area = target ? target->bounds : device.ScreenRect();
    SwipeFrom(device, area.CenterX(), area.CenterY(), finger,
              Distance::kShort);
  } else if (const auto* r = std::get_if<Rotate>(&action)) {
    device.SetOrientation(r->orientation);
  } else if (std::holds_alternative<AppSwitch>(action)) {
    device.PressHome();
    device.ResumeApp();
  } else if (const auto* l = std::get_if<Launch>(&action)) {
    return device.Launch(l->intent);
  } else if (const auto* b = std::get_if<Broadcast>(&action)) {
    device.Broadcast(b->intent);
  }
  return true;
}

}  // namespace vlmfuzz
