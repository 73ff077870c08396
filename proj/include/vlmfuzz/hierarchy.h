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


#ifndef VLMFUZZ_HIERARCHY_H_
#define VLMFUZZ_HIERARCHY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlmfuzz/image.h"

namespace vlmfuzz {

struct Rect {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  int Width() const { return x2 - x1; }
  int Height() const { return y2 - y1; }
  int64_t Area() const { return int64_t{Width()} * Height(); }
  int CenterX() const { return (x1 + x2) / 2; }
  int CenterY() const { return (y1 + y2) / 2; }
  bool Contains(int x, int y) const {
    return x >= x1 && x < x2 && y >= y1 && y < y2;
  }
  bool Intersects(const Rect& o) const {
    return x1 < o.x2 && o.x1 < x2 && y1 < o.y2 && o.y1 < y2;
  }

  auto operator<=>(const Rect&) const = default;
};

// `[x1,y1][x2,y2]`
std::string FormatBounds(const Rect& r);
std::optional<Rect> ParseBounds(std::string_view s);

struct Widget {
  int index = 0;  // order among siblings
  std::string class_name;
  std::string text;
  std::string resource_id;
  std::string content_desc;
  std::string package;
  Rect bounds;
  bool clickable = false;
  bool long_clickable = false;
  bool scrollable = false;
  bool focusable = false;
  bool enabled = false;
  bool editable = false;
  bool checkable = false;
  bool checked = false;
  // Leaf under a clickable ancestor; set by ParseHierarchy.
  bool inherited_interactive = false;

  // Tree links into UiSnapshot::widgets.
  int parent = -1;
  std::vector<int> children;

  bool IsInteractive() const {
    return clickable || long_clickable || scrollable || editable ||
           inherited_interactive;
  }
  bool IsTappable() const { return clickable || inherited_interactive; }

  bool operator==(const Widget&) const = default;
};

bool IsEditorClass(std::string_view class_name);

struct UiSnapshot {
  std::string component;
  std::vector<Widget> widgets;  // pre-order
  std::vector<int> roots;
  Rect screen{0, 0, 1080, 1920};
  int rotation = 0;
  // Window tag. The sim backend reports it; on devices it is "main" or
  // "overlay" depending on DetectOverlay.
  std::string window = "main";
  bool overlay = false;
  std::shared_ptr<const Image> screenshot;
  int64_t captured_at_ms = 0;

  // Package of the first root, or empty.
  std::string package() const;
};

// Parses a UIAutomator-style dump. The `hierarchy` element may carry the
// extra attributes `window` and `overlay`; without them overlay status is
// derived from root bounds. Throws kMalformedHierarchy / kEmptyHierarchy.
UiSnapshot ParseHierarchy(std::string_view xml, std::string_view component,
                          const Rect& screen = Rect{0, 0, 1080, 1920});

std::string SerializeHierarchy(const UiSnapshot& snapshot);

// True when the roots cover less than the full screen.
bool DetectOverlay(const UiSnapshot& snapshot);

// Indices into snapshot.widgets, pre-order.
std::vector<int> InteractiveIndices(const UiSnapshot& snapshot);
std::vector<Widget> InteractiveWidgets(const UiSnapshot& snapshot);

bool HasTextEditor(const UiSnapshot& snapshot);

bool IsVisible(const Widget& w, const Rect& screen);
bool DetectProgressIndicator(const UiSnapshot& snapshot);

struct StateId {
  uint64_t digest = 0;

  std::string ToString() const;  // 16 lowercase hex digits
  static std::optional<StateId> Parse(std::string_view hex);

  auto operator<=>(const StateId&) const = default;
};

StateId StateSignature(const UiSnapshot& snapshot);

// Key used for visit counting and the UI stack: component plus window.
std::string UiKey(const UiSnapshot& snapshot);

struct LabeledScreenshot {
  Image image;
  // label_map[i] is the widget index carrying label i + 1.
  std::vector<int> label_map;
  // Top-left of each drawn tag, screen coordinates.
  std::vector<std::pair<int, int>> anchors;
};

// Throws kNoScreenshot when the snapshot has none.
LabeledScreenshot LabelWidgets(const UiSnapshot& snapshot);

// Flat wireframe used by the simulated backend as its screenshot.
Image RenderWireframe(const UiSnapshot& snapshot, int downscale = 4);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_HIERARCHY_H_
