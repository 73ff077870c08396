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


#ifndef VLMFUZZ_SIM_APP_H_
#define VLMFUZZ_SIM_APP_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vlmfuzz/clock.h"
#include "vlmfuzz/device.h"
#include "vlmfuzz/hierarchy.h"
#include "vlmfuzz/manifest.h"

namespace vlmfuzz {

// ---- Declarative app description -----------------------------------------
//
// JSON document:
//   {"package": "com.x", "screen": {"width": 1080, "height": 1920},
//    "components": [{"name": ".Main", "kind": "activity", "exported": true,
//                    "intent_filters": [{"actions": [...], "categories": [...],
//                                        "schemes": [...]}],
//                    "entry": "home", "crash_on_launch": {...},
//                    "on_broadcast": {...}, "screens": [...]}]}
// Screen: {"name", "overlay"?, "menu"?, "package"?, "component"?, "widgets"}
// Widget: {"id", "class", "text"?, "content_desc"?, "bounds": [x1,y1,x2,y2],
//          "parent"?, "clickable"?, "long_clickable"?, "scrollable"?,
//          "editable"?, "checkable"?, "hidden"?, "behavior"?}
// Behavior: {"type": "navigate|popup|append_list_item|toggle|input|crash|
//            show_progress|rotate_reveal|back|none", ...}
// Screen names are unique across the whole app.

enum class BehaviorKind {
  kNone,
  kNavigate,
  kPopup,
  kAppendListItem,
  kToggle,
  kInput,
  kCrash,
  kShowProgress,
  kRotateReveal,
  kBack,
};

struct SimCrash {
  std::string exception_type;
  std::string message;
  std::string frame;
  bool fatal = true;
};

struct SimBehavior {
  BehaviorKind kind = BehaviorKind::kNone;
  std::string screen;     // navigate, popup, show_progress
  std::string list;       // append_list_item: container widget id
  std::string validator;  // input: whole-text regex, empty = accept all
  SimCrash crash;
  bool crash_on_rotate = false;
  int64_t duration_ms = 0;  // show_progress; negative never clears
  std::string widget;       // rotate_reveal target
};

struct SimWidget {
  std::string id;
  std::string class_name = "android.widget.TextView";
  std::string text;
  std::string content_desc;
  Rect bounds;
  std::string parent;  // id of the enclosing widget, or empty
  bool clickable = false;
  bool long_clickable = false;
  bool scrollable = false;
  bool editable = false;
  bool checkable = false;
  bool hidden = false;
  SimBehavior behavior;
};

struct SimScreen {
  std::string name;
  bool overlay = false;
  std::string menu;  // overlay screen shown by MENU, if any
  std::string package;    // override (external dialogs)
  std::string component;  // override
  std::vector<SimWidget> widgets;
};

struct SimComponent {
  std::string name;  // fully qualified after loading
  ComponentKind kind = ComponentKind::kActivity;
  bool exported = false;
  std::vector<IntentFilter> intent_filters;
  std::string entry;
  std::optional<SimCrash> crash_on_launch;
  std::optional<SimCrash> on_broadcast;
  std::vector<SimScreen> screens;
};

struct SimAppSpec {
  std::string package;
  int screen_width = 1080;
  int screen_height = 1920;
  std::vector<SimComponent> components;
};

// Throws kSpecError naming the offending field path.
SimAppSpec LoadSimAppSpec(std::string_view json_text);
SimAppSpec LoadSimAppSpecFile(const std::filesystem::path& path);

// The spec doubles as the app's manifest in sim mode.
Manifest ManifestFromSimSpec(const SimAppSpec& spec);

inline constexpr std::string_view kLauncherPackage = "com.android.launcher3";
inline constexpr std::string_view kLauncherComponent =
    "com.android.launcher3.Launcher";

// ---- Runtime model --------------------------------------------------------

// Value-semantic app model. Time is pushed in with SetNow so copies (used by
// the test oracle) stay independent of any clock.
class SimApp {
 public:
  explicit SimApp(SimAppSpec spec);

  void SetNow(int64_t now_ms);
  bool Launch(const Intent& intent);
  void Broadcast(const Intent& intent);
  void Tap(int x, int y);
  void LongPress(int x, int y);
  void Swipe(int x1, int y1, int x2, int y2);
  void InputText(const Rect& target_bounds, const std::string& text);
  void PressBack();
  void PressEnter() {}
  void PressMenu();
  void PressHome();
  void ResumeApp();
  void SetOrientation(Orientation o);

  std::string DumpHierarchy() const;
  std::string CurrentComponent() const;
  std::vector<CrashEvent> DrainCrashEvents();

  Rect ScreenRect() const;
  const SimAppSpec& spec() const { return spec_; }
  bool at_home() const { return at_home_; }
  std::string TopScreenName() const;
  const std::vector<Intent>& received_broadcasts() const {
    return received_broadcasts_;
  }
  const std::vector<std::string>& started_services() const {
    return started_services_;
  }
  // Full runtime state, used by the test oracle for visited-set keys.
  std::string ModelStateKey() const;

 private:
  struct Instance {
    int screen = -1;
    std::map<std::string, std::string> texts;  // editor id -> text
    std::map<std::string, bool> checked;
    std::set<std::string> revealed;
    bool loading = false;
    int64_t loading_until = 0;  // < 0: never
    std::string loading_target;
  };
  struct ScreenRef {
    int component = -1;
    int screen = -1;
  };
  struct LiveWidget {
    const SimWidget* spec;
    Rect bounds;
    std::string text;
    bool checked = false;
    int parent = -1;
  };

  void Tick();
  const SimScreen& ScreenOf(const Instance& inst) const;
  int ComponentOfScreen(int screen) const;
  Instance NewInstance(int screen) const;
  std::vector<LiveWidget> LiveWidgets(const Instance& inst) const;
  int HitTest(const std::vector<LiveWidget>& live, int x, int y,
              bool want_scrollable) const;
  void Apply(const SimWidget& w, int instance_index);
  void Crash(const SimCrash& crash);
  void PopOverlays();
  int FindScreen(const std::string& name) const;

  SimAppSpec spec_;
  std::vector<ScreenRef> screens_;  // flattened index -> owner
  std::map<std::string, int> screen_index_;
  int64_t now_ms_ = 0;
  int launched_component_ = -1;
  std::vector<Instance> stack_;
  bool at_home_ = true;
  Orientation orientation_ = Orientation::kPortrait;
  std::map<std::string, int> list_rows_;  // persistent across launches
  std::vector<CrashEvent> pending_crashes_;
  std::vector<Intent> received_broadcasts_;
  std::vector<std::string> started_services_;
};

// DeviceAdapter over a SimApp with its own simulated clock.
class SimDevice : public DeviceAdapter {
 public:
  explicit SimDevice(SimAppSpec spec) : app_(std::move(spec)) {}

  bool Launch(const Intent& intent) override;
  void Broadcast(const Intent& intent) override;
  void Tap(int x, int y) override;
  void LongPress(int x, int y) override;
  void Swipe(int x1, int y1, int x2, int y2, int duration_ms) override;
  void InputText(const Widget& target, const std::string& text) override;
  void PressBack() override;
  void PressEnter() override;
  void PressMenu() override;
  void PressHome() override;
  void ResumeApp() override;
  void SetOrientation(Orientation o) override;
  std::string DumpHierarchy() override;
  std::string Screenshot() override;
  std::string CurrentComponent() override;
  std::vector<CrashEvent> DrainCrashEvents() override;
  Rect ScreenRect() override { return app_.ScreenRect(); }
  Clock& clock() override { return clock_; }

  SimApp& app() { return app_; }
  SimClock& sim_clock() { return clock_; }

 private:
  void Sync() { app_.SetNow(clock_.NowMs()); }

  SimApp app_;
  SimClock clock_;
};

}  // namespace vlmfuzz

#endif  // VLMFUZZ_SIM_APP_H_
