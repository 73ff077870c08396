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


#include "vlmfuzz/sim_app.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSpecError, path + ": " + what);
}

const json* Field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string ReqString(const json& obj, const char* key,
                      const std::string& path) {
  const json* v = Field(obj, key);
  if (v == nullptr) Fail(path + "." + key, "missing");
  if (!v->is_string()) Fail(path + "." + key, "expected a string");
  return v->get<std::string>();
}

std::string OptString(const json& obj, const char* key,
                      const std::string& path) {
  const json* v = Field(obj, key);
  if (v == nullptr) return {};
  if (!v->is_string()) Fail(path + "." + key, "expected a string");
  return v->get<std::string>();
}

bool OptBool(const json& obj, const char* key, const std::string& path,
             bool def = false) {
  const json* v = Field(obj, key);
  if (v == nullptr) return def;
  if (!v->is_boolean()) Fail(path + "." + key, "expected a boolean");
  return v->get<bool>();
}

int64_t OptInt(const json& obj, const char* key, const std::string& path,
               int64_t def) {
  const json* v = Field(obj, key);
  if (v == nullptr) return def;
  if (!v->is_number_integer()) Fail(path + "." + key, "expected an integer");
  return v->get<int64_t>();
}

std::vector<std::string> OptStrings(const json& obj, const char* key,
                                    const std::string& path) {
  std::vector<std::string> out;
  const json* v = Field(obj, key);
  if (v == nullptr) return out;
  if (!v->is_array()) Fail(path + "." + key, "expected an array");
  for (size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_string()) {
      Fail(path + "." + key + "[" + std::to_string(i) + "]",
           "expected a string");
    }
    out.push_back((*v)[i].get<std::string>());
  }
  return out;
}

SimCrash ParseCrash(const json& obj, const std::string& path) {
  if (!obj.is_object()) Fail(path, "expected an object");
  SimCrash c;
  c.exception_type = ReqString(obj, "exception_type", path);
  c.message = OptString(obj, "message", path);
  c.frame = OptString(obj, "frame", path);
  if (c.frame.empty()) c.frame = "<unknown>";
  c.fatal = OptBool(obj, "fatal", path, true);
  return c;
}

SimBehavior ParseBehavior(const json& obj, const std::string& path) {
  if (!obj.is_object()) Fail(path, "expected an object");
  SimBehavior b;
  const std::string type = ReqString(obj, "type", path);
  if (type == "none") {
    b.kind = BehaviorKind::kNone;
  } else if (type == "navigate") {
    b.kind = BehaviorKind::kNavigate;
    b.screen = ReqString(obj, "screen", path);
  } else if (type == "popup") {
    b.kind = BehaviorKind::kPopup;
    b.screen = ReqString(obj, "screen", path);
  } else if (type == "append_list_item") {
    b.kind = BehaviorKind::kAppendListItem;
    b.list = ReqString(obj, "list", path);
  } else if (type == "toggle") {
    b.kind = BehaviorKind::kToggle;
  } else if (type == "input") {
    b.kind = BehaviorKind::kInput;
    b.validator = OptString(obj, "validator", path);
    try {
      std::regex check(b.validator);
    } catch (const std::regex_error&) {
      Fail(path + ".validator", "invalid pattern");
    }
  } else if (type == "crash") {
    b.kind = BehaviorKind::kCrash;
    b.crash = ParseCrash(obj, path);
    const std::string on = OptString(obj, "on", path);
    if (!on.empty() && on != "tap" && on != "rotate") {
      Fail(path + ".on", "expected tap or rotate");
    }
    b.crash_on_rotate = on == "rotate";
  } else if (type == "show_progress") {
    b.kind = BehaviorKind::kShowProgress;
    b.duration_ms = OptInt(obj, "duration_ms", path, 3000);
    b.screen = ReqString(obj, "screen", path);
  } else if (type == "rotate_reveal") {
    b.kind = BehaviorKind::kRotateReveal;
    b.widget = ReqString(obj, "widget", path);
  } else if (type == "back") {
    b.kind = BehaviorKind::kBack;
  } else {
    Fail(path + ".type", "unknown behavior '" + type + "'");
  }
  return b;
}

Rect ParseRect(const json& obj, const std::string& path) {
  if (!obj.is_array() || obj.size() != 4) {
    Fail(path, "expected [x1, y1, x2, y2]");
  }
  for (const auto& v : obj) {
    if (!v.is_number_integer()) Fail(path, "expected integers");
  }
  Rect r{obj[0].get<int>(), obj[1].get<int>(), obj[2].get<int>(),
         obj[3].get<int>()};
  if (r.x1 > r.x2 || r.y1 > r.y2) Fail(path, "inverted rectangle");
  return r;
}

SimWidget ParseWidget(const json& obj, const std::string& path) {
  if (!obj.is_object()) Fail(path, "expected an object");
  SimWidget w;
  w.id = ReqString(obj, "id", path);
  if (const json* c = Field(obj, "class")) {
    if (!c->is_string()) Fail(path + ".class", "expected a string");
    w.class_name = c->get<std::string>();
  }
  w.text = OptString(obj, "text", path);
  w.content_desc = OptString(obj, "content_desc", path);
  const json* bounds = Field(obj, "bounds");
  if (bounds == nullptr) Fail(path + ".bounds", "missing");
  w.bounds = ParseRect(*bounds, path + ".bounds");
  w.parent = OptString(obj, "parent", path);
  w.clickable = OptBool(obj, "clickable", path);
  w.long_clickable = OptBool(obj, "long_clickable", path);
  w.scrollable = OptBool(obj, "scrollable", path);
  w.editable = OptBool(obj, "editable", path) || IsEditorClass(w.class_name);
  w.checkable = OptBool(obj, "checkable", path);
  w.hidden = OptBool(obj, "hidden", path);
  if (const json* b = Field(obj, "behavior")) {
    w.behavior = ParseBehavior(*b, path + ".behavior");
  }
  if (w.behavior.kind == BehaviorKind::kInput && !w.editable) {
    Fail(path + ".behavior", "input behavior on a non-editable widget");
  }
  return w;
}

std::string Qualify(const std::string& name, const std::string& package) {
  if (name.empty()) return name;
  if (name.front() == '.') return package + name;
  if (name.find('.') == std::string::npos) return package + "." + name;
  return name;
}

void EscapeInto(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
}

const SimWidget& RowWidget() {
  static const SimWidget* w = [] {
    auto* row = new SimWidget;
    row->id = "row";
    row->class_name = "android.widget.TextView";
    return row;
  }();
  return *w;
}

const SimWidget& ProgressWidget() {
  static const SimWidget* w = [] {
    auto* bar = new SimWidget;
    bar->id = "progress";
    bar->class_name = "android.widget.ProgressBar";
    return bar;
  }();
  return *w;
}

constexpr int kRowHeight = 100;

}  // namespace

SimAppSpec LoadSimAppSpec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail("$", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) Fail("$", "expected an object");
  SimAppSpec spec;
  spec.package = ReqString(doc, "package", "$");
  if (const json* screen = Field(doc, "screen")) {
    spec.screen_width = static_cast<int>(OptInt(*screen, "width", "$.screen", 1080));
    spec.screen_height = static_cast<int>(OptInt(*screen, "height", "$.screen", 1920));
    if (spec.screen_width <= 0 || spec.screen_height <= 0) {
      Fail("$.screen", "dimensions must be positive");
    }
  }
  const json* comps = Field(doc, "components");
  if (comps == nullptr || !comps->is_array()) {
    Fail("$.components", "expected an array");
  }
  std::set<std::string> component_names;
  std::set<std::string> screen_names;
  for (size_t ci = 0; ci < comps->size(); ++ci) {
    const std::string cpath = "$.components[" + std::to_string(ci) + "]";
    const json& c = (*comps)[ci];
    if (!c.is_object()) Fail(cpath, "expected an object");
    SimComponent comp;
    comp.name = Qualify(ReqString(c, "name", cpath), spec.package);
    if (!component_names.insert(comp.name).second) {
      Fail(cpath + ".name", "duplicate component " + comp.name);
    }
    const std::string kind = OptString(c, "kind", cpath);
    if (!kind.empty()) {
      auto k = ParseComponentKind(kind);
      if (!k) Fail(cpath + ".kind", "unknown kind '" + kind + "'");
      comp.kind = *k;
    }
    if (const json* filters = Field(c, "intent_filters")) {
      if (!filters->is_array()) Fail(cpath + ".intent_filters", "expected an array");
      for (size_t fi = 0; fi < filters->size(); ++fi) {
        const std::string fpath =
            cpath + ".intent_filters[" + std::to_string(fi) + "]";
        IntentFilter f;
        f.actions = OptStrings((*filters)[fi], "actions", fpath);
        f.categories = OptStrings((*filters)[fi], "categories", fpath);
        f.data_schemes = OptStrings((*filters)[fi], "schemes", fpath);
        if (f.actions.empty()) Fail(fpath + ".actions", "at least one action");
        comp.intent_filters.push_back(std::move(f));
      }
    }
    comp.exported =
        OptBool(c, "exported", cpath, !comp.intent_filters.empty());
    comp.entry = OptString(c, "entry", cpath);
    if (const json* crash = Field(c, "crash_on_launch")) {
      comp.crash_on_launch = ParseCrash(*crash, cpath + ".crash_on_launch");
    }
    if (const json* crash = Field(c, "on_broadcast")) {
      comp.on_broadcast = ParseCrash(*crash, cpath + ".on_broadcast");
    }
    if (const json* screens = Field(c, "screens")) {
      if (!screens->is_array()) Fail(cpath + ".screens", "expected an array");
      for (size_t si = 0; si < screens->size(); ++si) {
        const std::string spath = cpath + ".screens[" + std::to_string(si) + "]";
        const json& s = (*screens)[si];
        if (!s.is_object()) Fail(spath, "expected an object");
        SimScreen screen;
        screen.name = ReqString(s, "name", spath);
        if (!screen_names.insert(screen.name).second) {
          Fail(spath + ".name", "duplicate screen " + screen.name);
        }
        screen.overlay = OptBool(s, "overlay", spath);
        screen.menu = OptString(s, "menu", spath);
        screen.package = OptString(s, "package", spath);
        screen.component = OptString(s, "component", spath);
        const json* widgets = Field(s, "widgets");
        if (widgets != nullptr) {
          if (!widgets->is_array()) Fail(spath + ".widgets", "expected an array");
          std::set<std::string> ids;
          for (size_t wi = 0; wi < widgets->size(); ++wi) {
            const std::string wpath =
                spath + ".widgets[" + std::to_string(wi) + "]";
            SimWidget w = ParseWidget((*widgets)[wi], wpath);
            if (!w.parent.empty() && ids.count(w.parent) == 0) {
              Fail(wpath + ".parent", "unknown or later widget " + w.parent);
            }
            if (!ids.insert(w.id).second) {
              Fail(wpath + ".id", "duplicate widget id " + w.id);
            }
            screen.widgets.push_back(std::move(w));
          }
        }
        comp.screens.push_back(std::move(screen));
      }
    }
    if (comp.kind == ComponentKind::kActivity) {
      const bool has_entry = std::any_of(
          comp.screens.begin(), comp.screens.end(),
          [&](const SimScreen& s) { return s.name == comp.entry; });
      if (!has_entry) {
        Fail(cpath + ".entry", "entry screen '" + comp.entry + "' not found");
      }
    }
    spec.components.push_back(std::move(comp));
  }
  if (spec.components.empty()) Fail("$.components", "no components");
  // Cross references.
  for (size_t ci = 0; ci < spec.components.size(); ++ci) {
    const SimComponent& comp = spec.components[ci];
    for (size_t si = 0; si < comp.screens.size(); ++si) {
      const SimScreen& screen = comp.screens[si];
      const std::string spath = "$.components[" + std::to_string(ci) +
                                "].screens[" + std::to_string(si) + "]";
      if (!screen.menu.empty() && screen_names.count(screen.menu) == 0) {
        Fail(spath + ".menu", "unknown screen '" + screen.menu + "'");
      }
      std::set<std::string> ids;
      for (const SimWidget& w : screen.widgets) ids.insert(w.id);
      for (size_t wi = 0; wi < screen.widgets.size(); ++wi) {
        const SimBehavior& b = screen.widgets[wi].behavior;
        const std::string bpath =
            spath + ".widgets[" + std::to_string(wi) + "].behavior";
        if ((b.kind == BehaviorKind::kNavigate ||
             b.kind == BehaviorKind::kPopup ||
             b.kind == BehaviorKind::kShowProgress) &&
            screen_names.count(b.screen) == 0) {
          Fail(bpath + ".screen", "unknown screen '" + b.screen + "'");
        }
        if (b.kind == BehaviorKind::kAppendListItem && ids.count(b.list) == 0) {
          Fail(bpath + ".list", "unknown widget '" + b.list + "'");
        }
        if (b.kind == BehaviorKind::kRotateReveal && ids.count(b.widget) == 0) {
          Fail(bpath + ".widget", "unknown widget '" + b.widget + "'");
        }
      }
    }
  }
  return spec;
}

SimAppSpec LoadSimAppSpecFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return LoadSimAppSpec(buf.str());
}

Manifest ManifestFromSimSpec(const SimAppSpec& spec) {
  Manifest m;
  m.package_name = spec.package;
  for (const SimComponent& c : spec.components) {
    m.components.push_back({c.name, c.kind, c.exported, c.intent_filters});
  }
  return m;
}

// ---- SimApp ----------------------------------------------------------------

SimApp::SimApp(SimAppSpec spec) : spec_(std::move(spec)) {
  for (size_t ci = 0; ci < spec_.components.size(); ++ci) {
    for (size_t si = 0; si < spec_.components[ci].screens.size(); ++si) {
      screen_index_[spec_.components[ci].screens[si].name] =
          static_cast<int>(screens_.size());
      screens_.push_back({static_cast<int>(ci), static_cast<int>(si)});
    }
  }
}

void SimApp::SetNow(int64_t now_ms) {
  now_ms_ = std::max(now_ms_, now_ms);
  Tick();
}

int SimApp::FindScreen(const std::string& name) const {
  auto it = screen_index_.find(name);
  return it == screen_index_.end() ? -1 : it->second;
}

const SimScreen& SimApp::ScreenOf(const Instance& inst) const {
  const ScreenRef& ref = screens_[inst.screen];
  return spec_.components[ref.component].screens[ref.screen];
}

int SimApp::ComponentOfScreen(int screen) const {
  return screens_[screen].component;
}

SimApp::Instance SimApp::NewInstance(int screen) const {
  Instance inst;
  inst.screen = screen;
  return inst;
}

Rect SimApp::ScreenRect() const {
  return {0, 0, spec_.screen_width, spec_.screen_height};
}

std::string SimApp::TopScreenName() const {
  if (at_home_ || stack_.empty()) return {};
  return ScreenOf(stack_.back()).name;
}

void SimApp::Tick() {
  for (size_t i = 0; i < stack_.size(); ++i) {
    Instance& inst = stack_[i];
    if (!inst.loading || inst.loading_until < 0 ||
        now_ms_ < inst.loading_until) {
      continue;
    }
    inst.loading = false;
    if (i + 1 == stack_.size()) {
      const int target = FindScreen(inst.loading_target);
      stack_.push_back(NewInstance(target));
      return;
    }
  }
}

std::vector<SimApp::LiveWidget> SimApp::LiveWidgets(
    const Instance& inst) const {
  const SimScreen& screen = ScreenOf(inst);
  std::vector<LiveWidget> live;
  std::map<std::string, int> live_index;
  // Widgets are declared parent-first, so one pass keeps pre-order as long
  // as children are emitted right after their subtree root.
  std::map<std::string, std::vector<const SimWidget*>> children;
  std::vector<const SimWidget*> top;
  for (const SimWidget& w : screen.widgets) {
    if (w.hidden && inst.revealed.count(w.id) == 0) continue;
    if (w.parent.empty()) {
      top.push_back(&w);
    } else {
      children[w.parent].push_back(&w);
    }
  }
  std::function<void(const SimWidget*, int)> emit = [&](const SimWidget* w,
                                                        int parent) {
    LiveWidget lw{w, w->bounds, w->text, false, parent};
    if (auto it = inst.texts.find(w->id); it != inst.texts.end()) {
      lw.text = it->second;
    }
    if (auto it = inst.checked.find(w->id); it != inst.checked.end()) {
      lw.checked = it->second;
    }
    const int self = static_cast<int>(live.size());
    live.push_back(lw);
    live_index[w->id] = self;
    for (const SimWidget* c : children[w->id]) emit(c, self);
    auto rows = list_rows_.find(screen.name + "/" + w->id);
    if (rows != list_rows_.end()) {
      for (int r = 0; r < rows->second; ++r) {
        Rect b{w->bounds.x1, w->bounds.y1 + r * kRowHeight, w->bounds.x2,
               w->bounds.y1 + (r + 1) * kRowHeight};
        live.push_back({&RowWidget(), b, "Item " + std::to_string(r + 1),
                        false, self});
      }
    }
  };
  for (const SimWidget* w : top) emit(w, -1);
  if (inst.loading) {
    const Rect s = ScreenRect();
    const int cx = s.Width() / 2, cy = s.Height() / 2;
    live.push_back({&ProgressWidget(), {cx - 60, cy - 60, cx + 60, cy + 60},
                    "", false, -1});
  }
  return live;
}

int SimApp::HitTest(const std::vector<LiveWidget>& live, int x, int y,
                    bool want_scrollable) const {
  int hit = -1;
  for (size_t i = 0; i < live.size(); ++i) {
    if (live[i].bounds.Contains(x, y)) hit = static_cast<int>(i);
  }
  while (hit >= 0) {
    const SimWidget& w = *live[hit].spec;
    if (want_scrollable ? w.scrollable
                        : (w.clickable || w.checkable || w.editable ||
                           w.long_clickable)) {
      return hit;
    }
    hit = live[hit].parent;
  }
  return -1;
}

void SimApp::PopOverlays() {
  while (!stack_.empty() && ScreenOf(stack_.back()).overlay) stack_.pop_back();
}

void SimApp::Crash(const SimCrash& crash) {
  CrashEvent e;
  e.exception_type = crash.exception_type;
  e.message = crash.message;
  e.stack_top_frame = crash.frame;
  e.fatal = crash.fatal;
  e.mono_ms = now_ms_;
  e.component = CurrentComponent();
  pending_crashes_.push_back(std::move(e));
  if (crash.fatal && launched_component_ >= 0) {
    const SimComponent& c = spec_.components[launched_component_];
    stack_.clear();
    stack_.push_back(NewInstance(FindScreen(c.entry)));
    at_home_ = false;
  }
}

void SimApp::Apply(const SimWidget& w, int instance_index) {
  Instance& inst = stack_[instance_index];
  const SimBehavior& b = w.behavior;
  switch (b.kind) {
    case BehaviorKind::kNone:
      if (w.checkable) inst.checked[w.id] = !inst.checked[w.id];
      break;
    case BehaviorKind::kToggle:
      inst.checked[w.id] = !inst.checked[w.id];
      break;
    case BehaviorKind::kNavigate:
      PopOverlays();
      stack_.push_back(NewInstance(FindScreen(b.screen)));
      break;
    case BehaviorKind::kPopup:
      stack_.push_back(NewInstance(FindScreen(b.screen)));
      break;
    case BehaviorKind::kAppendListItem:
      ++list_rows_[ScreenOf(inst).name + "/" + b.list];
      break;
    case BehaviorKind::kInput:
    case BehaviorKind::kRotateReveal:
      break;
    case BehaviorKind::kCrash:
      if (!b.crash_on_rotate) Crash(b.crash);
      break;
    case BehaviorKind::kShowProgress:
      inst.loading = true;
      inst.loading_until = b.duration_ms < 0 ? -1 : now_ms_ + b.duration_ms;
      inst.loading_target = b.screen;
      break;
    case BehaviorKind::kBack:
      PressBack();
      break;
  }
}

bool SimApp::Launch(const Intent& intent) {
  Tick();
  for (size_t ci = 0; ci < spec_.components.size(); ++ci) {
    const SimComponent& c = spec_.components[ci];
    if (c.name != intent.target) continue;
    if (!c.exported) return false;
    if (c.kind == ComponentKind::kService) {
      started_services_.push_back(c.name);
      return true;
    }
    if (c.kind != ComponentKind::kActivity) return false;
    if (c.crash_on_launch) {
      stack_.clear();
      at_home_ = true;
      launched_component_ = -1;
      Crash(*c.crash_on_launch);
      return false;
    }
    stack_.clear();
    stack_.push_back(NewInstance(FindScreen(c.entry)));
    launched_component_ = static_cast<int>(ci);
    at_home_ = false;
    return true;
  }
  return false;
}

void SimApp::Broadcast(const Intent& intent) {
  Tick();
  for (const SimComponent& c : spec_.components) {
    if (c.kind != ComponentKind::kReceiver) continue;
    const bool matches = std::any_of(
        c.intent_filters.begin(), c.intent_filters.end(),
        [&](const IntentFilter& f) {
          return std::find(f.actions.begin(), f.actions.end(), intent.action) !=
                 f.actions.end();
        });
    if (!matches) continue;
    received_broadcasts_.push_back(intent);
    if (c.on_broadcast) {
      CrashEvent e;
      e.exception_type = c.on_broadcast->exception_type;
      e.message = c.on_broadcast->message;
      e.stack_top_frame = c.on_broadcast->frame;
      e.fatal = c.on_broadcast->fatal;
      e.mono_ms = now_ms_;
      e.component = c.name;
      pending_crashes_.push_back(std::move(e));
    }
  }
}

void SimApp::Tap(int x, int y) {
  Tick();
  if (at_home_ || stack_.empty()) return;
  const int top = static_cast<int>(stack_.size()) - 1;
  const auto live = LiveWidgets(stack_[top]);
  const int hit = HitTest(live, x, y, false);
  if (hit < 0) return;
  const SimWidget& w = *live[hit].spec;
  if (w.editable || !(w.clickable || w.checkable)) return;
  Apply(w, top);
}

void SimApp::LongPress(int x, int y) {
  Tick();
  if (at_home_ || stack_.empty()) return;
  const int top = static_cast<int>(stack_.size()) - 1;
  const auto live = LiveWidgets(stack_[top]);
  const int hit = HitTest(live, x, y, false);
  if (hit < 0) return;
  const SimWidget& w = *live[hit].spec;
  if (!w.long_clickable) return;
  Apply(w, top);
}

void SimApp::Swipe(int x1, int y1, int, int) {
  Tick();
  if (at_home_ || stack_.empty()) return;
  const int top = static_cast<int>(stack_.size()) - 1;
  const auto live = LiveWidgets(stack_[top]);
  const int hit = HitTest(live, x1, y1, true);
  if (hit < 0) return;
  Apply(*live[hit].spec, top);
}

void SimApp::InputText(const Rect& target_bounds, const std::string& text) {
  Tick();
  if (at_home_ || stack_.empty()) return;
  Instance& inst = stack_.back();
  for (const LiveWidget& lw : LiveWidgets(inst)) {
    if (!lw.spec->editable || lw.bounds != target_bounds) continue;
    const std::string& pattern = lw.spec->behavior.validator;
    if (!pattern.empty() && !std::regex_match(text, std::regex(pattern))) {
      return;
    }
    inst.texts[lw.spec->id] = text;
    return;
  }
}

void SimApp::PressBack() {
  Tick();
  if (at_home_) return;
  if (!stack_.empty()) stack_.pop_back();
  if (stack_.empty()) at_home_ = true;
}

void SimApp::PressMenu() {
  Tick();
  if (at_home_ || stack_.empty()) return;
  const SimScreen& top = ScreenOf(stack_.back());
  if (stack_.size() > 1 && top.overlay &&
      ScreenOf(stack_[stack_.size() - 2]).menu == top.name) {
    stack_.pop_back();
    return;
  }
  if (!top.menu.empty()) stack_.push_back(NewInstance(FindScreen(top.menu)));
}

void SimApp::PressHome() {
  Tick();
  at_home_ = true;
}

void SimApp::ResumeApp() {
  Tick();
  if (launched_component_ < 0) return;
  at_home_ = false;
  if (stack_.empty()) {
    stack_.push_back(
        NewInstance(FindScreen(spec_.components[launched_component_].entry)));
  }
}

void SimApp::SetOrientation(Orientation o) {
  Tick();
  if (o == orientation_) return;
  orientation_ = o;
  if (o != Orientation::kLandscape || at_home_ || stack_.empty()) return;
  Instance& inst = stack_.back();
  const SimScreen& screen = ScreenOf(inst);
  std::optional<SimCrash> crash;
  for (const SimWidget& w : screen.widgets) {
    if (w.hidden && inst.revealed.count(w.id) == 0) continue;
    if (w.behavior.kind == BehaviorKind::kRotateReveal) {
      inst.revealed.insert(w.behavior.widget);
    }
    if (w.behavior.kind == BehaviorKind::kCrash && w.behavior.crash_on_rotate &&
        !crash) {
      crash = w.behavior.crash;
    }
  }
  if (crash) Crash(*crash);
}

std::string SimApp::CurrentComponent() const {
  if (at_home_ || stack_.empty()) return std::string(kLauncherComponent);
  const Instance& inst = stack_.back();
  const SimScreen& screen = ScreenOf(inst);
  if (!screen.component.empty()) return screen.component;
  return spec_.components[ComponentOfScreen(inst.screen)].name;
}

std::string SimApp::DumpHierarchy() const {
  const Rect s = ScreenRect();
  std::string out =
      "<?xml version='1.0' encoding='UTF-8' standalone='yes' ?>"
      "<hierarchy rotation=\"";
  out += orientation_ == Orientation::kLandscape ? "1" : "0";
  auto node_open = [&out](int index, std::string_view text,
                          std::string_view rid, std::string_view cls,
                          std::string_view pkg, std::string_view desc,
                          bool checkable, bool checked, bool clickable,
                          bool focusable, bool long_clickable,
                          bool scrollable, bool editable, const Rect& b) {
    auto flag = [](bool v) { return v ? "\"true\"" : "\"false\""; };
    out += "<node index=\"" + std::to_string(index) + "\" text=\"";
    EscapeInto(out, text);
    out += "\" resource-id=\"";
    EscapeInto(out, rid);
    out += "\" class=\"";
    EscapeInto(out, cls);
    out += "\" package=\"";
    EscapeInto(out, pkg);
    out += "\" content-desc=\"";
    EscapeInto(out, desc);
    out += "\" checkable=";
    out += flag(checkable);
    out += " checked=";
    out += flag(checked);
    out += " clickable=";
    out += flag(clickable);
    out += " enabled=\"true\" focusable=";
    out += flag(focusable);
    out += " long-clickable=";
    out += flag(long_clickable);
    out += " scrollable=";
    out += flag(scrollable);
    if (editable) out += " editable=\"true\"";
    out += " bounds=\"" + FormatBounds(b) + "\">";
  };
  if (at_home_ || stack_.empty()) {
    out += "\" window=\"launcher\" overlay=\"false\">";
    node_open(0, "", "", "android.widget.FrameLayout", kLauncherPackage, "",
              false, false, false, false, false, false, false, s);
    node_open(0, "Home", "", "android.widget.TextView", kLauncherPackage, "",
              false, false, false, false, false, false, false,
              {0, 0, s.x2, 200});
    out += "</node></node></hierarchy>";
    return out;
  }
  const Instance& inst = stack_.back();
  const SimScreen& screen = ScreenOf(inst);
  const std::string pkg = screen.package.empty() ? spec_.package : screen.package;
  out += "\" window=\"";
  EscapeInto(out, screen.name);
  out += "\" overlay=\"";
  out += screen.overlay ? "true" : "false";
  out += "\">";
  const auto live = LiveWidgets(inst);
  Rect root = s;
  if (screen.overlay && !live.empty()) {
    root = live.front().bounds;
    for (const LiveWidget& lw : live) {
      root.x1 = std::min(root.x1, lw.bounds.x1);
      root.y1 = std::min(root.y1, lw.bounds.y1);
      root.x2 = std::max(root.x2, lw.bounds.x2);
      root.y2 = std::max(root.y2, lw.bounds.y2);
    }
  }
  std::vector<std::vector<int>> kids(live.size());
  std::vector<int> top;
  for (size_t i = 0; i < live.size(); ++i) {
    if (live[i].parent < 0) {
      top.push_back(static_cast<int>(i));
    } else {
      kids[live[i].parent].push_back(static_cast<int>(i));
    }
  }
  std::function<void(int, int)> emit = [&](int i, int sibling) {
    const LiveWidget& lw = live[i];
    const SimWidget& w = *lw.spec;
    const std::string rid = pkg + ":id/" + w.id;
    node_open(sibling, lw.text, rid, w.class_name, pkg, w.content_desc,
              w.checkable, lw.checked, w.clickable,
              w.clickable || w.editable || w.checkable, w.long_clickable,
              w.scrollable, w.editable && !IsEditorClass(w.class_name),
              lw.bounds);
    int n = 0;
    for (int c : kids[i]) emit(c, n++);
    out += "</node>";
  };
  node_open(0, "", "", "android.widget.FrameLayout", pkg, "", false, false,
            false, false, false, false, false, root);
  int n = 0;
  for (int i : top) emit(i, n++);
  out += "</node></hierarchy>";
  return out;
}

std::vector<CrashEvent> SimApp::DrainCrashEvents() {
  std::vector<CrashEvent> out;
  out.swap(pending_crashes_);
  return out;
}

std::string SimApp::ModelStateKey() const {
  std::ostringstream k;
  k << (at_home_ ? 'H' : 'A') << (orientation_ == Orientation::kLandscape)
    << '|' << launched_component_ << '|';
  for (const Instance& inst : stack_) {
    k << inst.screen << '{';
    for (const auto& [id, t] : inst.texts) k << id << '=' << t << ',';
    k << '}';
    for (const auto& [id, c] : inst.checked) k << id << (c ? '+' : '-');
    for (const auto& id : inst.revealed) k << '^' << id;
    if (inst.loading) k << "L" << inst.loading_until << inst.loading_target;
    k << ';';
  }
  for (const auto& [list, rows] : list_rows_) k << list << '#' << rows;
  return k.str();
}

// ---- SimDevice -------------------------------------------------------------

bool SimDevice::Launch(const Intent& intent) {
  Sync();
  return app_.Launch(intent);
}
void SimDevice::Broadcast(const Intent& intent) {
  Sync();
  app_.Broadcast(intent);
}
void SimDevice::Tap(int x, int y) {
  Sync();
  app_.Tap(x, y);
}
void SimDevice::LongPress(int x, int y) {
  Sync();
  app_.LongPress(x, y);
}
void SimDevice::Swipe(int x1, int y1, int x2, int y2, int) {
  Sync();
  app_.Swipe(x1, y1, x2, y2);
}
void SimDevice::InputText(const Widget& target, const std::string& text) {
  Sync();
  app_.InputText(target.bounds, text);
}
void SimDevice::PressBack() {
  Sync();
  app_.PressBack();
}
void SimDevice::PressEnter() {
  Sync();
  app_.PressEnter();
}
void SimDevice::PressMenu() {
  Sync();
  app_.PressMenu();
}
void SimDevice::PressHome() {
  Sync();
  app_.PressHome();
}
void SimDevice::ResumeApp() {
  Sync();
  app_.ResumeApp();
}
void SimDevice::SetOrientation(Orientation o) {
  Sync();
  app_.SetOrientation(o);
}
std::string SimDevice::DumpHierarchy() {
  Sync();
  return app_.DumpHierarchy();
}
std::string SimDevice::Screenshot() {
  Sync();
  const UiSnapshot snapshot = ParseHierarchy(
      app_.DumpHierarchy(), app_.CurrentComponent(), app_.ScreenRect());
  return EncodePng(RenderWireframe(snapshot));
}
std::string SimDevice::CurrentComponent() {
  Sync();
  return app_.CurrentComponent();
}
std::vector<CrashEvent> SimDevice::DrainCrashEvents() {
  Sync();
  return app_.DrainCrashEvents();
}

}  // namespace vlmfuzz
