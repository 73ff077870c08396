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


#include "vlmfuzz/hierarchy.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kEditorSuffixes[] = {
    "EditText", "AutoCompleteTextView", "MultiAutoCompleteTextView"};

bool ParseBool(const pt::ptree* attrs, const char* name) {
  if (attrs == nullptr) return false;
  return attrs->get<std::string>(name, "") == "true";
}

std::string Attr(const pt::ptree* attrs, const char* name) {
  if (attrs == nullptr) return {};
  return attrs->get<std::string>(name, "");
}

bool ReadInt(std::string_view& s, int& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr == begin) return false;
  s.remove_prefix(ptr - begin);
  return true;
}

bool Expect(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class Builder {
 public:
  explicit Builder(UiSnapshot& snapshot) : snapshot_(snapshot) {}

  void Walk(const pt::ptree& node, int parent, int sibling,
            bool clickable_ancestor) {
    const auto attrs_opt = node.get_child_optional("<xmlattr>");
    const pt::ptree* attrs = attrs_opt ? &*attrs_opt : nullptr;
    Widget w;
    w.parent = parent;
    w.index = sibling;
    const std::string index = Attr(attrs, "index");
    if (!index.empty()) {
      int v = 0;
      std::string_view sv = index;
      if (ReadInt(sv, v) && sv.empty() && v >= 0) w.index = v;
    }
    w.class_name = Attr(attrs, "class");
    w.text = Attr(attrs, "text");
    w.resource_id = Attr(attrs, "resource-id");
    w.content_desc = Attr(attrs, "content-desc");
    w.package = Attr(attrs, "package");
    const std::string bounds = Attr(attrs, "bounds");
    if (!bounds.empty()) {
      auto r = ParseBounds(bounds);
      if (!r) {
        throw Error(ErrorCode::kMalformedHierarchy,
                    "bad bounds '" + bounds + "'");
      }
      w.bounds = *r;
    }
    w.clickable = ParseBool(attrs, "clickable");
    w.long_clickable = ParseBool(attrs, "long-clickable");
    w.scrollable = ParseBool(attrs, "scrollable");
    w.focusable = ParseBool(attrs, "focusable");
    w.enabled = ParseBool(attrs, "enabled");
    w.checkable = ParseBool(attrs, "checkable");
    w.checked = ParseBool(attrs, "checked");
    w.editable = ParseBool(attrs, "editable") || IsEditorClass(w.class_name);

    const int self = static_cast<int>(snapshot_.widgets.size());
    snapshot_.widgets.push_back(w);
    if (parent < 0) {
      snapshot_.roots.push_back(self);
    } else {
      snapshot_.widgets[parent].children.push_back(self);
    }
    int child_sibling = 0;
    for (const auto& [key, child] : node) {
      if (key != "node") continue;
      Walk(child, self, child_sibling++, clickable_ancestor || w.clickable);
    }
    Widget& me = snapshot_.widgets[self];
    if (me.children.empty() && clickable_ancestor && !me.IsInteractive()) {
      me.inherited_interactive = true;
    }
  }

 private:
  UiSnapshot& snapshot_;
};

void Emit(const UiSnapshot& s, int idx, pt::ptree& parent) {
  const Widget& w = s.widgets[idx];
  pt::ptree node;
  auto b = [](bool v) { return v ? "true" : "false"; };
  node.put("<xmlattr>.index", w.index);
  node.put("<xmlattr>.text", w.text);
  node.put("<xmlattr>.resource-id", w.resource_id);
  node.put("<xmlattr>.class", w.class_name);
  node.put("<xmlattr>.package", w.package);
  node.put("<xmlattr>.content-desc", w.content_desc);
  node.put("<xmlattr>.checkable", b(w.checkable));
  node.put("<xmlattr>.checked", b(w.checked));
  node.put("<xmlattr>.clickable", b(w.clickable));
  node.put("<xmlattr>.enabled", b(w.enabled));
  node.put("<xmlattr>.focusable", b(w.focusable));
  node.put("<xmlattr>.long-clickable", b(w.long_clickable));
  node.put("<xmlattr>.scrollable", b(w.scrollable));
  if (w.editable && !IsEditorClass(w.class_name)) {
    node.put("<xmlattr>.editable", "true");
  }
  node.put("<xmlattr>.bounds", FormatBounds(w.bounds));
  for (int c : w.children) Emit(s, c, node);
  parent.add_child("node", node);
}

Rgb ColorFor(const Widget& w) {
  if (w.editable) return {250, 250, 250};
  if (w.class_name.find("ProgressBar") != std::string::npos) {
    return {120, 160, 220};
  }
  if (w.clickable) return {200, 215, 235};
  if (w.scrollable) return {235, 235, 225};
  return {240, 240, 240};
}

}  // namespace

std::string FormatBounds(const Rect& r) {
  return "[" + std::to_string(r.x1) + "," + std::to_string(r.y1) + "][" +
         std::to_string(r.x2) + "," + std::to_string(r.y2) + "]";
}

std::optional<Rect> ParseBounds(std::string_view s) {
  Rect r;
  if (!Expect(s, '[') || !ReadInt(s, r.x1) || !Expect(s, ',') ||
      !ReadInt(s, r.y1) || !Expect(s, ']') || !Expect(s, '[') ||
      !ReadInt(s, r.x2) || !Expect(s, ',') || !ReadInt(s, r.y2) ||
      !Expect(s, ']') || !s.empty()) {
    return std::nullopt;
  }
  if (r.x1 > r.x2 || r.y1 > r.y2) return std::nullopt;
  return r;
}

bool IsEditorClass(std::string_view class_name) {
  for (std::string_view suffix : kEditorSuffixes) {
    if (class_name.size() >= suffix.size() &&
        class_name.substr(class_name.size() - suffix.size()) == suffix) {
      return true;
    }
  }
  return false;
}

std::string UiSnapshot::package() const {
  if (roots.empty()) return {};
  return widgets[roots.front()].package;
}

UiSnapshot ParseHierarchy(std::string_view xml, std::string_view component,
                          const Rect& screen) {
  pt::ptree tree;
  std::istringstream in{std::string(xml)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kMalformedHierarchy, e.what());
  }
  const auto root = tree.get_child_optional("hierarchy");
  if (!root) {
    throw Error(ErrorCode::kMalformedHierarchy, "no <hierarchy> element");
  }
  UiSnapshot snapshot;
  snapshot.component = std::string(component);
  snapshot.screen = screen;
  const auto attrs_opt = root->get_child_optional("<xmlattr>");
  const pt::ptree* attrs = attrs_opt ? &*attrs_opt : nullptr;
  if (attrs != nullptr) {
    snapshot.rotation = attrs->get<int>("rotation", 0);
  }
  Builder builder(snapshot);
  int sibling = 0;
  for (const auto& [key, child] : *root) {
    if (key == "node") builder.Walk(child, -1, sibling++, false);
  }
  if (snapshot.widgets.empty()) {
    throw Error(ErrorCode::kEmptyHierarchy, "hierarchy has no nodes");
  }
  const std::string overlay = Attr(attrs, "overlay");
  snapshot.overlay = overlay.empty() ? DetectOverlay(snapshot)
                                     : overlay == "true";
  const std::string window = Attr(attrs, "window");
  snapshot.window =
      !window.empty() ? window : (snapshot.overlay ? "overlay" : "main");
  return snapshot;
}

std::string SerializeHierarchy(const UiSnapshot& snapshot) {
  pt::ptree root;
  root.put("<xmlattr>.rotation", snapshot.rotation);
  root.put("<xmlattr>.window", snapshot.window);
  root.put("<xmlattr>.overlay", snapshot.overlay ? "true" : "false");
  for (int r : snapshot.roots) Emit(snapshot, r, root);
  pt::ptree doc;
  doc.add_child("hierarchy", root);
  std::ostringstream out;
  pt::write_xml(out, doc);
  return out.str();
}

bool DetectOverlay(const UiSnapshot& snapshot) {
  int64_t largest = 0;
  for (int r : snapshot.roots) {
    largest = std::max(largest, snapshot.widgets[r].bounds.Area());
  }
  return largest * 10 < snapshot.screen.Area() * 9;
}

std::vector<int> InteractiveIndices(const UiSnapshot& snapshot) {
  std::vector<int> out;
  for (size_t i = 0; i < snapshot.widgets.size(); ++i) {
    if (snapshot.widgets[i].IsInteractive()) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<Widget> InteractiveWidgets(const UiSnapshot& snapshot) {
  std::vector<Widget> out;
  for (int i : InteractiveIndices(snapshot)) out.push_back(snapshot.widgets[i]);
  return out;
}

bool HasTextEditor(const UiSnapshot& snapshot) {
  return std::any_of(snapshot.widgets.begin(), snapshot.widgets.end(),
                     [](const Widget& w) {
                       return w.editable || IsEditorClass(w.class_name);
                     });
}

bool IsVisible(const Widget& w, const Rect& screen) {
  return w.bounds.Area() > 0 && w.bounds.Intersects(screen);
}

bool DetectProgressIndicator(const UiSnapshot& snapshot) {
  for (const Widget& w : snapshot.widgets) {
    if (!IsVisible(w, snapshot.screen)) continue;
    if (w.class_name.find("ProgressBar") != std::string::npos) return true;
    if (Lower(w.text).find("loading") != std::string::npos) return true;
    if (Lower(w.content_desc).find("loading") != std::string::npos) {
      return true;
    }
  }
  return false;
}

std::string StateId::ToString() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

std::optional<StateId> StateId::Parse(std::string_view hex) {
  if (hex.size() != 16) return std::nullopt;
  StateId id;
  auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(),
                                   id.digest, 16);
  if (ec != std::errc() || ptr != hex.data() + hex.size()) return std::nullopt;
  return id;
}

StateId StateSignature(const UiSnapshot& snapshot) {
  std::vector<std::string> prints;
  prints.reserve(snapshot.widgets.size());
  for (const Widget& w : snapshot.widgets) {
    std::string p = w.class_name;
    p += '\x1f';
    p += w.resource_id;
    p += '\x1f';
    p += FormatBounds(w.bounds);
    p += '\x1f';
    for (bool f : {w.clickable, w.long_clickable, w.scrollable, w.focusable,
                   w.enabled, w.editable, w.checkable, w.checked}) {
      p += f ? '1' : '0';
    }
    p += '\x1f';
    p += w.editable ? std::string("\x01") : w.text;
    prints.push_back(std::move(p));
  }
  std::sort(prints.begin(), prints.end());
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1e;
    h *= 0x100000001b3ULL;
  };
  mix(snapshot.component);
  for (const auto& p : prints) mix(p);
  return StateId{h};
}

std::string UiKey(const UiSnapshot& snapshot) {
  return snapshot.component + "#" + snapshot.window;
}

LabeledScreenshot LabelWidgets(const UiSnapshot& snapshot) {
  if (!snapshot.screenshot) {
    throw Error(ErrorCode::kNoScreenshot, "snapshot has no screenshot");
  }
  LabeledScreenshot out;
  out.image = *snapshot.screenshot;
  const double sx = snapshot.screen.Width() > 0
                        ? double(out.image.width()) / snapshot.screen.Width()
                        : 1.0;
  const double sy = snapshot.screen.Height() > 0
                        ? double(out.image.height()) / snapshot.screen.Height()
                        : 1.0;
  const int scale = std::max(1, out.image.width() / 180);
  const Rgb red{220, 30, 30};
  const Rgb white{255, 255, 255};
  int label = 1;
  for (int idx : InteractiveIndices(snapshot)) {
    const Rect& b = snapshot.widgets[idx].bounds;
    const int x1 = static_cast<int>(b.x1 * sx), y1 = static_cast<int>(b.y1 * sy);
    const int x2 = static_cast<int>(b.x2 * sx), y2 = static_cast<int>(b.y2 * sy);
    out.image.StrokeRect(x1, y1, x2, y2, std::max(1, scale / 2), red);
    const int digits = static_cast<int>(std::to_string(label).size());
    out.image.FillRect(x1, y1, x1 + (4 * digits + 1) * scale, y1 + 7 * scale,
                       red);
    out.image.DrawNumber(x1 + scale, y1 + scale, label, scale, white);
    out.label_map.push_back(idx);
    out.anchors.emplace_back(b.x1, b.y1);
    ++label;
  }
  return out;
}

Image RenderWireframe(const UiSnapshot& snapshot, int downscale) {
  downscale = std::max(1, downscale);
  Image image(snapshot.screen.Width() / downscale,
              snapshot.screen.Height() / downscale, {255, 255, 255});
  const Rgb ink{60, 60, 60};
  for (const Widget& w : snapshot.widgets) {
    if (!IsVisible(w, snapshot.screen)) continue;
    const int x1 = w.bounds.x1 / downscale, y1 = w.bounds.y1 / downscale;
    const int x2 = w.bounds.x2 / downscale, y2 = w.bounds.y2 / downscale;
    image.FillRect(x1, y1, x2, y2, ColorFor(w));
    image.StrokeRect(x1, y1, x2, y2, 1, {180, 180, 180});
    const std::string& label = w.text.empty() ? w.content_desc : w.text;
    if (!label.empty()) {
      // Text is drawn as a bar whose length follows the string length.
      const int h = std::max(2, (y2 - y1) / 4);
      const int len = std::min<int>(x2 - x1 - 4, int(label.size()) * 3);
      const int ty = (y1 + y2 - h) / 2;
      image.FillRect(x1 + 2, ty, x1 + 2 + len, ty + h, ink);
    }
  }
  return image;
}

}  // namespace vlmfuzz
