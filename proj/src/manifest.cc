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

#include "vlmfuzz/manifest.h"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <spdlog/spdlog.h>

#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

// Format-neutral element tree; both the XML and the AAPT parser produce it.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<std::unique_ptr<Element>> children;

  const std::string* Attr(std::string_view local_name) const {
    for (const auto& [k, v] : attrs) {
      if (k == local_name) return &v;
    }
    return nullptr;
  }
};

// "android:name" and "http://schemas.android.com/apk/res/android:name" both
// become "name".
std::string LocalName(std::string_view qualified) {
  const size_t colon = qualified.rfind(':');
  return std::string(colon == std::string_view::npos
                         ? qualified
                         : qualified.substr(colon + 1));
}

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::unique_ptr<Element> FromPtree(const std::string& name,
                                   const boost::property_tree::ptree& node) {
  auto elem = std::make_unique<Element>();
  elem->name = name;
  for (const auto& [key, child] : node) {
    if (key == "<xmlattr>") {
      for (const auto& [attr, value] : child) {
        elem->attrs.emplace_back(LocalName(attr), value.data());
      }
    } else if (key == "<xmlcomment>" || key == "<xmltext>") {
      continue;
    } else {
      elem->children.push_back(FromPtree(key, child));
    }
  }
  return elem;
}

std::unique_ptr<Element> ParseXmlManifest(std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw Error(ErrorCode::kMalformedManifest, e.what());
  }
  auto it = tree.find("manifest");
  if (it == tree.not_found()) {
    throw Error(ErrorCode::kMalformedManifest, "no <manifest> root element");
  }
  return FromPtree("manifest", it->second);
}

// Decodes the value part of an AAPT attribute line, e.g.
//   ="com.x.Main" (Raw: "com.x.Main")
//   =(type 0x12)0xffffffff
std::string DecodeAaptValue(std::string_view v) {
  if (v.empty()) return "";
  if (v.front() == '"') {
    std::string out;
    for (size_t i = 1; i < v.size(); ++i) {
      if (v[i] == '\\' && i + 1 < v.size()) {
        out.push_back(v[++i]);
      } else if (v[i] == '"') {
        break;
      } else {
        out.push_back(v[i]);
      }
    }
    return out;
  }
  if (v.starts_with("(type ")) {
    const size_t close = v.find(')');
    if (close == std::string_view::npos) return std::string(v);
    const std::string_view type = v.substr(6, close - 6);
    const std::string raw(TrimView(v.substr(close + 1)));
    const unsigned long long bits = std::strtoull(raw.c_str(), nullptr, 16);
    if (type == "0x12") return bits != 0 ? "true" : "false";
    if (type == "0x10" || type == "0x11") return std::to_string(bits);
    return raw;
  }
  const size_t space = v.find(' ');
  return std::string(v.substr(0, space));
}

std::unique_ptr<Element> ParseAaptDump(std::string_view text) {
  auto document = std::make_unique<Element>();
  document->name = "#document";
  // (indent, element) pairs; the document sentinel sits at indent -1.
  std::vector<std::pair<int, Element*>> open = {{-1, document.get()}};

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const int indent = static_cast<int>(first);
    const std::string_view body = std::string_view(line).substr(first);
    if (body.size() < 2 || body[1] != ':') {
      throw Error(ErrorCode::kMalformedManifest,
                  "line " + std::to_string(line_no) + ": not an xmltree line");
    }
    const char tag = body[0];
    const std::string_view rest = TrimView(body.substr(2));
    if (tag == 'E') {
      while (open.size() > 1 && open.back().first >= indent) open.pop_back();
      auto elem = std::make_unique<Element>();
      const size_t end = rest.find(' ');
      elem->name = std::string(rest.substr(0, end));
      Element* raw = elem.get();
      open.back().second->children.push_back(std::move(elem));
      open.emplace_back(indent, raw);
    } else if (tag == 'A') {
      while (open.size() > 1 && open.back().first >= indent) open.pop_back();
      if (open.size() == 1) {
        throw Error(ErrorCode::kMalformedManifest,
                    "line " + std::to_string(line_no) +
                        ": attribute outside of any element");
      }
      // The qualified name may itself contain "://", so locate the value by
      // the first '=' that follows the optional "(0x...)" resource id.
      size_t eq = rest.find('=');
      const size_t paren = rest.find('(');
      std::string_view name = rest.substr(0, std::min(eq, paren));
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::kMalformedManifest,
                    "line " + std::to_string(line_no) + ": attribute has no value");
      }
      open.back().second->attrs.emplace_back(
          LocalName(name), DecodeAaptValue(rest.substr(eq + 1)));
    }
    // N: (namespace), C: (cdata) and T: lines carry nothing we need.
  }
  for (auto& child : document->children) {
    if (child->name == "manifest") return std::move(child);
  }
  if (document->children.empty()) {
    throw Error(ErrorCode::kEmptyManifest, "dump contains no elements");
  }
  throw Error(ErrorCode::kMalformedManifest, "no manifest element in dump");
}

std::string QualifyName(const std::string& name, const std::string& package) {
  if (name.empty()) return name;
  if (name.front() == '.') return package + name;
  if (name.find('.') == std::string::npos) return package + "." + name;
  return name;
}

std::optional<IntentFilter> ReadFilter(const Element& elem) {
  IntentFilter filter;
  for (const auto& child : elem.children) {
    if (child->name == "action") {
      if (const auto* n = child->Attr("name")) filter.actions.push_back(*n);
    } else if (child->name == "category") {
      if (const auto* n = child->Attr("name")) filter.categories.push_back(*n);
    } else if (child->name == "data") {
      if (const auto* s = child->Attr("scheme")) {
        filter.data_schemes.push_back(*s);
      }
    }
  }
  if (filter.actions.empty()) return std::nullopt;
  return filter;
}

}  // namespace

std::string_view ComponentKindName(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kActivity: return "activity";
    case ComponentKind::kService: return "service";
    case ComponentKind::kReceiver: return "receiver";
  }
  return "activity";
}

std::optional<ComponentKind> ParseComponentKind(std::string_view name) {
  if (name == "activity") return ComponentKind::kActivity;
  if (name == "service") return ComponentKind::kService;
  if (name == "receiver") return ComponentKind::kReceiver;
  return std::nullopt;
}

Manifest ParseManifest(std::string_view manifest_dump) {
  const std::string_view trimmed = TrimView(manifest_dump);
  if (trimmed.empty()) {
    throw Error(ErrorCode::kEmptyManifest, "empty document");
  }
  std::unique_ptr<Element> root;
  if (trimmed.front() == '<') {
    root = ParseXmlManifest(trimmed);
  } else if (trimmed.starts_with("N:") || trimmed.starts_with("E:")) {
    root = ParseAaptDump(manifest_dump);
  } else {
    throw Error(ErrorCode::kMalformedManifest,
                "neither XML nor an AAPT xmltree dump");
  }

  Manifest manifest;
  if (const auto* pkg = root->Attr("package")) manifest.package_name = *pkg;

  std::set<std::string> seen;
  for (const auto& app : root->children) {
    if (app->name != "application") continue;
    for (const auto& elem : app->children) {
      const auto kind = ParseComponentKind(elem->name);
      if (!kind) continue;
      const auto* name = elem->Attr("name");
      if (name == nullptr || name->empty()) {
        throw Error(ErrorCode::kMalformedManifest,
                    "<" + elem->name + "> without a name");
      }
      ComponentDecl decl;
      decl.name = QualifyName(*name, manifest.package_name);
      decl.kind = *kind;
      for (const auto& child : elem->children) {
        if (child->name != "intent-filter") continue;
        if (auto filter = ReadFilter(*child)) {
          decl.intent_filters.push_back(std::move(*filter));
        } else {
          ++manifest.skipped_filters;
          spdlog::warn("skipping intent-filter without action on {}",
                       decl.name);
        }
      }
      if (const auto* exported = elem->Attr("exported")) {
        decl.exported = *exported == "true";
      } else {
        decl.exported = !decl.intent_filters.empty();
      }
      if (!seen.insert(decl.name).second) {
        throw Error(ErrorCode::kMalformedManifest,
                    "duplicate component " + decl.name);
      }
      manifest.components.push_back(std::move(decl));
    }
  }
  if (manifest.components.empty()) {
    throw Error(ErrorCode::kEmptyManifest, "no components declared");
  }
  return manifest;
}

Intent BuildLaunchIntent(const ComponentDecl& component,
                         std::string_view package_name, Rng& rng) {
  Intent intent;
  intent.kind = IntentKind::kExplicit;
  intent.package_name = std::string(package_name);
  intent.target = component.name;
  if (component.intent_filters.empty()) return intent;

  const IntentFilter& filter =
      component.intent_filters[rng.Below(component.intent_filters.size())];
  intent.action = filter.actions.front();
  if (!filter.categories.empty()) {
    intent.categories.push_back(filter.categories.front());
  }
  if (!filter.data_schemes.empty()) {
    const std::string& scheme =
        filter.data_schemes[rng.Below(filter.data_schemes.size())];
    intent.data_uri = scheme + "://fuzz.example/path";
  }
  return intent;
}

bool IntentSatisfiesFilter(const Intent& intent, const IntentFilter& filter) {
  if (filter.actions.empty() || intent.action != filter.actions.front()) {
    return false;
  }
  if (!filter.categories.empty() &&
      (intent.categories.empty() ||
       intent.categories.front() != filter.categories.front())) {
    return false;
  }
  if (filter.data_schemes.empty()) return !intent.data_uri.has_value();
  if (!intent.data_uri) return false;
  return std::any_of(filter.data_schemes.begin(), filter.data_schemes.end(),
                     [&](const std::string& s) {
                       return intent.data_uri->starts_with(s + "://");
                     });
}

}  // namespace vlmfuzz
