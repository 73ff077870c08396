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

#include "vlmfuzz/catalog.h"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

std::string_view KindName(ExtraKind kind) {
  switch (kind) {
    case ExtraKind::kString: return "str";
    case ExtraKind::kInt: return "int";
    case ExtraKind::kBool: return "bool";
  }
  return "str";
}

ExtraSpec ParseExtra(std::string_view field, int line_no) {
  const size_t colon = field.find(':');
  const size_t eq = field.find('=');
  if (colon == std::string_view::npos || eq == std::string_view::npos ||
      eq < colon || colon == 0) {
    throw Error(ErrorCode::kMalformedCatalog,
                "line " + std::to_string(line_no) + ": bad extra '" +
                    std::string(field) + "'");
  }
  ExtraSpec extra;
  extra.key = std::string(field.substr(0, colon));
  const std::string_view kind = field.substr(colon + 1, eq - colon - 1);
  extra.example = std::string(field.substr(eq + 1));
  if (kind == "str") {
    extra.kind = ExtraKind::kString;
  } else if (kind == "int") {
    extra.kind = ExtraKind::kInt;
    char* end = nullptr;
    std::strtoll(extra.example.c_str(), &end, 10);
    if (extra.example.empty() || *end != '\0') {
      throw Error(ErrorCode::kMalformedCatalog,
                  "line " + std::to_string(line_no) + ": '" + extra.example +
                      "' is not an int");
    }
  } else if (kind == "bool") {
    extra.kind = ExtraKind::kBool;
    if (extra.example != "true" && extra.example != "false") {
      throw Error(ErrorCode::kMalformedCatalog,
                  "line " + std::to_string(line_no) + ": '" + extra.example +
                      "' is not a bool");
    }
  } else {
    throw Error(ErrorCode::kMalformedCatalog,
                "line " + std::to_string(line_no) + ": unknown kind '" +
                    std::string(kind) + "'");
  }
  return extra;
}

ExtraValue ToValue(const ExtraSpec& extra) {
  switch (extra.kind) {
    case ExtraKind::kInt: return std::strtoll(extra.example.c_str(), nullptr, 10);
    case ExtraKind::kBool: return extra.example == "true";
    case ExtraKind::kString: break;
  }
  return extra.example;
}

}  // namespace

const BroadcastIntentSpec* BroadcastCatalog::Find(
    std::string_view action) const {
  for (const auto& entry : entries) {
    if (entry.action == action) return &entry;
  }
  return nullptr;
}

BroadcastCatalog ParseCatalog(std::string_view text) {
  BroadcastCatalog catalog;
  std::set<std::string, std::less<>> actions;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (catalog.entries.empty()) catalog.header_comments.push_back(line);
      continue;
    }
    BroadcastIntentSpec spec;
    const size_t tab = line.find('\t');
    spec.action = line.substr(0, tab);
    if (spec.action.empty()) {
      throw Error(ErrorCode::kMalformedCatalog,
                  "line " + std::to_string(line_no) + ": empty action");
    }
    if (tab != std::string::npos) {
      std::string_view rest = std::string_view(line).substr(tab + 1);
      while (!rest.empty()) {
        const size_t semi = rest.find(';');
        const std::string_view field = rest.substr(0, semi);
        if (!field.empty()) spec.extras.push_back(ParseExtra(field, line_no));
        if (semi == std::string_view::npos) break;
        rest.remove_prefix(semi + 1);
      }
    }
    if (!actions.insert(spec.action).second) {
      throw Error(ErrorCode::kMalformedCatalog,
                  "line " + std::to_string(line_no) + ": duplicate action " +
                      spec.action);
    }
    catalog.entries.push_back(std::move(spec));
  }
  return catalog;
}

std::string SerializeCatalog(const BroadcastCatalog& catalog) {
  std::string out;
  for (const auto& comment : catalog.header_comments) {
    out += comment;
    out += '\n';
  }
  for (const auto& entry : catalog.entries) {
    out += entry.action;
    for (size_t i = 0; i < entry.extras.size(); ++i) {
      const auto& e = entry.extras[i];
      out += i == 0 ? '\t' : ';';
      out += e.key;
      out += ':';
      out += KindName(e.kind);
      out += '=';
      out += e.example;
    }
    out += '\n';
  }
  return out;
}

BroadcastCatalog LoadCatalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open catalog " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCatalog(buf.str());
}

std::filesystem::path DefaultCatalogPath() {
  if (const char* dir = std::getenv("VLMFUZZ_DATA_DIR")) {
    return std::filesystem::path(dir) / "broadcast_intents.tsv";
  }
  return std::filesystem::path(VLMFUZZ_DATA_DIR) / "broadcast_intents.tsv";
}

BroadcastLookup LookupBroadcastSpec(std::string_view action,
                                    const BroadcastCatalog& catalog) {
  BroadcastLookup result;
  result.intent.kind = IntentKind::kBroadcast;
  result.intent.action = std::string(action);
  const BroadcastIntentSpec* spec = catalog.Find(action);
  if (spec == nullptr) {
    result.unknown_action = true;
    return result;
  }
  for (const auto& extra : spec->extras) {
    result.intent.extras.emplace(extra.key, ToValue(extra));
  }
  return result;
}

}  // namespace vlmfuzz
