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

#ifndef VLMFUZZ_MANIFEST_H_
#define VLMFUZZ_MANIFEST_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vlmfuzz/rng.h"

namespace vlmfuzz {

enum class ComponentKind { kActivity, kService, kReceiver };

std::string_view ComponentKindName(ComponentKind kind);
std::optional<ComponentKind> ParseComponentKind(std::string_view name);

struct IntentFilter {
  std::vector<std::string> actions;  // never empty once parsed
  std::vector<std::string> categories;
  std::vector<std::string> data_schemes;

  bool operator==(const IntentFilter&) const = default;
};

struct ComponentDecl {
  std::string name;  // fully qualified
  ComponentKind kind = ComponentKind::kActivity;
  bool exported = false;
  std::vector<IntentFilter> intent_filters;

  bool operator==(const ComponentDecl&) const = default;
};

struct Manifest {
  std::string package_name;
  std::vector<ComponentDecl> components;
  // Filters dropped because they declared no action.
  int skipped_filters = 0;
};

// Typed extra value carried by an intent.
using ExtraValue = std::variant<std::string, int64_t, bool>;

enum class IntentKind { kExplicit, kBroadcast };

struct Intent {
  IntentKind kind = IntentKind::kExplicit;
  std::string package_name;  // may be empty for broadcasts
  std::string target;        // component name (explicit) or empty
  std::string action;
  std::vector<std::string> categories;
  std::optional<std::string> data_uri;
  std::map<std::string, ExtraValue> extras;

  bool operator==(const Intent&) const = default;
};

// Parses an AAPT `dump xmltree` text dump or raw AndroidManifest.xml. The
// format is picked from the first non-blank token. Throws kMalformedManifest
// or kEmptyManifest.
Manifest ParseManifest(std::string_view manifest_dump);

// Builds an intent satisfying one uniformly chosen filter of `component`, or a
// bare explicit intent when it has none.
Intent BuildLaunchIntent(const ComponentDecl& component,
                         std::string_view package_name, Rng& rng);

// True iff `intent` carries the filter's first action, its first category
// (when declared) and a data URI of a declared scheme (when declared).
bool IntentSatisfiesFilter(const Intent& intent, const IntentFilter& filter);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_MANIFEST_H_
