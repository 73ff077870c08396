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

#ifndef VLMFUZZ_CATALOG_H_
#define VLMFUZZ_CATALOG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vlmfuzz/manifest.h"

namespace vlmfuzz {

enum class ExtraKind { kString, kInt, kBool };

struct ExtraSpec {
  std::string key;
  ExtraKind kind = ExtraKind::kString;
  std::string example;  // textual form as stored in the catalog

  bool operator==(const ExtraSpec&) const = default;
};

struct BroadcastIntentSpec {
  std::string action;
  std::vector<ExtraSpec> extras;

  bool operator==(const BroadcastIntentSpec&) const = default;
};

// System broadcast catalog. File format: UTF-8, one record per line,
// `<action>TAB<key>:<kind>=<example>[;<key>:<kind>=<example>...]` with
// kind in {str,int,bool}. Lines starting with '#' are comments; the leading
// comment block is kept so that Serialize(Parse(x)) == x for shipped files.
struct BroadcastCatalog {
  std::vector<std::string> header_comments;
  std::vector<BroadcastIntentSpec> entries;

  const BroadcastIntentSpec* Find(std::string_view action) const;
};

BroadcastCatalog ParseCatalog(std::string_view text);
std::string SerializeCatalog(const BroadcastCatalog& catalog);
BroadcastCatalog LoadCatalog(const std::filesystem::path& path);

// Path of the catalog shipped in data/, honoring VLMFUZZ_DATA_DIR.
std::filesystem::path DefaultCatalogPath();

struct BroadcastLookup {
  Intent intent;
  bool unknown_action = false;  // warning flag: bare broadcast returned
};

BroadcastLookup LookupBroadcastSpec(std::string_view action,
                                    const BroadcastCatalog& catalog);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_CATALOG_H_
