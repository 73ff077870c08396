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


#include <gtest/gtest.h>

#include <set>
#include <string>

#include "vlmfuzz/catalog.h"
#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

ErrorCode CodeOf(std::string_view text) {
  try {
    ParseCatalog(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

TEST(Catalog, ShippedFileLoads) {
  const BroadcastCatalog c = LoadCatalog(DefaultCatalogPath());
  EXPECT_GT(c.entries.size(), 50u);
  EXPECT_FALSE(c.header_comments.empty());
  std::set<std::string> actions;
  for (const auto& e : c.entries) EXPECT_TRUE(actions.insert(e.action).second);
}

TEST(Catalog, TimezoneExtras) {
  const BroadcastCatalog c = LoadCatalog(DefaultCatalogPath());
  const BroadcastLookup l =
      LookupBroadcastSpec("android.intent.action.TIMEZONE_CHANGED", c);
  EXPECT_FALSE(l.unknown_action);
  EXPECT_EQ(l.intent.kind, IntentKind::kBroadcast);
  EXPECT_EQ(l.intent.action, "android.intent.action.TIMEZONE_CHANGED");
  EXPECT_TRUE(l.intent.extras.count("TIMEZONE"));
  EXPECT_TRUE(l.intent.extras.count("TIME_PREF"));
}

TEST(Catalog, UnknownActionIsBare) {
  const BroadcastCatalog c = LoadCatalog(DefaultCatalogPath());
  const BroadcastLookup l = LookupBroadcastSpec("com.x.NOT_A_SYSTEM_ACTION", c);
  EXPECT_TRUE(l.unknown_action);
  EXPECT_EQ(l.intent.action, "com.x.NOT_A_SYSTEM_ACTION");
  EXPECT_TRUE(l.intent.extras.empty());
}

TEST(Catalog, EveryEntryResolvesToItsAction) {
  const BroadcastCatalog c = LoadCatalog(DefaultCatalogPath());
  for (const auto& e : c.entries) {
    const BroadcastLookup l = LookupBroadcastSpec(e.action, c);
    EXPECT_EQ(l.intent.action, e.action);
    EXPECT_EQ(l.intent.extras.size(), e.extras.size()) << e.action;
  }
}

TEST(Catalog, TypedExtras) {
  const BroadcastCatalog c =
      ParseCatalog("a.B\tn:int=42;f:bool=false;s:str=x=y\n");
  const BroadcastLookup l = LookupBroadcastSpec("a.B", c);
  EXPECT_EQ(std::get<int64_t>(l.intent.extras.at("n")), 42);
  EXPECT_EQ(std::get<bool>(l.intent.extras.at("f")), false);
  EXPECT_EQ(std::get<std::string>(l.intent.extras.at("s")), "x=y");
}

TEST(Catalog, SerializeRoundTrip) {
  const BroadcastCatalog c = LoadCatalog(DefaultCatalogPath());
  const BroadcastCatalog again = ParseCatalog(SerializeCatalog(c));
  EXPECT_EQ(again.entries, c.entries);
  EXPECT_EQ(again.header_comments, c.header_comments);
}

TEST(Catalog, Malformed) {
  EXPECT_EQ(CodeOf("a.B\ta.B\n"), ErrorCode::kMalformedCatalog);
  EXPECT_EQ(CodeOf("a.B\tk:int=abc\n"), ErrorCode::kMalformedCatalog);
  EXPECT_EQ(CodeOf("a.B\tk:bool=yes\n"), ErrorCode::kMalformedCatalog);
  EXPECT_EQ(CodeOf("a.B\tk:float=1\n"), ErrorCode::kMalformedCatalog);
  EXPECT_EQ(CodeOf("a.B\na.B\n"), ErrorCode::kMalformedCatalog);
  EXPECT_EQ(CodeOf("\tk:str=x\n"), ErrorCode::kMalformedCatalog);
}

TEST(Catalog, CommentsAndBlankLines) {
  const BroadcastCatalog c = ParseCatalog("# top\n\na.B\n# later\r\na.C\r\n");
  EXPECT_EQ(c.entries.size(), 2u);
  EXPECT_EQ(c.header_comments, std::vector<std::string>{"# top"});
  EXPECT_NE(c.Find("a.C"), nullptr);
  EXPECT_EQ(c.Find("a.D"), nullptr);
}

TEST(Catalog, MissingFile) {
  try {
    LoadCatalog("/nonexistent/broadcasts.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace vlmfuzz
