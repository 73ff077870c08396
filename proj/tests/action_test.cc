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

#include <string>
#include <vector>

#include "vlmfuzz/action.h"
#include "vlmfuzz/rng.h"

namespace vlmfuzz {
namespace {

TEST(ParseAction, TapAndKeys) {
  EXPECT_EQ(ParseAction("tap(3)"), Action(Tap{3}));
  EXPECT_EQ(ParseAction(" TAP( 12 ) "), Action(Tap{12}));
  EXPECT_EQ(ParseAction("tap(BACK)"), Action(TapBack{}));
  EXPECT_EQ(ParseAction("tap(enter)"), Action(TapEnter{}));
  EXPECT_EQ(ParseAction("long_press(4)"), Action(LongPress{4}));
}

TEST(ParseAction, RejectsBadLabels) {
  EXPECT_FALSE(ParseAction("tap(0)"));
  EXPECT_FALSE(ParseAction("tap(-2)"));
  EXPECT_FALSE(ParseAction("tap(x)"));
  EXPECT_FALSE(ParseAction("tap(\"3\")"));
  EXPECT_FALSE(ParseAction("tap 3"));
  EXPECT_FALSE(ParseAction("fly(3)"));
}

TEST(ParseAction, InputEscapes) {
  EXPECT_EQ(ParseAction(R"(input(2, "J.K. Rowling"))"),
            Action(Input{2, "J.K. Rowling"}));
  EXPECT_EQ(ParseAction(R"(input(2, "say \"hi\""))"),
            Action(Input{2, "say \"hi\""}));
  // Some models escape the delimiters themselves.
  EXPECT_EQ(ParseAction(R"(input(2, \"Series Name\"))"),
            Action(Input{2, "Series Name"}));
  EXPECT_FALSE(ParseAction(R"(input(2, "unterminated))"));
}

TEST(ParseAction, SwipeAndScroll) {
  EXPECT_EQ(ParseAction("swipe(5, UP, long)"),
            Action(Swipe{5, Direction::kUp, Distance::kLong}));
  EXPECT_EQ(ParseAction("scroll(DOWN)"), Action(Scroll{Direction::kDown, {}}));
  EXPECT_EQ(ParseAction("scroll(up)"), Action(Scroll{Direction::kUp, {}}));
}

TEST(ParseAction, GrammarGatesExtendedActions) {
  EXPECT_TRUE(ParseAction("tap(MENU)", Grammar::kFull));
  EXPECT_FALSE(ParseAction("tap(MENU)", Grammar::kVlm));
  EXPECT_TRUE(ParseAction("rotate(LANDSCAPE)", Grammar::kFull));
  EXPECT_FALSE(ParseAction("rotate(LANDSCAPE)", Grammar::kVlm));
  EXPECT_FALSE(ParseAction("app_switch()", Grammar::kVlm));
}

TEST(ParseActionList, SkipsUnknownTokensWithWarning) {
  const ParsedSteps p = ParseActionList("[tap(2); fly(9); tap(3);]", Grammar::kVlm);
  ASSERT_EQ(p.actions.size(), 2u);
  EXPECT_EQ(p.actions[0], Action(Tap{2}));
  EXPECT_EQ(p.actions[1], Action(Tap{3}));
  EXPECT_EQ(p.warnings.size(), 1u);
}

TEST(ParseActionList, EmptyAndTrailingSeparator) {
  EXPECT_TRUE(ParseActionList("[]", Grammar::kVlm).actions.empty());
  EXPECT_EQ(ParseActionList("[tap(1)]", Grammar::kVlm).actions.size(), 1u);
  EXPECT_EQ(ParseActionList("[tap(1);]", Grammar::kVlm).actions.size(), 1u);
}

TEST(ParseActionList, SeparatorsInsideQuotes) {
  const ParsedSteps p = ParseActionList(
      R"([input(1, "a; b] c"); tap(2);])", Grammar::kVlm);
  ASSERT_EQ(p.actions.size(), 2u);
  EXPECT_EQ(p.actions[0], Action(Input{1, "a; b] c"}));
}

TEST(ActionLabel, TapLike) {
  EXPECT_EQ(ActionLabel(Tap{4}), 4);
  EXPECT_EQ(ActionLabel(Input{2, "x"}), 2);
  EXPECT_FALSE(ActionLabel(TapBack{}));
  EXPECT_TRUE(IsTapLike(Tap{1}));
  EXPECT_TRUE(IsTapLike(LongPress{1}));
  EXPECT_FALSE(IsTapLike(Input{1, "x"}));
}

TEST(FormatAction, LaunchRoundTrip) {
  Intent i;
  i.package_name = "com.x";
  i.target = "com.x.Main";
  i.action = "android.intent.action.VIEW";
  i.categories = {"android.intent.category.BROWSABLE"};
  i.data_uri = "https://fuzz.example/path";
  const Action a = Launch{i};
  const auto back = ParseAction(FormatAction(a), Grammar::kFull);
  ASSERT_TRUE(back);
  EXPECT_EQ(*back, a);
}

TEST(FormatAction, BroadcastRoundTrip) {
  Intent i;
  i.kind = IntentKind::kBroadcast;
  i.action = "android.intent.action.TIMEZONE_CHANGED";
  i.extras["TIMEZONE"] = std::string("Europe/Rome");
  i.extras["TIME_PREF"] = int64_t{1};
  i.extras["FLAG"] = true;
  const Action a = Broadcast{i};
  const auto back = ParseAction(FormatAction(a), Grammar::kFull);
  ASSERT_TRUE(back);
  EXPECT_EQ(*back, a);
}

Action RandomAction(Rng& rng) {
  const int label = 1 + static_cast<int>(rng.Below(40));
  std::string text;
  const size_t len = rng.Below(12);
  for (size_t i = 0; i < len; ++i) {
    text.push_back(static_cast<char>(32 + rng.Below(95)));
  }
  switch (rng.Below(10)) {
    case 0: return Tap{label};
    case 1: return LongPress{label};
    case 2: return Swipe{label, static_cast<Direction>(rng.Below(4)),
                         static_cast<Distance>(rng.Below(3))};
    case 3: return Input{label, text};
    case 4: return TapBack{};
    case 5: return TapEnter{};
    case 6: return TapMenu{};
    case 7: return Scroll{rng.Below(2) ? Direction::kUp : Direction::kDown,
                          rng.Below(2) ? std::optional<int>(label) : std::nullopt};
    case 8: return Rotate{rng.Below(2) ? Orientation::kLandscape
                                       : Orientation::kPortrait};
    default: return AppSwitch{};
  }
}

TEST(FormatAction, RandomRoundTripProperty) {
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const Action a = RandomAction(rng);
    const std::string text = FormatAction(a);
    const auto back = ParseAction(text, Grammar::kFull);
    ASSERT_TRUE(back) << text;
    EXPECT_EQ(*back, a) << text;
  }
}

TEST(FormatAction, ListRoundTripProperty) {
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    std::vector<Action> actions;
    std::string list = "[";
    const size_t n = rng.Below(8);
    for (size_t k = 0; k < n; ++k) {
      actions.push_back(RandomAction(rng));
      list += FormatAction(actions.back()) + "; ";
    }
    list += "]";
    const ParsedSteps p = ParseActionList(list, Grammar::kFull);
    EXPECT_EQ(p.actions, actions) << list;
    EXPECT_TRUE(p.warnings.empty()) << list;
  }
}

}  // namespace
}  // namespace vlmfuzz
