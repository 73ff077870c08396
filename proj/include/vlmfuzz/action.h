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


#ifndef VLMFUZZ_ACTION_H_
#define VLMFUZZ_ACTION_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vlmfuzz/manifest.h"

namespace vlmfuzz {

enum class Direction { kUp, kDown, kLeft, kRight };
enum class Distance { kShort, kMedium, kLong };
enum class Orientation { kPortrait, kLandscape };

// Labels are 1-based positions in InteractiveIndices() of the snapshot the
// action is executed against.
struct Tap {
  int label = 0;
  bool operator==(const Tap&) const = default;
};
struct LongPress {
  int label = 0;
  bool operator==(const LongPress&) const = default;
};
struct Swipe {
  int label = 0;
  Direction direction = Direction::kUp;
  Distance distance = Distance::kMedium;
  bool operator==(const Swipe&) const = default;
};
struct Input {
  int label = 0;
  std::string text;
  bool operator==(const Input&) const = default;
};
struct TapBack {
  bool operator==(const TapBack&) const = default;
};
struct TapEnter {
  bool operator==(const TapEnter&) const = default;
};
struct TapMenu {
  bool operator==(const TapMenu&) const = default;
};
// Scroll the screen, or the labeled scrollable widget when set.
struct Scroll {
  Direction direction = Direction::kDown;  // kUp or kDown
  std::optional<int> label;
  bool operator==(const Scroll&) const = default;
};
struct Rotate {
  Orientation orientation = Orientation::kLandscape;
  bool operator==(const Rotate&) const = default;
};
// HOME followed by bringing the app back.
struct AppSwitch {
  bool operator==(const AppSwitch&) const = default;
};
struct Launch {
  Intent intent;
  bool operator==(const Launch&) const = default;
};
struct Broadcast {
  Intent intent;
  bool operator==(const Broadcast&) const = default;
};

using Action = std::variant<Tap, LongPress, Swipe, Input, TapBack, TapEnter,
                            TapMenu, Scroll, Rotate, AppSwitch, Launch,
                            Broadcast>;

std::optional<int> ActionLabel(const Action& action);
bool IsTapLike(const Action& action);

// Renders in the step DSL, e.g. `input(3, "Java Series")`.
std::string FormatAction(const Action& action);

enum class Grammar {
  kVlm,   // the eight functions offered to the model
  kFull,  // adds menu, rotate, app_switch, launch, broadcast (event logs)
};

struct ParsedSteps {
  std::vector<Action> actions;
  std::vector<std::string> warnings;  // one per skipped token
};

// Parses `[a; b; c;]`. The brackets are optional. Unknown or malformed
// tokens are skipped with a warning. Never throws.
ParsedSteps ParseActionList(std::string_view list, Grammar grammar);

// Single action; nullopt when it does not parse.
std::optional<Action> ParseAction(std::string_view text,
                                  Grammar grammar = Grammar::kFull);

std::string_view DirectionName(Direction d);
std::string_view DistanceName(Distance d);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_ACTION_H_
