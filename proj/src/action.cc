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


#include "vlmfuzz/action.h"

#include <cctype>
#include <charconv>
#include <string>

namespace vlmfuzz {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string Quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

struct Arg {
  std::string value;
  bool quoted = false;
};

// Splits the text between the parentheses into arguments. Strings may be
// delimited by `"` (with backslash escapes) or by `\"` as some models emit.
std::optional<std::vector<Arg>> SplitArgs(std::string_view s) {
  std::vector<Arg> args;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  if (i == s.size()) return args;
  while (true) {
    skip_ws();
    Arg arg;
    if (i + 1 < s.size() && s[i] == '\\' && s[i + 1] == '"') {
      const size_t close = s.find("\\\"", i + 2);
      if (close == std::string_view::npos) return std::nullopt;
      arg.value = std::string(s.substr(i + 2, close - i - 2));
      arg.quoted = true;
      i = close + 2;
    } else if (i < s.size() && s[i] == '"') {
      ++i;
      bool closed = false;
      while (i < s.size()) {
        const char c = s[i++];
        if (c == '\\' && i < s.size()) {
          const char e = s[i++];
          arg.value += e == 'n' ? '\n' : e == 't' ? '\t' : e == 'r' ? '\r' : e;
        } else if (c == '"') {
          closed = true;
          break;
        } else {
          arg.value += c;
        }
      }
      if (!closed) return std::nullopt;
      arg.quoted = true;
    } else {
      const size_t start = i;
      while (i < s.size() && s[i] != ',') ++i;
      arg.value = std::string(Trim(s.substr(start, i - start)));
      if (arg.value.empty()) return std::nullopt;
    }
    args.push_back(std::move(arg));
    skip_ws();
    if (i == s.size()) return args;
    if (s[i] != ',') return std::nullopt;
    ++i;
  }
}

std::optional<int> ParseLabel(const Arg& a) {
  if (a.quoted) return std::nullopt;
  int v = 0;
  const char* b = a.value.data();
  const char* e = b + a.value.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || v < 1) return std::nullopt;
  return v;
}

std::optional<Direction> ParseDirection(std::string_view s) {
  const std::string u = Upper(Trim(s));
  if (u == "UP") return Direction::kUp;
  if (u == "DOWN") return Direction::kDown;
  if (u == "LEFT") return Direction::kLeft;
  if (u == "RIGHT") return Direction::kRight;
  return std::nullopt;
}

std::optional<Distance> ParseDistance(std::string_view s) {
  const std::string u = Upper(Trim(s));
  if (u == "SHORT") return Distance::kShort;
  if (u == "MEDIUM") return Distance::kMedium;
  if (u == "LONG") return Distance::kLong;
  return std::nullopt;
}

std::string JoinExtras(const std::map<std::string, ExtraValue>& extras) {
  std::string out;
  for (const auto& [key, value] : extras) {
    if (!out.empty()) out += ';';
    out += key;
    if (const auto* s = std::get_if<std::string>(&value)) {
      out += ":str=" + *s;
    } else if (const auto* i = std::get_if<int64_t>(&value)) {
      out += ":int=" + std::to_string(*i);
    } else {
      out += std::get<bool>(value) ? ":bool=true" : ":bool=false";
    }
  }
  return out;
}

std::optional<std::map<std::string, ExtraValue>> SplitExtras(
    std::string_view s) {
  std::map<std::string, ExtraValue> extras;
  while (!s.empty()) {
    const size_t semi = s.find(';');
    const std::string_view field = s.substr(0, semi);
    s = semi == std::string_view::npos ? std::string_view() : s.substr(semi + 1);
    if (field.empty()) continue;
    const size_t colon = field.find(':');
    const size_t eq = field.find('=');
    if (colon == std::string_view::npos || eq == std::string_view::npos ||
        eq < colon) {
      return std::nullopt;
    }
    const std::string key(field.substr(0, colon));
    const std::string_view kind = field.substr(colon + 1, eq - colon - 1);
    const std::string value(field.substr(eq + 1));
    if (kind == "str") {
      extras[key] = value;
    } else if (kind == "int") {
      int64_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) {
        return std::nullopt;
      }
      extras[key] = v;
    } else if (kind == "bool") {
      if (value != "true" && value != "false") return std::nullopt;
      extras[key] = value == "true";
    } else {
      return std::nullopt;
    }
  }
  return extras;
}

std::string JoinCategories(const std::vector<std::string>& cats) {
  std::string out;
  for (const auto& c : cats) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::vector<std::string> SplitCategories(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    const size_t comma = s.find(',');
    if (comma != 0) out.emplace_back(s.substr(0, comma));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

// Splits on `;` outside string literals.
std::vector<std::string_view> SplitSteps(std::string_view s) {
  std::vector<std::string_view> out;
  enum { kPlain, kQuoted, kSlashQuoted } mode = kPlain;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    switch (mode) {
      case kPlain:
        if (c == '\\' && i + 1 < s.size() && s[i + 1] == '"') {
          mode = kSlashQuoted;
          ++i;
        } else if (c == '"') {
          mode = kQuoted;
        } else if (c == ';') {
          out.push_back(s.substr(start, i - start));
          start = i + 1;
        }
        break;
      case kQuoted:
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          mode = kPlain;
        }
        break;
      case kSlashQuoted:
        if (c == '\\' && i + 1 < s.size() && s[i + 1] == '"') {
          mode = kPlain;
          ++i;
        }
        break;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

// Index of the first `]` outside string literals, or npos.
size_t FindClose(std::string_view s) {
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (quoted) {
      if (s[i] == '\\') {
        ++i;
      } else if (s[i] == '"') {
        quoted = false;
      }
    } else if (s[i] == '"') {
      quoted = true;
    } else if (s[i] == ']') {
      return i;
    }
  }
  return std::string_view::npos;
}

}  // namespace

std::string_view DirectionName(Direction d) {
  switch (d) {
    case Direction::kUp: return "up";
    case Direction::kDown: return "down";
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
  }
  return "up";
}

std::string_view DistanceName(Distance d) {
  switch (d) {
    case Distance::kShort: return "short";
    case Distance::kMedium: return "medium";
    case Distance::kLong: return "long";
  }
  return "medium";
}

std::optional<int> ActionLabel(const Action& action) {
  if (const auto* a = std::get_if<Tap>(&action)) return a->label;
  if (const auto* a = std::get_if<LongPress>(&action)) return a->label;
  if (const auto* a = std::get_if<Swipe>(&action)) return a->label;
  if (const auto* a = std::get_if<Input>(&action)) return a->label;
  if (const auto* a = std::get_if<Scroll>(&action)) return a->label;
  return std::nullopt;
}

bool IsTapLike(const Action& action) {
  return std::holds_alternative<Tap>(action) ||
         std::holds_alternative<LongPress>(action);
}

std::string FormatAction(const Action& action) {
  struct Visitor {
    std::string operator()(const Tap& a) const {
      return "tap(" + std::to_string(a.label) + ")";
    }
    std::string operator()(const LongPress& a) const {
      return "long_press(" + std::to_string(a.label) + ")";
    }
    std::string operator()(const Swipe& a) const {
      return "swipe(" + std::to_string(a.label) + ", " +
             std::string(DirectionName(a.direction)) + ", " +
             std::string(DistanceName(a.distance)) + ")";
    }
    std::string operator()(const Input& a) const {
      return "input(" + std::to_string(a.label) + ", " + Quote(a.text) + ")";
    }
    std::string operator()(const TapBack&) const { return "tap(BACK)"; }
    std::string operator()(const TapEnter&) const { return "tap(ENTER)"; }
    std::string operator()(const TapMenu&) const { return "tap(MENU)"; }
    std::string operator()(const Scroll& a) const {
      std::string s = a.direction == Direction::kUp ? "scroll(UP" : "scroll(DOWN";
      if (a.label) s += ", " + std::to_string(*a.label);
      return s + ")";
    }
    std::string operator()(const Rotate& a) const {
      return a.orientation == Orientation::kLandscape ? "rotate(LANDSCAPE)"
                                                      : "rotate(PORTRAIT)";
    }
    std::string operator()(const AppSwitch&) const { return "app_switch()"; }
    std::string operator()(const Launch& a) const {
      const Intent& i = a.intent;
      return "launch(" + Quote(i.package_name) + ", " + Quote(i.target) +
             ", " + Quote(i.action) + ", " + Quote(JoinCategories(i.categories)) +
             ", " + Quote(i.data_uri.value_or("")) + ")";
    }
    std::string operator()(const Broadcast& a) const {
      const Intent& i = a.intent;
      return "broadcast(" + Quote(i.package_name) + ", " + Quote(i.action) +
             ", " + Quote(JoinExtras(i.extras)) + ")";
    }
  };
  return std::visit(Visitor{}, action);
}

std::optional<Action> ParseAction(std::string_view text, Grammar grammar) {
  text = Trim(text);
  size_t name_end = 0;
  while (name_end < text.size() &&
         (std::isalpha(static_cast<unsigned char>(text[name_end])) ||
          text[name_end] == '_')) {
    ++name_end;
  }
  if (name_end == 0) return std::nullopt;
  std::string name(text.substr(0, name_end));
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::string_view rest = Trim(text.substr(name_end));
  if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') {
    return std::nullopt;
  }
  const auto args_opt = SplitArgs(rest.substr(1, rest.size() - 2));
  if (!args_opt) return std::nullopt;
  const std::vector<Arg>& args = *args_opt;
  const bool full = grammar == Grammar::kFull;

  if (name == "tap" && args.size() == 1) {
    const std::string u = Upper(args[0].value);
    if (!args[0].quoted) {
      if (u == "BACK") return TapBack{};
      if (u == "ENTER") return TapEnter{};
      if (u == "MENU" && full) return TapMenu{};
    }
    if (auto l = ParseLabel(args[0])) return Tap{*l};
    return std::nullopt;
  }
  if (name == "long_press" && args.size() == 1) {
    if (auto l = ParseLabel(args[0])) return LongPress{*l};
    return std::nullopt;
  }
  if (name == "swipe" && args.size() == 3) {
    auto l = ParseLabel(args[0]);
    auto d = ParseDirection(args[1].value);
    auto dist = ParseDistance(args[2].value);
    if (l && d && dist) return Swipe{*l, *d, *dist};
    return std::nullopt;
  }
  if (name == "input" && args.size() == 2) {
    auto l = ParseLabel(args[0]);
    if (l) return Input{*l, args[1].value};
    return std::nullopt;
  }
  if (name == "scroll" && (args.size() == 1 || (full && args.size() == 2))) {
    auto d = ParseDirection(args[0].value);
    if (!d || (*d != Direction::kUp && *d != Direction::kDown)) {
      return std::nullopt;
    }
    Scroll s{*d, std::nullopt};
    if (args.size() == 2) {
      auto l = ParseLabel(args[1]);
      if (!l) return std::nullopt;
      s.label = *l;
    }
    return s;
  }
  if (!full) return std::nullopt;
  if (name == "rotate" && args.size() == 1) {
    const std::string u = Upper(args[0].value);
    if (u == "LANDSCAPE") return Rotate{Orientation::kLandscape};
    if (u == "PORTRAIT") return Rotate{Orientation::kPortrait};
    return std::nullopt;
  }
  if (name == "app_switch" && args.empty()) return AppSwitch{};
  if (name == "launch" && args.size() == 5) {
    Intent i;
    i.kind = IntentKind::kExplicit;
    i.package_name = args[0].value;
    i.target = args[1].value;
    i.action = args[2].value;
    i.categories = SplitCategories(args[3].value);
    if (!args[4].value.empty()) i.data_uri = args[4].value;
    return Launch{std::move(i)};
  }
  if (name == "broadcast" && args.size() == 3) {
    Intent i;
    i.kind = IntentKind::kBroadcast;
    i.package_name = args[0].value;
    i.action = args[1].value;
    auto extras = SplitExtras(args[2].value);
    if (!extras) return std::nullopt;
    i.extras = std::move(*extras);
    return Broadcast{std::move(i)};
  }
  return std::nullopt;
}

ParsedSteps ParseActionList(std::string_view list, Grammar grammar) {
  ParsedSteps out;
  list = Trim(list);
  if (!list.empty() && list.front() == '[') {
    list.remove_prefix(1);
    const size_t close = FindClose(list);
    if (close != std::string_view::npos) list = list.substr(0, close);
  }
  for (std::string_view token : SplitSteps(list)) {
    token = Trim(token);
    if (token.empty()) continue;
    if (auto action = ParseAction(token, grammar)) {
      out.actions.push_back(std::move(*action));
    } else {
      out.warnings.push_back("skipped step '" + std::string(token) + "'");
    }
  }
  return out;
}

}  // namespace vlmfuzz
