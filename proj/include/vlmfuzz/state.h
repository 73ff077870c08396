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


#ifndef VLMFUZZ_STATE_H_
#define VLMFUZZ_STATE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vlmfuzz/action.h"
#include "vlmfuzz/hierarchy.h"
#include "vlmfuzz/manifest.h"

namespace vlmfuzz {

// s = (W, P): the per-widget properties live on Widget itself.
struct UiState {
  StateId id;
  std::string component;
  std::string window;
  std::vector<Widget> widgets;

  static UiState FromSnapshot(const UiSnapshot& snapshot);
  bool operator==(const UiState&) const = default;
};

struct Transition {
  StateId from;
  std::string action;  // DSL form
  StateId to;

  auto operator<=>(const Transition&) const = default;
};

struct TransitionStep {
  UiState state;  // state before `action`
  Action action;
  bool operator==(const TransitionStep&) const = default;
};

struct TransitionRecord {
  std::optional<Intent> origin;
  std::vector<TransitionStep> steps;

  size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
};

TransitionRecord RecordStep(TransitionRecord record, UiState state,
                            Action action);

// UIStack. Entries are UI keys with the StateId seen when pushed.
class UiStack {
 public:
  bool Contains(const std::string& key) const;
  std::optional<StateId> PushedId(const std::string& key) const;
  // No-op returning false when `key` is already present.
  bool Push(const std::string& key, StateId id);
  void Pop();
  const std::string* Top() const;
  size_t size() const { return entries_.size(); }
  const std::vector<std::pair<std::string, StateId>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, StateId>> entries_;
};

class VisitCounter {
 public:
  int Get(const std::string& key) const;
  int Increment(const std::string& key);
  const std::map<std::string, int>& counts() const { return counts_; }

 private:
  std::map<std::string, int> counts_;
};

struct StateInfo {
  std::string component;
  std::string window;
  int widget_count = 0;
  int64_t first_seen_ms = 0;
};

class ExplorationGraph {
 public:
  // True when the state is new.
  bool AddState(const UiState& state, int64_t now_ms);
  // Throws kPrecondition when an endpoint is unknown. True when new.
  bool AddTransition(const Transition& t);

  bool HasState(const StateId& id) const { return states_.count(id) > 0; }
  size_t StateCount() const { return states_.size(); }
  size_t TransitionCount() const { return transitions_.size(); }
  const StateInfo* Info(const StateId& id) const;
  std::set<StateId> StateIds() const;
  const std::set<Transition>& transitions() const { return transitions_; }
  // States in discovery order.
  const std::vector<StateId>& order() const { return order_; }

  // `S\tid\tcomponent\twidget_count` lines, then `T\tfrom\taction\tto`.
  void ExportTsv(std::ostream& out) const;

 private:
  std::map<StateId, StateInfo> states_;
  std::vector<StateId> order_;
  std::set<Transition> transitions_;
};

// What Replay drives. RecordingDevice implements it.
class ReplayTarget {
 public:
  virtual ~ReplayTarget() = default;
  virtual bool Relaunch(const Intent& origin) = 0;
  virtual void Perform(const Action& action) = 0;
  virtual StateId LiveStateId() = 0;
};

// Relaunches record.origin, re-executes steps[0..n-2] and compares the live
// state with steps[n-1].state. Throws kPrecondition on an empty record or a
// record without origin.
bool Replay(const TransitionRecord& record, ReplayTarget& target);

bool UiItemsChanged(const StateId& prev, const StateId& cur);

enum class StateChange {
  kNone,
  kSameComponentNewWidgets,
  kPopupOverlay,
  kComponentSwitch,
};

std::string_view StateChangeName(StateChange c);

StateChange ClassifyStateChange(const std::string& prev_component,
                                const StateId& prev,
                                const std::string& cur_component,
                                const StateId& cur, bool cur_is_overlay);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_STATE_H_
