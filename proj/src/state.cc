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


#include "vlmfuzz/state.h"

#include <algorithm>

#include "vlmfuzz/error.h"

namespace vlmfuzz {

UiState UiState::FromSnapshot(const UiSnapshot& snapshot) {
  UiState s;
  s.id = StateSignature(snapshot);
  s.component = snapshot.component;
  s.window = snapshot.window;
  s.widgets = snapshot.widgets;
  return s;
}

TransitionRecord RecordStep(TransitionRecord record, UiState state,
                            Action action) {
  record.steps.push_back({std::move(state), std::move(action)});
  return record;
}

bool UiStack::Contains(const std::string& key) const {
  return PushedId(key).has_value();
}

std::optional<StateId> UiStack::PushedId(const std::string& key) const {
  for (const auto& [k, id] : entries_) {
    if (k == key) return id;
  }
  return std::nullopt;
}

bool UiStack::Push(const std::string& key, StateId id) {
  if (Contains(key)) return false;
  entries_.emplace_back(key, id);
  return true;
}

void UiStack::Pop() {
  if (!entries_.empty()) entries_.pop_back();
}

const std::string* UiStack::Top() const {
  return entries_.empty() ? nullptr : &entries_.back().first;
}

int VisitCounter::Get(const std::string& key) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

int VisitCounter::Increment(const std::string& key) { return ++counts_[key]; }

bool ExplorationGraph::AddState(const UiState& state, int64_t now_ms) {
  auto [it, inserted] = states_.try_emplace(state.id);
  if (inserted) {
    it->second = StateInfo{state.component, state.window,
                           static_cast<int>(state.widgets.size()), now_ms};
    order_.push_back(state.id);
  }
  return inserted;
}

bool ExplorationGraph::AddTransition(const Transition& t) {
  if (!HasState(t.from) || !HasState(t.to)) {
    throw Error(ErrorCode::kPrecondition,
                "transition endpoint unknown: " + t.from.ToString() + " -> " +
                    t.to.ToString());
  }
  return transitions_.insert(t).second;
}

const StateInfo* ExplorationGraph::Info(const StateId& id) const {
  auto it = states_.find(id);
  return it == states_.end() ? nullptr : &it->second;
}

std::set<StateId> ExplorationGraph::StateIds() const {
  std::set<StateId> ids;
  for (const auto& [id, info] : states_) ids.insert(id);
  return ids;
}

void ExplorationGraph::ExportTsv(std::ostream& out) const {
  for (const StateId& id : order_) {
    const StateInfo& info = states_.at(id);
    out << "S\t" << id.ToString() << '\t' << info.component << '\t'
        << info.widget_count << '\n';
  }
  for (const Transition& t : transitions_) {
    out << "T\t" << t.from.ToString() << '\t' << t.action << '\t'
        << t.to.ToString() << '\n';
  }
}

bool Replay(const TransitionRecord& record, ReplayTarget& target) {
  if (record.empty()) {
    throw Error(ErrorCode::kPrecondition, "replay of an empty record");
  }
  if (!record.origin) {
    throw Error(ErrorCode::kPrecondition, "replay record has no origin");
  }
  if (!target.Relaunch(*record.origin)) return false;
  for (size_t i = 0; i + 1 < record.steps.size(); ++i) {
    target.Perform(record.steps[i].action);
  }
  return target.LiveStateId() == record.steps.back().state.id;
}

bool UiItemsChanged(const StateId& prev, const StateId& cur) {
  return prev != cur;
}

std::string_view StateChangeName(StateChange c) {
  switch (c) {
    case StateChange::kNone: return "none";
    case StateChange::kSameComponentNewWidgets: return "same_component_new_widgets";
    case StateChange::kPopupOverlay: return "popup_overlay";
    case StateChange::kComponentSwitch: return "component_switch";
  }
  return "none";
}

StateChange ClassifyStateChange(const std::string& prev_component,
                                const StateId& prev,
                                const std::string& cur_component,
                                const StateId& cur, bool cur_is_overlay) {
  if (prev_component != cur_component) return StateChange::kComponentSwitch;
  if (prev == cur) return StateChange::kNone;
  if (cur_is_overlay) return StateChange::kPopupOverlay;
  return StateChange::kSameComponentNewWidgets;
}

}  // namespace vlmfuzz
