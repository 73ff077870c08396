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


#include "vlmfuzz/explorer.h"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "vlmfuzz/error.h"
#include "vlmfuzz/heuristics.h"

namespace vlmfuzz {
namespace {

std::optional<int> LabelOf(const UiSnapshot& snap, const std::string& key) {
  const std::vector<int> idx = InteractiveIndices(snap);
  for (size_t i = 0; i < idx.size(); ++i) {
    if (WidgetKey(snap.widgets[idx[i]]) == key) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

void SetLabel(Action& action, int label) {
  std::visit(
      [label](auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Tap> || std::is_same_v<T, LongPress> ||
                      std::is_same_v<T, Swipe> || std::is_same_v<T, Input>) {
          a.label = label;
        } else if constexpr (std::is_same_v<T, Scroll>) {
          if (a.label) a.label = label;
        }
      },
      action);
}

std::string ComponentOfKey(const std::string& key) {
  return key.substr(0, key.find('#'));
}

}  // namespace

std::string WidgetKey(const Widget& w) {
  return w.class_name + "|" + w.resource_id + "|" + FormatBounds(w.bounds);
}

std::string_view ProgressResultName(ProgressResult r) {
  switch (r) {
    case ProgressResult::kChanged: return "changed";
    case ProgressResult::kTimedOut: return "timed_out";
    case ProgressResult::kNotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

void ExplorerConfig::Validate() const {
  if (tau < 1) throw Error(ErrorCode::kInvalidArgument, "tau must be >= 1");
  if (idle_wait_ms < 0) {
    throw Error(ErrorCode::kInvalidArgument, "idle wait must be >= 0");
  }
  if (progress_timeout_ms < idle_wait_ms) {
    throw Error(ErrorCode::kInvalidArgument,
                "progress timeout must be >= idle wait");
  }
  if (total_budget_seconds <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "budget must be positive");
  }
}

Explorer::Explorer(DeviceAdapter& device, Manifest manifest,
                   ExplorerConfig config, VlmClient* vlm,
                   const BroadcastCatalog* catalog)
    : device_(device),
      manifest_(std::move(manifest)),
      config_(std::move(config)),
      vlm_(vlm),
      catalog_(catalog),
      rng_(config_.rng_seed),
      rec_(device, config_.idle_wait_ms) {}

bool Explorer::OutOfTime() const {
  return device_.clock().NowMs() >= deadline_ms_;
}

bool Explorer::IsAut(const UiSnapshot& snap) const {
  const std::string pkg = snap.package();
  return pkg.empty() || pkg == manifest_.package_name;
}

RunResult Explorer::Run() {
  config_.Validate();
  RunResult result;
  result.started_ms = device_.clock().NowMs();
  std::vector<CrashEvent> setup_crashes;
  result.assessments = AssessComplexity(device_, manifest_, rng_,
                                        config_.idle_wait_ms, &setup_crashes);
  for (CrashEvent& c : setup_crashes) rec_.crashes().push_back(std::move(c));
  // Assessment is paid for out of a fixed setup share of the budget.
  const int64_t setup = config_.total_budget_seconds / 10;
  result.plan = AllocateBudget(result.assessments,
                               config_.total_budget_seconds - setup);
  rec_.Invalidate();
  Explore(result.plan, &result);
  result.finished_ms = device_.clock().NowMs();
  return result;
}

void Explorer::Explore(const BudgetPlan& plan, RunResult* result) {
  for (const ComponentDecl& comp : manifest_.components) {
    ComponentRun run;
    run.component = comp.name;
    run.budget_seconds = plan.For(comp.name);
    run.start_ms = device_.clock().NowMs();
    if (run.budget_seconds <= 0) {
      run.skipped = true;
      run.end_ms = run.start_ms;
      if (result != nullptr) result->components.push_back(run);
      continue;
    }
    deadline_ms_ = run.start_ms + run.budget_seconds * 1000;
    try {
      switch (comp.kind) {
        case ComponentKind::kReceiver:
          SendBroadcasts(comp);
          break;
        case ComponentKind::kService: {
          rec_.SetEpisode(-1);
          rec_.Execute(Launch{
              BuildLaunchIntent(comp, manifest_.package_name, rng_)});
          ++run.passes;
          break;
        }
        case ComponentKind::kActivity:
          ExploreActivity(comp, run);
          break;
      }
    } catch (const Error& e) {
      if (!e.IsDeviceError()) throw;
      spdlog::warn("{}: {}", comp.name, e.what());
      run.error = e.what();
      stack_ = UiStack();
      rec_.Invalidate();
    }
    deadline_ms_ = std::numeric_limits<int64_t>::max();
    run.end_ms = device_.clock().NowMs();
    if (result != nullptr) result->components.push_back(run);
  }
  rec_.FinalCoverageSample();
}

void Explorer::SendBroadcasts(const ComponentDecl& comp) {
  static const BroadcastCatalog kEmpty;
  const BroadcastCatalog& catalog = catalog_ != nullptr ? *catalog_ : kEmpty;
  std::set<std::string> sent;
  for (const IntentFilter& filter : comp.intent_filters) {
    for (const std::string& action : filter.actions) {
      if (!sent.insert(action).second || OutOfTime()) continue;
      BroadcastLookup lookup = LookupBroadcastSpec(action, catalog);
      if (lookup.unknown_action) {
        spdlog::warn("{}: no catalog entry for {}", comp.name, action);
      }
      rec_.SetEpisode(-1);
      rec_.Execute(Broadcast{std::move(lookup.intent)});
    }
  }
}

void Explorer::ExploreActivity(const ComponentDecl& comp, ComponentRun& run) {
  while (!OutOfTime()) {
    const size_t known = rec_.graph().StateCount();
    rec_.SetEpisode(-1);
    const ActionOutcome launched = rec_.Execute(
        Launch{BuildLaunchIntent(comp, manifest_.package_name, rng_)});
    ++run.passes;
    if (!launched.executed) {
      spdlog::warn("{}: launch failed", comp.name);
      break;
    }
    const std::string entry_key = UiKey(rec_.Live());
    AnalyzeUi();
    if (visits_.Get(entry_key) > config_.tau) break;
    if (rec_.graph().StateCount() == known) break;
  }
}

void Explorer::AnalyzeUi() {
  if (OutOfTime()) return;
  const UiSnapshot snap = rec_.Live();
  const std::string key = UiKey(snap);
  const StateId id = StateSignature(snap);
  if (visits_.Get(key) > config_.tau) return;
  if (auto pushed = stack_.PushedId(key);
      pushed && !UiItemsChanged(*pushed, id)) {
    return;
  }
  if (!IsAut(snap) &&
      std::find(config_.non_ignore_components.begin(),
                config_.non_ignore_components.end(),
                snap.component) == config_.non_ignore_components.end()) {
    rec_.SetEpisode(-1);
    rec_.Execute(TapBack{});
    return;
  }
  const bool pushed_here = stack_.Push(key, id);
  if (!pushed_here && stack_.Top() != nullptr && *stack_.Top() == key &&
      !UiItemsChanged(*stack_.PushedId(key), id)) {
    return;
  }
  visits_.Increment(key);

  Frame f;
  f.key = key;
  f.expected = id;
  f.base_len = rec_.record().size();
  f.episode = next_episode_++;
  try {
    bool complete = false;
    if (config_.vlm_enabled && vlm_ != nullptr && HasTextEditor(snap)) {
      try {
        complete = PerformVisionActions(f, snap);
      } catch (const Error& e) {
        if (!e.IsVlmError()) throw;
        spdlog::warn("vision path failed on {}: {}", key, e.what());
      }
      if (!complete) ++vision_fallbacks_;
    }
    if (!complete) PerformNonVisionActions(f, snap);
    FinishScreen(f);
  } catch (...) {
    if (pushed_here) stack_.Pop();
    throw;
  }
  if (pushed_here) stack_.Pop();
}

bool Explorer::EnsureFrame(Frame& f) {
  if (f.abandoned) return false;
  if (rec_.LiveStateId() == f.expected) {
    f.base_len = rec_.record().size();
    return true;
  }
  const TransitionRecord saved = rec_.record();
  bool ok = false;
  if (saved.origin && f.base_len <= saved.size()) {
    rec_.SetEpisode(-1);
    if (f.base_len < saved.size() &&
        saved.steps[f.base_len].state.id == f.expected) {
      TransitionRecord prefix;
      prefix.origin = saved.origin;
      prefix.steps.assign(saved.steps.begin(),
                          saved.steps.begin() + f.base_len + 1);
      ok = Replay(prefix, rec_);
    } else if (rec_.Relaunch(*saved.origin)) {
      for (size_t i = 0; i < f.base_len; ++i) {
        rec_.Perform(saved.steps[i].action);
      }
      ok = rec_.LiveStateId() == f.expected;
    }
  }
  if (ok) {
    f.base_len = rec_.record().size();
    return true;
  }
  spdlog::debug("could not return to {} ({})", f.key, f.expected.ToString());
  ++replays_failed_;
  rec_.set_record(saved);
  f.abandoned = true;
  return false;
}

Explorer::StepStatus Explorer::Perform(Frame& f, Action action,
                                       const std::string* widget_key) {
  if (f.abandoned || OutOfTime()) return StepStatus::kStop;
  if (!EnsureFrame(f)) return StepStatus::kStop;
  if (widget_key != nullptr) {
    const std::optional<int> label = LabelOf(rec_.Live(), *widget_key);
    if (!label) return StepStatus::kSkipped;
    SetLabel(action, *label);
  }
  rec_.SetEpisode(f.episode);
  std::optional<Widget> target;
  if (auto label = ActionLabel(action)) {
    if (const Widget* w = ResolveLabel(rec_.Live(), *label)) target = *w;
  }
  ActionOutcome outcome = rec_.Execute(action);
  if (widget_key != nullptr) f.covered.insert(*widget_key);

  const Input* input = std::get_if<Input>(&action);
  if (input != nullptr && target) {
    try {
      if (!VerifyTextAccepted(*target, input->text)) {
        Input retry{input->label, RandomFallbackInput(InputKind::kNumeric, rng_)};
        const ActionOutcome second = rec_.Execute(retry);
        outcome.after = second.after;
        outcome.after_key = second.after_key;
        if (!VerifyTextAccepted(*target, retry.text)) {
          spdlog::debug("{} rejected both inputs", target->resource_id);
        }
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kWidgetVanished) throw;
    }
  }
  AfterAction(f, outcome);
  return StepStatus::kDone;
}

void Explorer::AfterAction(Frame& f, const ActionOutcome& /*outcome*/) {
  if (DetectProgressIndicator(rec_.Live())) {
    if (WaitForProgress() == ProgressResult::kTimedOut) return;
  }
  const StateId post = rec_.LiveStateId();
  if (post == f.expected) return;
  const std::string post_key = UiKey(rec_.Live());
  AnalyzeUi();
  // A same-screen change that survived the nested analysis becomes the new
  // baseline instead of being undone by a replay.
  if (post_key == f.key && rec_.LiveStateId() == post) f.expected = post;
}

bool Explorer::PerformVisionActions(Frame& f, const UiSnapshot& snap) {
  const UiSnapshot shot = rec_.LiveWithScreenshot();
  const LabeledScreenshot labeled = LabelWidgets(shot);
  const VlmResponse response =
      ParseResponse(vlm_->Send(BuildPrompt(labeled, shot.component)));
  for (const std::string& w : response.warnings) {
    spdlog::debug("VLM response: {}", w);
  }
  for (const Action& action : response.steps) {
    std::optional<std::string> key;
    if (auto label = ActionLabel(action)) {
      if (*label < 1 || static_cast<size_t>(*label) > labeled.label_map.size()) {
        spdlog::debug("VLM referenced unknown label {}", *label);
        continue;
      }
      key = WidgetKey(shot.widgets[labeled.label_map[*label - 1]]);
    }
    if (Perform(f, action, key ? &*key : nullptr) == StepStatus::kStop) {
      return false;
    }
  }
  for (int i : InteractiveIndices(snap)) {
    if (!f.covered.count(WidgetKey(snap.widgets[i]))) return false;
  }
  return true;
}

void Explorer::PerformNonVisionActions(Frame& f, const UiSnapshot& snap) {
  std::vector<const Widget*> editors;
  std::vector<const Widget*> scrollers;
  std::vector<Widget> tappables;
  for (int i : InteractiveIndices(snap)) {
    const Widget& w = snap.widgets[i];
    if (f.covered.count(WidgetKey(w))) continue;
    if (w.editable) {
      editors.push_back(&w);
      continue;
    }
    if (w.IsTappable() || w.long_clickable) tappables.push_back(w);
    if (w.scrollable) scrollers.push_back(&w);
  }
  const TapOrder order =
      OrderTapActions(tappables, RowEpsilon(snap.screen), rng_);

  VlmClient* llm = config_.vlm_enabled ? vlm_ : nullptr;
  for (const Widget* w : editors) {
    const std::string key = WidgetKey(*w);
    const std::string text =
        PredictTextInput(llm, WidgetAttributes(*w), rng_, snap.component);
    if (Perform(f, Input{0, text}, &key) == StepStatus::kStop) return;
  }
  auto tap_group = [&](auto pick) {
    for (size_t k = 0; k < order.order.size(); ++k) {
      if (!pick(k)) continue;
      const Widget& w = tappables[order.order[k]];
      const std::string key = WidgetKey(w);
      if (w.IsTappable() &&
          Perform(f, Tap{0}, &key) == StepStatus::kStop) {
        return false;
      }
      if (w.long_clickable &&
          Perform(f, LongPress{0}, &key) == StepStatus::kStop) {
        return false;
      }
    }
    return true;
  };
  auto in_group = [&](Sentiment s) {
    return [&order, s](size_t k) {
      return !order.same_row[k] && order.sentiment[k] == s;
    };
  };
  if (!tap_group(in_group(Sentiment::kNeutral))) return;
  for (const Widget* w : scrollers) {
    const std::string key = WidgetKey(*w);
    if (Perform(f, Scroll{Direction::kDown, 0}, &key) == StepStatus::kStop) {
      return;
    }
  }
  if (!tap_group(in_group(Sentiment::kPositive))) return;
  if (!tap_group(in_group(Sentiment::kNegative))) return;
  tap_group([&order](size_t k) { return static_cast<bool>(order.same_row[k]); });
}

void Explorer::FinishScreen(Frame& f) {
  if (Perform(f, TapMenu{}, nullptr) == StepStatus::kStop) return;
  if (app_switched_.insert(ComponentOfKey(f.key)).second &&
      Perform(f, AppSwitch{}, nullptr) == StepStatus::kStop) {
    return;
  }
  RotateAndRestoreScreen(f);
}

void Explorer::RotateAndRestoreScreen(Frame& f) {
  if (f.abandoned || OutOfTime() || !EnsureFrame(f)) return;
  rec_.SetEpisode(f.episode);
  const ActionOutcome turned = rec_.Execute(Rotate{Orientation::kLandscape});
  if (turned.changed()) AnalyzeUi();
  // The device goes back to portrait even when the deadline has passed.
  rec_.SetEpisode(f.episode);
  const ActionOutcome restored = rec_.Execute(Rotate{Orientation::kPortrait});
  if (!OutOfTime()) AfterAction(f, restored);
}

ProgressResult Explorer::WaitForProgress() {
  if (!DetectProgressIndicator(rec_.Live())) {
    return ProgressResult::kNotApplicable;
  }
  const StateId start = rec_.LiveStateId();
  Clock& clock = device_.clock();
  const int64_t t0 = clock.NowMs();
  ProgressResult result = ProgressResult::kTimedOut;
  while (clock.NowMs() - t0 < config_.progress_timeout_ms) {
    const int64_t left = config_.progress_timeout_ms - (clock.NowMs() - t0);
    rec_.Sleep(std::max<int64_t>(1, std::min(config_.idle_wait_ms, left)));
    if (rec_.LiveStateId() != start) {
      result = ProgressResult::kChanged;
      break;
    }
  }
  progress_waits_.push_back({t0, clock.NowMs(), result});
  return result;
}

bool Explorer::VerifyTextAccepted(const Widget& widget,
                                  const std::string& sent) {
  for (const Widget& w : rec_.Live().widgets) {
    if (w.resource_id == widget.resource_id && w.bounds == widget.bounds) {
      return w.text == sent;
    }
  }
  throw Error(ErrorCode::kWidgetVanished,
              "widget " + widget.resource_id + " " +
                  FormatBounds(widget.bounds) + " is gone");
}

}  // namespace vlmfuzz
