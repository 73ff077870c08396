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


// One line per acceptance criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "oracle/bfs_oracle.h"
#include "test_util.h"
#include "vlmfuzz/action.h"
#include "vlmfuzz/budget.h"
#include "vlmfuzz/catalog.h"
#include "vlmfuzz/cli.h"
#include "vlmfuzz/error.h"
#include "vlmfuzz/heuristics.h"
#include "vlmfuzz/report.h"
#include "vlmfuzz/rng.h"
#include "vlmfuzz/vlm.h"

namespace vlmfuzz::testing {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict Fail(std::string why) { return {false, std::move(why)}; }

double WallSeconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Forwards to a SimDevice and remembers what each editor showed after input.
class InputSpy : public DeviceAdapter {
 public:
  explicit InputSpy(SimAppSpec spec) : sim_(std::move(spec)) {}

  bool Launch(const Intent& i) override { return sim_.Launch(i); }
  void Broadcast(const Intent& i) override { sim_.Broadcast(i); }
  void Tap(int x, int y) override { sim_.Tap(x, y); }
  void LongPress(int x, int y) override { sim_.LongPress(x, y); }
  void Swipe(int a, int b, int c, int d, int ms) override {
    sim_.Swipe(a, b, c, d, ms);
  }
  void InputText(const Widget& target, const std::string& text) override {
    sim_.InputText(target, text);
    const UiSnapshot snap = CaptureSnapshot(sim_, false);
    for (const Widget& w : snap.widgets) {
      if (w.resource_id == target.resource_id && w.bounds == target.bounds) {
        shown.push_back(w.text);
      }
    }
  }
  void PressBack() override { sim_.PressBack(); }
  void PressEnter() override { sim_.PressEnter(); }
  void PressMenu() override { sim_.PressMenu(); }
  void PressHome() override { sim_.PressHome(); }
  void ResumeApp() override { sim_.ResumeApp(); }
  void SetOrientation(Orientation o) override { sim_.SetOrientation(o); }
  std::string DumpHierarchy() override { return sim_.DumpHierarchy(); }
  std::string Screenshot() override { return sim_.Screenshot(); }
  std::string CurrentComponent() override { return sim_.CurrentComponent(); }
  std::vector<CrashEvent> DrainCrashEvents() override {
    return sim_.DrainCrashEvents();
  }
  Rect ScreenRect() override { return sim_.ScreenRect(); }
  Clock& clock() override { return sim_.clock(); }

  std::vector<std::string> shown;

 private:
  SimDevice sim_;
};

// 1
Verdict OracleEquivalence() {
  const char* apps[] = {"oracle_linear.json", "oracle_popups.json",
                        "oracle_toggles.json", "oracle_scroll.json",
                        "oracle_two_components.json"};
  std::ostringstream detail;
  for (const char* name : apps) {
    const SimAppSpec spec = Fixture(name);
    size_t screens = 0;
    for (const SimComponent& c : spec.components) {
      screens += c.screens.size();
      for (const SimScreen& s : c.screens) {
        if (s.widgets.size() > 20) return Fail(std::string(name) + " too big");
      }
    }
    if (screens > 8) return Fail(std::string(name) + " has too many screens");

    std::set<StateId> found;
    std::set<StateId> expected;
    const double secs = WallSeconds([&] {
      expected = ReachableStates(spec).states;
      SimRun run(spec, QuickConfig(11, 3600));
      run.Run();
      found = run.explorer->recorder().graph().StateIds();
    });
    if (found != expected) {
      return Fail(std::string(name) + ": explorer " +
                  std::to_string(found.size()) + " states, oracle " +
                  std::to_string(expected.size()));
    }
    if (secs >= 10.0) return Fail(std::string(name) + " took " + Fmt("%.1fs", secs));
    detail << name << "=" << found.size() << " ";
  }
  return {true, detail.str()};
}

// 2
Verdict TauBound() {
  const SimAppSpec spec = Fixture("growing_app.json");
  ExplorerConfig cfg = QuickConfig(3, 3600);
  cfg.tau = 2;
  int visits = 0;
  const double secs = WallSeconds([&] {
    SimRun run(spec, cfg);
    run.Run();
    visits = run.explorer->visits().Get("com.example.feed.Feed#feed");
  });
  if (visits > cfg.tau + 1) {
    return Fail("analyzer ran " + std::to_string(visits) + " times");
  }
  if (secs >= 5.0) return Fail("took " + Fmt("%.2fs", secs));
  return {true, "analyzer runs " + std::to_string(visits) + ", " +
                    Fmt("%.3fs", secs)};
}

// 3
std::string ReplayFidelityRun(uint64_t seed, std::vector<EventRecord>* out) {
  SimRun run(Fixture("series_app.json"), QuickConfig(seed),
             "series_vlm.json");
  run.Run();
  const auto& ev = run.events();
  *out = ev;
  size_t disrupt = ev.size();
  for (size_t i = 0; i < ev.size(); ++i) {
    if (ev[i].action == "tap(7)") {
      disrupt = i;
      break;
    }
  }
  if (disrupt == ev.size()) return "no tap(7)";
  const StateId pre = ev[disrupt].before;
  if (ev[disrupt].result == pre) return "tap(7) did not change the UI";
  size_t relaunch = ev.size();
  for (size_t i = disrupt + 1; i < ev.size(); ++i) {
    if (ev[i].action.starts_with("launch(")) {
      relaunch = i;
      break;
    }
  }
  if (relaunch == ev.size()) return "no relaunch after tap(7)";
  size_t restored = ev.size();
  for (size_t i = relaunch; i < ev.size(); ++i) {
    if (ev[i].result == pre) {
      restored = i;
      break;
    }
  }
  if (restored == ev.size()) return "pre-tap state never restored";
  for (size_t i = restored + 1; i < ev.size(); ++i) {
    if (ev[i].before != pre) continue;
    if (ev[i].action == "tap(8)" && ev[i].target_text == "Cancel") return "";
  }
  return "Cancel never tapped from the restored state";
}

Verdict ReplayFidelity() {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<EventRecord> a, b;
    const std::string why = ReplayFidelityRun(seed, &a);
    if (!why.empty()) return Fail("seed " + std::to_string(seed) + ": " + why);
    ReplayFidelityRun(seed, &b);
    if (a.size() != b.size()) return Fail("seed " + std::to_string(seed) + " not deterministic");
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i].action != b[i].action || a[i].result != b[i].result ||
          a[i].mono_ms != b[i].mono_ms) {
        return Fail("seed " + std::to_string(seed) + " diverged at event " +
                    std::to_string(i));
      }
    }
  }
  return {true, "20/20 seeds"};
}

// 4
Verdict VlmProtocol() {
  struct Case {
    std::string raw;
    std::vector<Action> want;
  };
  const std::vector<Case> cases = {
      {"Process: Fill the search form.\n"
       "Steps: [tap(2); input(2, \"J.K. Rowling\"); tap(3); input(3, \"Harry "
       "Potter\"); tap(4);]\nSummary: Searched.",
       {Tap{2}, Input{2, "J.K. Rowling"}, Tap{3}, Input{3, "Harry Potter"},
        Tap{4}}},
      {"Steps: [tap(3); input(3, \"Java Series\"); tap(4); input(4, \"1\"); "
       "tap(5); tap(7);]",
       {Tap{3}, Input{3, "Java Series"}, Tap{4}, Input{4, "1"}, Tap{5},
        Tap{7}}},
      {"Steps: [tap(3); input(3, \"Series 1\"); tap(4); input(4, \"1\"); "
       "tap(5); tap(7);]",
       {Tap{3}, Input{3, "Series 1"}, Tap{4}, Input{4, "1"}, Tap{5}, Tap{7}}},
  };
  for (const Case& c : cases) {
    const VlmResponse r = ParseResponse(c.raw);
    if (r.steps != c.want) return Fail("mismatch on: " + c.raw);
  }
  Rng rng(20260);
  const std::string alphabet =
      "tapinputswipe();[]\"\\,0123456789 UPDOWNBACKENTERStepsProcess:\n";
  int no_steps = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    const size_t len = rng.Below(200);
    const bool printable = i % 2 == 0;
    if (i % 3 == 0) s = "Steps: [";
    for (size_t k = 0; k < len; ++k) {
      s.push_back(printable ? alphabet[rng.Below(alphabet.size())]
                            : static_cast<char>(rng.Below(256)));
    }
    try {
      ParseResponse(s);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoStepsLine) {
        return Fail("unexpected error " + std::string(e.what()));
      }
      ++no_steps;
    } catch (const std::exception& e) {
      return Fail(std::string("escaped exception: ") + e.what());
    }
  }
  return {true, "3 sequences exact, 10000 fuzz inputs (" +
                    std::to_string(no_steps) + " without Steps)"};
}

// 5
Verdict NumericFallback() {
  const SimAppSpec spec = Fixture("numeric_app.json");
  InputSpy spy(spec);
  MockVlmClient vlm =
      MockVlmClient::FromFile(TestData("numeric_vlm.json").string());
  ExplorerConfig cfg = QuickConfig(5);
  cfg.vlm_enabled = true;
  Explorer ex(spy, ManifestFromSimSpec(spec), cfg, &vlm);
  ex.Run();
  const auto& ev = ex.recorder().events();
  for (size_t i = 0; i + 1 < ev.size(); ++i) {
    if (ev[i].action != "input(1, \"abc\")") continue;
    const EventRecord& next = ev[i + 1];
    static const std::regex kNumericInput(R"(input\(1, "[0-9]+"\))");
    if (!std::regex_match(next.action, kNumericInput)) {
      return Fail("after rejection came " + next.action);
    }
    if (next.episode != ev[i].episode) return Fail("fallback in another episode");
    if (spy.shown.size() < 2) return Fail("editor never observed");
    // The first observation is the rejected text, the second the fallback.
    if (!spy.shown[0].empty()) return Fail("abc was accepted: " + spy.shown[0]);
    if (!std::regex_match(spy.shown[1], std::regex("[0-9]+"))) {
      return Fail("editor shows '" + spy.shown[1] + "'");
    }
    return {true, "fallback " + next.action + " accepted"};
  }
  return Fail("mock input never sent");
}

// 6
int Rank(const EventRecord& e, const std::set<std::string>& row) {
  if (row.count(e.target_text)) return 3;
  switch (SentimentLexicon::Default().Classify(e.target_text)) {
    case Sentiment::kNeutral: return 0;
    case Sentiment::kPositive: return 1;
    case Sentiment::kNegative: return 2;
  }
  return 0;
}

Verdict SentimentOrdering() {
  const std::set<std::string> row = {"Yes", "No", "Cancel"};
  int episodes = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    SimRun run(Fixture("mixed_app.json"), QuickConfig(seed));
    run.Run();
    std::map<int, std::vector<const EventRecord*>> taps;
    for (const EventRecord& e : run.events()) {
      if (e.episode < 0 || !e.action.starts_with("tap(") ||
          e.action.starts_with("tap(MENU") || e.target_text.empty()) {
        continue;
      }
      taps[e.episode].push_back(&e);
    }
    for (const auto& [ep, list] : taps) {
      ++episodes;
      for (size_t i = 1; i < list.size(); ++i) {
        const int a = Rank(*list[i - 1], row);
        const int b = Rank(*list[i], row);
        const bool ok = a < b || (a == b && (a != 3 || list[i - 1]->target_bounds.x1 <
                                                           list[i]->target_bounds.x1));
        if (!ok) {
          return Fail("seed " + std::to_string(seed) + " episode " +
                      std::to_string(ep) + ": " + list[i - 1]->target_text +
                      " before " + list[i]->target_text);
        }
      }
    }
  }
  if (episodes == 0) return Fail("no episodes");
  return {true, std::to_string(episodes) + " episodes over 100 seeds"};
}

// 7
Verdict ProgressHandling() {
  {
    SimRun run(Fixture("loading_app.json"), QuickConfig(7));
    run.Run();
    const auto& waits = run.explorer->progress_waits();
    if (std::none_of(waits.begin(), waits.end(), [](const ProgressWait& w) {
          return w.result == ProgressResult::kChanged;
        })) {
      return Fail("loading never observed to finish");
    }
    bool explored = false;
    for (const EventRecord& e : run.events()) {
      if (e.before_key == "com.example.books.Library#book_list" &&
          e.action.starts_with("tap(")) {
        explored = true;
      }
    }
    if (!explored) return Fail("post-loading screen not explored");
  }
  SimRun run(Fixture("loading_forever_app.json"), QuickConfig(7));
  run.Run();
  const auto& waits = run.explorer->progress_waits();
  auto it = std::find_if(waits.begin(), waits.end(), [](const ProgressWait& w) {
    return w.result == ProgressResult::kTimedOut;
  });
  if (it == waits.end()) return Fail("no timed-out wait");
  if (it->end_ms - it->start_ms != 60000) {
    return Fail("waited " + std::to_string(it->end_ms - it->start_ms) + " ms");
  }
  for (const EventRecord& e : run.events()) {
    if (e.mono_ms < it->end_ms) continue;
    if (e.mono_ms != it->end_ms) {
      return Fail("resumed at +" + std::to_string(e.mono_ms - it->end_ms) + " ms");
    }
    return {true, "changed on clearing variant; resumed after 60000 ms"};
  }
  return Fail("nothing happened after the timeout");
}

// 8
Verdict Budget() {
  auto make = [](const std::vector<int>& weights) {
    std::vector<ComplexityAssessment> out;
    for (size_t i = 0; i < weights.size(); ++i) {
      out.push_back({"c" + std::to_string(i), weights[i], 0, false});
    }
    return out;
  };
  const BudgetPlan p1 = AllocateBudget(make({5, 10, 15}), 3600);
  if (p1.For("c0") != 600 || p1.For("c1") != 1200 || p1.For("c2") != 1800) {
    return Fail("5/10/15 example");
  }
  const BudgetPlan p2 = AllocateBudget(make({0, 100}), 3600);
  if (p2.For("c0") != 180 || p2.For("c1") != 3420) return Fail("0/100 example");
  const BudgetPlan p3 = AllocateBudget(make({7}), 3600);
  if (p3.For("c0") != 3600) return Fail("single component example");

  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + rng.Below(12);
    std::vector<int> w(n);
    for (int& x : w) x = static_cast<int>(rng.Below(4) == 0 ? 0 : rng.Below(200));
    const int64_t total = 1 + static_cast<int64_t>(rng.Below(20000));
    const BudgetPlan p = AllocateBudget(make(w), total);
    if (p.Sum() > total) return Fail("sum exceeds total");
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        if (w[i] >= w[j] && p.per_component[i].second < p.per_component[j].second) {
          return Fail("monotonicity broken in trial " + std::to_string(trial));
        }
      }
    }
  }
  return {true, "3 examples exact, 1000 random vectors"};
}

// 9
Verdict BroadcastCatalogCheck() {
  const BroadcastCatalog cat = LoadCatalog(DefaultCatalogPath());
  std::set<std::string> actions;
  for (const auto& e : cat.entries) {
    if (!actions.insert(e.action).second) return Fail("duplicate " + e.action);
  }
  const BroadcastLookup l =
      LookupBroadcastSpec("android.intent.action.TIMEZONE_CHANGED", cat);
  if (l.unknown_action || !l.intent.extras.count("TIMEZONE") ||
      !l.intent.extras.count("TIME_PREF")) {
    return Fail("TIMEZONE_CHANGED lookup lacks extras");
  }
  SimRun run(Fixture("timezone_app.json"), QuickConfig(9), "", &cat);
  run.Run();
  for (const Intent& i : run.device->app().received_broadcasts()) {
    if (i.action == "android.intent.action.TIMEZONE_CHANGED" &&
        i.extras.count("TIMEZONE") && i.extras.count("TIME_PREF")) {
      return {true, std::to_string(cat.entries.size()) +
                        " catalog entries; receiver got both extras"};
    }
  }
  return Fail("receiver never got the extras");
}

// 10
Verdict CrashDedup() {
  const BroadcastCatalog cat = LoadCatalog(DefaultCatalogPath());
  SimRun run(Fixture("crash_app.json"), QuickConfig(10), "", &cat);
  run.Run();
  const auto& crashes = run.explorer->recorder().crashes();
  const auto records = DedupCrashes(crashes);
  int64_t total = 0;
  for (const auto& r : records) total += r.occurrence_count;
  std::map<std::string, int64_t> raw;
  for (const auto& c : crashes) ++raw[c.exception_type + "@" + c.stack_top_frame];
  if (crashes.size() != 5) {
    return Fail("run emitted " + std::to_string(crashes.size()) + " crashes");
  }
  if (records.size() != 2) {
    return Fail(std::to_string(records.size()) + " unique records");
  }
  for (const auto& r : records) {
    if (raw[r.dedup_key] != r.occurrence_count) return Fail("bad count for " + r.dedup_key);
  }
  return {true, "5 crashes -> " + records[0].dedup_key + " x" +
                    std::to_string(records[0].occurrence_count) + ", " +
                    records[1].dedup_key + " x" +
                    std::to_string(records[1].occurrence_count)};
}

// 11
Verdict Determinism() {
  const auto base = std::filesystem::temp_directory_path() /
                    ("vlmfuzz_accept_" + std::to_string(::getpid()));
  std::string logs[2];
  for (int i = 0; i < 2; ++i) {
    const auto dir = base / std::to_string(i);
    const std::string sim = TestData("series_app.json").string();
    const std::string vlm = "mock:" + TestData("series_vlm.json").string();
    const std::string out = dir.string();
    const char* argv[] = {"vlmfuzz", "fuzz",   "--sim",    sim.c_str(),
                          "--seed",  "7",      "--vlm",    vlm.c_str(),
                          "--budget", "10m",   "--out",    out.c_str()};
    std::ostringstream o, e;
    const int rc = CliMain(static_cast<int>(std::size(argv)), argv, o, e);
    if (rc != kExitOk) return Fail("fuzz exited " + std::to_string(rc) + ": " + e.str());
    logs[i] = ReadFile(dir / "events.tsv");
  }
  std::filesystem::remove_all(base);
  if (logs[0].empty()) return Fail("empty event log");
  if (logs[0] != logs[1]) return Fail("event logs differ");
  return {true, std::to_string(std::count(logs[0].begin(), logs[0].end(), '\n')) +
                    " identical lines"};
}

}  // namespace
}  // namespace vlmfuzz::testing

int main() {
  using namespace vlmfuzz::testing;
  // Mock scripts run dry on purpose; their warnings would bury the verdicts.
  spdlog::set_level(spdlog::level::err);
  struct Criterion {
    const char* name;
    Verdict (*fn)();
  };
  const Criterion criteria[] = {
      {"oracle equivalence", OracleEquivalence},
      {"termination and tau bound", TauBound},
      {"replay fidelity", ReplayFidelity},
      {"vlm protocol", VlmProtocol},
      {"rejection fallback", NumericFallback},
      {"ordering heuristic", SentimentOrdering},
      {"progress handling", ProgressHandling},
      {"budget", Budget},
      {"broadcast catalog", BroadcastCatalogCheck},
      {"crash dedup", CrashDedup},
      {"determinism", Determinism},
  };
  int failures = 0;
  int n = 0;
  for (const Criterion& c : criteria) {
    ++n;
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << n << "] " << c.name
              << ": " << v.detail << std::endl;
  }
  return failures;
}
