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

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "test_util.h"
#include "vlmfuzz/catalog.h"
#include "vlmfuzz/error.h"
#include "vlmfuzz/explorer.h"

namespace vlmfuzz {
namespace {

using testing::Fixture;
using testing::QuickConfig;
using testing::SimRun;

bool AnyResultKeyContains(const std::vector<EventRecord>& events,
                          const std::string& needle) {
  return std::any_of(events.begin(), events.end(), [&](const EventRecord& e) {
    return e.result_key.find(needle) != std::string::npos;
  });
}

const Widget* FindById(const UiSnapshot& snap, const std::string& suffix) {
  for (const Widget& w : snap.widgets) {
    if (w.resource_id.ends_with(suffix)) return &w;
  }
  return nullptr;
}

void LaunchFirst(SimRun& run) {
  const Manifest& m = run.explorer->manifest();
  Rng rng(1);
  ASSERT_TRUE(run.explorer->recorder()
                  .Execute(Launch{BuildLaunchIntent(m.components.front(),
                                                    m.package_name, rng)})
                  .executed);
}

TEST(ExplorerConfigTest, Validate) {
  ExplorerConfig ok;
  EXPECT_NO_THROW(ok.Validate());
  auto bad = [](auto mutate) {
    ExplorerConfig c;
    mutate(c);
    try {
      c.Validate();
    } catch (const Error& e) {
      return e.code() == ErrorCode::kInvalidArgument;
    }
    return false;
  };
  EXPECT_TRUE(bad([](ExplorerConfig& c) { c.tau = 0; }));
  EXPECT_TRUE(bad([](ExplorerConfig& c) { c.idle_wait_ms = -1; }));
  EXPECT_TRUE(bad([](ExplorerConfig& c) { c.progress_timeout_ms = 100; }));
  EXPECT_TRUE(bad([](ExplorerConfig& c) { c.total_budget_seconds = 0; }));
}

// Default 1.5 s idle wait, so each part needs more than its share.
TEST(ExplorerTest, ComponentTimeTracksPlan) {
  ExplorerConfig config;
  config.total_budget_seconds = 90;
  SimRun run(Fixture("three_components_app.json"), config);
  const RunResult& r = run.Run();
  ASSERT_EQ(r.components.size(), 3u);
  for (const ComponentRun& c : r.components) {
    EXPECT_FALSE(c.skipped) << c.component;
    EXPECT_GE(c.passes, 1) << c.component;
    ASSERT_GT(c.budget_seconds, 0) << c.component;
    const double planned = static_cast<double>(c.budget_seconds) * 1000;
    const double spent = static_cast<double>(c.end_ms - c.start_ms);
    EXPECT_NEAR(spent, planned, planned * 0.1) << c.component;
  }
}

TEST(ExplorerTest, FailedComponentsNeverExplored) {
  SimRun run(Fixture("manifest_like_app.json"), QuickConfig(3));
  const RunResult& r = run.Run();
  int skipped = 0;
  for (const ComponentRun& c : r.components) {
    if (c.component.ends_with(".Boom") || c.component.ends_with(".Hidden")) {
      EXPECT_TRUE(c.skipped) << c.component;
      EXPECT_EQ(c.passes, 0);
      ++skipped;
    }
  }
  EXPECT_EQ(skipped, 2);
}

TEST(ExplorerTest, ExternalScreenGetsBack) {
  SimRun run(Fixture("external_dialog_app.json"), QuickConfig(5));
  run.Run();
  const auto& ev = run.events();
  bool backed = false;
  for (const EventRecord& e : ev) {
    if (e.action == "tap(BACK)" &&
        e.component.find("permissioncontroller") != std::string::npos) {
      backed = true;
    }
  }
  EXPECT_TRUE(backed);
  EXPECT_FALSE(AnyResultKeyContains(ev, "#viewfinder"));
}

TEST(ExplorerTest, NonIgnoredExternalScreenIsExplored) {
  ExplorerConfig config = QuickConfig(5);
  config.non_ignore_components = {
      "com.android.permissioncontroller.GrantPermissionsActivity"};
  SimRun run(Fixture("external_dialog_app.json"), config);
  run.Run();
  EXPECT_TRUE(AnyResultKeyContains(run.events(), "#viewfinder"));
}

TEST(ExplorerTest, StaticAppFinishesEarlyWithinTau) {
  for (int tau : {1, 2, 3}) {
    ExplorerConfig config = QuickConfig(11);
    config.tau = tau;
    SimRun run(Fixture("oracle_popups.json"), config);
    const RunResult& r = run.Run();
    EXPECT_LT(r.finished_ms - r.started_ms, config.total_budget_seconds * 1000)
        << tau;
    for (const auto& [key, n] : run.explorer->visits().counts()) {
      EXPECT_LE(n, tau + 1) << key << " tau=" << tau;
    }
  }
}

TEST(ExplorerTest, GrowingListTerminates) {
  SimRun run(Fixture("growing_app.json"), QuickConfig(2));
  const RunResult& r = run.Run();
  EXPECT_LT(r.finished_ms - r.started_ms, 600 * 1000);
  EXPECT_LE(run.explorer->visits().Get("com.example.feed.Feed#feed"), 3);
}

TEST(ExplorerTest, ReceiverGetsCatalogBroadcast) {
  const BroadcastCatalog catalog = LoadCatalog(DefaultCatalogPath());
  SimRun run(Fixture("timezone_app.json"), QuickConfig(4), "", &catalog);
  run.Run();
  int broadcasts = 0;
  for (const EventRecord& e : run.events()) {
    if (e.action.starts_with("broadcast(") &&
        e.action.find("TIMEZONE_CHANGED") != std::string::npos) {
      ++broadcasts;
    }
  }
  EXPECT_EQ(broadcasts, 1);
}

TEST(ExplorerTest, SameSeedSameEvents) {
  auto lines = [](uint64_t seed) {
    SimRun run(Fixture("oracle_toggles.json"), QuickConfig(seed));
    run.Run();
    std::vector<std::string> out;
    for (const EventRecord& e : run.events()) {
      out.push_back(std::to_string(e.mono_ms) + " " + e.action + " " +
                    e.result.ToString());
    }
    return out;
  };
  const auto a = lines(99);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, lines(99));
}

TEST(ExplorerTest, RotationRevealIsExplored) {
  SimRun run(Fixture("oracle_scroll.json"), QuickConfig(8));
  run.Run();
  EXPECT_TRUE(AnyResultKeyContains(run.events(), "#wide"));
}

TEST(ExplorerTest, VerifyTextAccepted) {
  SimRun run(Fixture("numeric_app.json"), QuickConfig(1));
  LaunchFirst(run);
  auto& rec = run.explorer->recorder();
  const Widget* field = FindById(rec.Live(), "quantity");
  ASSERT_NE(field, nullptr);
  const Widget w = *field;
  rec.Execute(Input{1, "abc"});
  EXPECT_FALSE(run.explorer->VerifyTextAccepted(w, "abc"));
  rec.Execute(Input{1, "12"});
  EXPECT_TRUE(run.explorer->VerifyTextAccepted(w, "12"));

  Widget gone = w;
  gone.bounds.y1 += 1;
  try {
    run.explorer->VerifyTextAccepted(gone, "12");
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWidgetVanished);
  }
}

TEST(ExplorerTest, RejectedInputFallsBackToNumber) {
  SimRun run(Fixture("numeric_app.json"), QuickConfig(6),
             "numeric_vlm.json");
  run.Run();
  EXPECT_GE(run.explorer->vision_fallbacks(), 1);
  bool numeric_retry = false;
  for (size_t i = 1; i < run.events().size(); ++i) {
    if (run.events()[i - 1].action == "input(1, \"abc\")" &&
        run.events()[i].action.starts_with("input(1, \"") &&
        std::isdigit(static_cast<unsigned char>(run.events()[i].action[10]))) {
      numeric_retry = true;
    }
  }
  EXPECT_TRUE(numeric_retry);
}

TEST(ExplorerTest, WaitForProgressChanges) {
  SimRun run(Fixture("loading_app.json"), QuickConfig(1));
  LaunchFirst(run);
  EXPECT_EQ(run.explorer->WaitForProgress(), ProgressResult::kNotApplicable);
  run.explorer->recorder().Execute(Tap{1});
  EXPECT_EQ(run.explorer->WaitForProgress(), ProgressResult::kChanged);
  ASSERT_EQ(run.explorer->progress_waits().size(), 1u);
  const ProgressWait& w = run.explorer->progress_waits()[0];
  EXPECT_GE(w.end_ms - w.start_ms, 9000);
  EXPECT_LE(w.end_ms - w.start_ms, 10500);
  EXPECT_EQ(UiKey(run.explorer->recorder().Live()),
            "com.example.books.Library#book_list");
}

TEST(ExplorerTest, WaitForProgressTimesOut) {
  ExplorerConfig config = QuickConfig(1);
  config.progress_timeout_ms = 5000;
  SimRun run(Fixture("loading_forever_app.json"), config);
  LaunchFirst(run);
  run.explorer->recorder().Execute(Tap{1});
  EXPECT_EQ(run.explorer->WaitForProgress(), ProgressResult::kTimedOut);
  const ProgressWait& w = run.explorer->progress_waits().back();
  EXPECT_EQ(w.end_ms - w.start_ms, 5000);
}

TEST(ExplorerTest, ProgressResultNames) {
  EXPECT_EQ(ProgressResultName(ProgressResult::kChanged), "changed");
  EXPECT_EQ(ProgressResultName(ProgressResult::kTimedOut), "timed_out");
}

}  // namespace
}  // namespace vlmfuzz
