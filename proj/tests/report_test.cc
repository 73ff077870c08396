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

#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "vlmfuzz/error.h"
#include "vlmfuzz/report.h"

namespace vlmfuzz {
namespace {

namespace fs = std::filesystem;

CrashEvent Ev(std::string type, std::string frame, int64_t ms,
              bool fatal = true, std::string msg = "") {
  CrashEvent e;
  e.exception_type = std::move(type);
  e.stack_top_frame = std::move(frame);
  e.mono_ms = ms;
  e.fatal = fatal;
  e.message = std::move(msg);
  e.component = "com.example.A";
  return e;
}

fs::path ScratchDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() /
               ("vlmfuzz_report_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(DedupCrashesTest, GroupsByTypeAndFrame) {
  const std::vector<CrashEvent> events = {
      Ev("java.lang.NullPointerException", "a.B.c", 50),
      Ev("java.lang.RuntimeException", "a.B.d", 60),
      Ev("java.lang.NullPointerException", "a.B.c", 40),
      Ev("java.lang.NullPointerException", "a.B.c", 70),
  };
  const auto recs = DedupCrashes(events);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].dedup_key, "java.lang.NullPointerException@a.B.c");
  EXPECT_EQ(recs[0].occurrence_count, 3);
  EXPECT_EQ(recs[0].first_seen_ms, 40);
  EXPECT_EQ(recs[1].occurrence_count, 1);
  EXPECT_EQ(recs[1].category, "bug");
}

TEST(DedupCrashesTest, SameTypeDifferentFrameIsDistinct) {
  const auto recs = DedupCrashes({Ev("X", "f1", 1), Ev("X", "f2", 2)});
  EXPECT_EQ(recs.size(), 2u);
}

TEST(DedupCrashesTest, NonFatalAndEmpty) {
  EXPECT_TRUE(DedupCrashes({}).empty());
  EXPECT_TRUE(DedupCrashes({Ev("W", "f", 1, false)}).empty());
}

TEST(DedupCrashesTest, CountsSumToFatalEvents) {
  std::vector<CrashEvent> events;
  for (int i = 0; i < 50; ++i) {
    events.push_back(Ev("T" + std::to_string(i % 4), "f" + std::to_string(i % 3),
                        i, i % 5 != 0));
  }
  int64_t total = 0;
  for (const auto& r : DedupCrashes(events)) total += r.occurrence_count;
  EXPECT_EQ(total, 40);
}

TEST(CrashCategoryTest, Kinds) {
  EXPECT_EQ(CrashCategory(Ev("java.lang.NullPointerException", "f", 0)), "bug");
  EXPECT_EQ(CrashCategory(Ev("java.lang.SecurityException", "f", 0, true,
                             "Permission Denial: starting Intent")),
            "private_component");
  EXPECT_EQ(CrashCategory(Ev("java.lang.SecurityException", "f", 0, true,
                             "uid 10001 cannot read contacts")),
            "security_mechanism");
}

RunReport Sample() {
  RunReport r;
  r.config.target = "tests/testdata/crash_app.json";
  r.config.mode = "sim";
  r.config.seed = 42;
  r.config.vlm = "off";
  r.config.total_budget_seconds = 600;
  r.config.non_ignore_components = {"com.example.A"};
  r.budget.total = 600;
  r.budget.per_component = {{"com.example.A", 400}, {"com.example.B", 140}};
  r.assessments = {{"com.example.A", 5, 2, false}, {"com.example.B", 1, 0, true}};
  ComponentRun run;
  run.component = "com.example.A";
  run.budget_seconds = 400;
  run.end_ms = 400000;
  run.passes = 3;
  r.components.push_back(run);
  r.coverage = {{1000, 2, 1, 1}, {2000, 4, 5, 1}};
  r.crashes = DedupCrashes({Ev("java.lang.IllegalStateException", "S.w", 9)});
  r.states_discovered = 4;
  r.transitions_discovered = 5;
  r.events = 77;
  r.graph_path = "graph.tsv";
  r.event_log_path = "events.tsv";
  return r;
}

TEST(ReportJsonTest, RoundTrip) {
  const RunReport r = Sample();
  EXPECT_EQ(ReportFromJson(ReportToJson(r)), r);
  EXPECT_EQ(ReportFromJson(ReportToJson(RunReport{})), RunReport{});
}

TEST(ReportJsonTest, Errors) {
  for (const char* bad : {"", "{", "[]", "{\"config\":{}}"}) {
    try {
      ReportFromJson(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kReportError) << bad;
    }
  }
}

TEST(ReportFileTest, SaveAndLoad) {
  const fs::path dir = ScratchDir("save") / "nested";
  SaveReport(Sample(), dir);
  ASSERT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_FALSE(fs::exists(dir / "report.json.tmp"));
  EXPECT_EQ(LoadReport(dir / "report.json"), Sample());
  fs::remove_all(dir.parent_path());
}

TEST(ReportFileTest, WriteFileAtomicReplaces) {
  const fs::path dir = ScratchDir("atomic");
  WriteFileAtomic(dir / "f.txt", "one");
  WriteFileAtomic(dir / "f.txt", "two\n");
  EXPECT_EQ(ReadFile(dir / "f.txt"), "two\n");
  size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
  EXPECT_EQ(n, 1u);
  fs::remove_all(dir);
}

TEST(ReportFileTest, IoErrors) {
  try {
    ReadFile("/nonexistent/dir/x.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
  EXPECT_THROW(WriteFileAtomic("/nonexistent/dir/x.json", "x"), Error);
}

}  // namespace
}  // namespace vlmfuzz
