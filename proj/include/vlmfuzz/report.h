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


#ifndef VLMFUZZ_REPORT_H_
#define VLMFUZZ_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vlmfuzz/budget.h"
#include "vlmfuzz/device.h"
#include "vlmfuzz/explorer.h"
#include "vlmfuzz/recording_device.h"

namespace vlmfuzz {

struct CrashRecord {
  std::string exception_type;
  std::string message;
  std::string stack_top_frame;
  std::string component;
  int64_t first_seen_ms = 0;
  int64_t occurrence_count = 0;
  std::string dedup_key;  // "<type>@<frame>"
  // Triage hint: bug, security_mechanism or private_component.
  std::string category;

  bool operator==(const CrashRecord&) const = default;
};

std::string CrashCategory(const CrashEvent& event);

// Fatal events grouped by (type, top frame), in first-seen order.
std::vector<CrashRecord> DedupCrashes(const std::vector<CrashEvent>& events);

CoverageSample SampleCoverage(const ExplorationGraph& graph, int64_t now_ms,
                              int64_t components_launched);

struct ConfigEcho {
  std::string target;  // sim spec path or adb serial
  std::string mode;    // "sim" or "adb"
  int tau = 2;
  int64_t idle_wait_ms = 0;
  int64_t progress_timeout_ms = 0;
  int64_t total_budget_seconds = 0;
  uint64_t seed = 0;
  std::string vlm;  // "off", "live" or "mock:<path>"
  std::vector<std::string> non_ignore_components;

  bool operator==(const ConfigEcho&) const = default;
};

struct RunReport {
  ConfigEcho config;
  BudgetPlan budget;
  std::vector<ComplexityAssessment> assessments;
  std::vector<ComponentRun> components;
  std::vector<CoverageSample> coverage;
  std::vector<CrashRecord> crashes;
  int64_t states_discovered = 0;
  int64_t transitions_discovered = 0;
  int64_t events = 0;
  std::string graph_path;      // relative to the report directory
  std::string event_log_path;  // relative to the report directory

  bool operator==(const RunReport&) const = default;
};

std::string ReportToJson(const RunReport& report);
// Throws kReportError.
RunReport ReportFromJson(std::string_view json_text);

// Writes `<dir>/report.json` atomically.
void SaveReport(const RunReport& report, const std::filesystem::path& dir);
RunReport LoadReport(const std::filesystem::path& file);

// Write to a sibling temp file, then rename over `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_REPORT_H_
