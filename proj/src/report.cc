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


#include "vlmfuzz/report.h"

#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "vlmfuzz/error.h"

namespace vlmfuzz {

using nlohmann::json;

// nlohmann converters, found by ADL.
void to_json(json& j, const CrashRecord& c) {
  j = {{"exception_type", c.exception_type},
       {"message", c.message},
       {"stack_top_frame", c.stack_top_frame},
       {"component", c.component},
       {"first_seen_ms", c.first_seen_ms},
       {"occurrence_count", c.occurrence_count},
       {"dedup_key", c.dedup_key},
       {"category", c.category}};
}

void from_json(const json& j, CrashRecord& c) {
  j.at("exception_type").get_to(c.exception_type);
  j.at("message").get_to(c.message);
  j.at("stack_top_frame").get_to(c.stack_top_frame);
  j.at("component").get_to(c.component);
  j.at("first_seen_ms").get_to(c.first_seen_ms);
  j.at("occurrence_count").get_to(c.occurrence_count);
  j.at("dedup_key").get_to(c.dedup_key);
  j.at("category").get_to(c.category);
}

void to_json(json& j, const CoverageSample& s) {
  j = {{"mono_ms", s.mono_ms},
       {"states", s.states_discovered},
       {"transitions", s.transitions_discovered},
       {"components_launched", s.components_launched}};
}

void from_json(const json& j, CoverageSample& s) {
  j.at("mono_ms").get_to(s.mono_ms);
  j.at("states").get_to(s.states_discovered);
  j.at("transitions").get_to(s.transitions_discovered);
  j.at("components_launched").get_to(s.components_launched);
}

void to_json(json& j, const ComplexityAssessment& a) {
  j = {{"component", a.component},
       {"interactive_count", a.interactive_count},
       {"menu_item_count", a.menu_item_count},
       {"launch_failed", a.launch_failed}};
}

void from_json(const json& j, ComplexityAssessment& a) {
  j.at("component").get_to(a.component);
  j.at("interactive_count").get_to(a.interactive_count);
  j.at("menu_item_count").get_to(a.menu_item_count);
  j.at("launch_failed").get_to(a.launch_failed);
}

void to_json(json& j, const ComponentRun& r) {
  j = {{"component", r.component}, {"budget_seconds", r.budget_seconds},
       {"start_ms", r.start_ms},   {"end_ms", r.end_ms},
       {"passes", r.passes},       {"skipped", r.skipped},
       {"error", r.error}};
}

void from_json(const json& j, ComponentRun& r) {
  j.at("component").get_to(r.component);
  j.at("budget_seconds").get_to(r.budget_seconds);
  j.at("start_ms").get_to(r.start_ms);
  j.at("end_ms").get_to(r.end_ms);
  j.at("passes").get_to(r.passes);
  j.at("skipped").get_to(r.skipped);
  j.at("error").get_to(r.error);
}

void to_json(json& j, const ConfigEcho& c) {
  j = {{"target", c.target},
       {"mode", c.mode},
       {"tau", c.tau},
       {"idle_wait_ms", c.idle_wait_ms},
       {"progress_timeout_ms", c.progress_timeout_ms},
       {"total_budget_seconds", c.total_budget_seconds},
       {"seed", c.seed},
       {"vlm", c.vlm},
       {"non_ignore_components", c.non_ignore_components}};
}

void from_json(const json& j, ConfigEcho& c) {
  j.at("target").get_to(c.target);
  j.at("mode").get_to(c.mode);
  j.at("tau").get_to(c.tau);
  j.at("idle_wait_ms").get_to(c.idle_wait_ms);
  j.at("progress_timeout_ms").get_to(c.progress_timeout_ms);
  j.at("total_budget_seconds").get_to(c.total_budget_seconds);
  j.at("seed").get_to(c.seed);
  j.at("vlm").get_to(c.vlm);
  j.at("non_ignore_components").get_to(c.non_ignore_components);
}

std::string CrashCategory(const CrashEvent& event) {
  if (event.exception_type.find("SecurityException") != std::string::npos) {
    if (event.message.find("not exported") != std::string::npos ||
        event.message.find("Permission Denial") != std::string::npos) {
      return "private_component";
    }
    return "security_mechanism";
  }
  return "bug";
}

std::vector<CrashRecord> DedupCrashes(const std::vector<CrashEvent>& events) {
  std::vector<CrashRecord> out;
  std::map<std::string, size_t> index;
  for (const CrashEvent& e : events) {
    if (!e.fatal) continue;
    const std::string key = e.exception_type + "@" + e.stack_top_frame;
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      CrashRecord r;
      r.exception_type = e.exception_type;
      r.message = e.message;
      r.stack_top_frame = e.stack_top_frame;
      r.component = e.component;
      r.first_seen_ms = e.mono_ms;
      r.dedup_key = key;
      r.category = CrashCategory(e);
      out.push_back(std::move(r));
    }
    CrashRecord& r = out[it->second];
    ++r.occurrence_count;
    if (e.mono_ms < r.first_seen_ms) r.first_seen_ms = e.mono_ms;
  }
  return out;
}

CoverageSample SampleCoverage(const ExplorationGraph& graph, int64_t now_ms,
                              int64_t components_launched) {
  return {now_ms, static_cast<int64_t>(graph.StateCount()),
          static_cast<int64_t>(graph.TransitionCount()), components_launched};
}

std::string ReportToJson(const RunReport& r) {
  json budget = json::array();
  for (const auto& [name, seconds] : r.budget.per_component) {
    budget.push_back({{"component", name}, {"seconds", seconds}});
  }
  json j = {
      {"config", r.config},
      {"budget", {{"total_seconds", r.budget.total}, {"components", budget}}},
      {"assessments", r.assessments},
      {"components", r.components},
      {"coverage", r.coverage},
      {"crashes", r.crashes},
      {"states_discovered", r.states_discovered},
      {"transitions_discovered", r.transitions_discovered},
      {"events", r.events},
      {"graph_path", r.graph_path},
      {"event_log_path", r.event_log_path},
  };
  return j.dump(2) + "\n";
}

RunReport ReportFromJson(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    RunReport r;
    j.at("config").get_to(r.config);
    r.budget.total = j.at("budget").at("total_seconds").get<int64_t>();
    for (const json& item : j.at("budget").at("components")) {
      r.budget.per_component.emplace_back(
          item.at("component").get<std::string>(),
          item.at("seconds").get<int64_t>());
    }
    j.at("assessments").get_to(r.assessments);
    j.at("components").get_to(r.components);
    j.at("coverage").get_to(r.coverage);
    j.at("crashes").get_to(r.crashes);
    j.at("states_discovered").get_to(r.states_discovered);
    j.at("transitions_discovered").get_to(r.transitions_discovered);
    j.at("events").get_to(r.events);
    j.at("graph_path").get_to(r.graph_path);
    j.at("event_log_path").get_to(r.event_log_path);
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kReportError, e.what());
  }
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "short write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot rename onto " + path.string());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void SaveReport(const RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  WriteFileAtomic(dir / "report.json", ReportToJson(report));
}

RunReport LoadReport(const std::filesystem::path& file) {
  return ReportFromJson(ReadFile(file));
}

}  // namespace vlmfuzz
