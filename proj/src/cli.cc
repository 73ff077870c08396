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


#include "vlmfuzz/cli.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "vlmfuzz/adb_device.h"
#include "vlmfuzz/budget.h"
#include "vlmfuzz/catalog.h"
#include "vlmfuzz/error.h"
#include "vlmfuzz/explorer.h"
#include "vlmfuzz/report.h"
#include "vlmfuzz/sim_app.h"
#include "vlmfuzz/vlm.h"

namespace vlmfuzz {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct TargetOptions {
  std::string sim;
  std::string adb;
  std::string apk;
};

struct FuzzOptions {
  TargetOptions target;
  std::string budget = "1h";
  int tau = 2;
  uint64_t seed = 0;
  std::string vlm = "off";
  std::string out = "vlmfuzz-out";
  std::vector<std::string> non_ignore;
  int64_t idle_wait_ms = 1500;
  int64_t progress_timeout_ms = 60000;
  std::string catalog;
};

// Everything needed to talk to one target.
struct Target {
  Manifest manifest;
  std::unique_ptr<DeviceAdapter> device;
  std::string description;
  std::string mode;
};

int ExitCodeFor(const Error& e) {
  if (e.IsDeviceError() || e.code() == ErrorCode::kNoLaunchableComponents) {
    return kExitDevice;
  }
  switch (e.code()) {
    case ErrorCode::kSpecError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kIoError:
    case ErrorCode::kMalformedManifest:
    case ErrorCode::kEmptyManifest:
    case ErrorCode::kMalformedCatalog:
    case ErrorCode::kMalformedHierarchy:
    case ErrorCode::kEmptyHierarchy:
    case ErrorCode::kVlmError:
    case ErrorCode::kReportError:
      return kExitConfig;
    default:
      return kExitFailure;
  }
}

Target OpenTarget(const TargetOptions& opts) {
  if (opts.sim.empty() == opts.adb.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "exactly one of --sim or --adb is required");
  }
  Target t;
  if (!opts.sim.empty()) {
    if (!fs::exists(opts.sim)) {
      throw Error(ErrorCode::kIoError, "no such spec file: " + opts.sim);
    }
    SimAppSpec spec = LoadSimAppSpecFile(opts.sim);
    t.manifest = ManifestFromSimSpec(spec);
    t.device = std::make_unique<SimDevice>(std::move(spec));
    t.description = opts.sim;
    t.mode = "sim";
    return t;
  }
  if (opts.apk.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--adb needs --apk");
  }
  std::string dump;
  if (opts.apk.ends_with(".apk")) {
    ProcessRunner runner;
    CommandResult r = runner.Run(
        {"aapt", "dump", "xmltree", opts.apk, "AndroidManifest.xml"},
        std::chrono::seconds(60));
    if (r.exit_code != 0) {
      throw Error(ErrorCode::kMalformedManifest, "aapt failed: " + r.out);
    }
    dump = std::move(r.out);
  } else {
    dump = ReadFile(opts.apk);
  }
  t.manifest = ParseManifest(dump);
  std::set<std::string> services;
  for (const ComponentDecl& c : t.manifest.components) {
    if (c.kind == ComponentKind::kService) services.insert(c.name);
  }
  t.device = std::make_unique<AdbDevice>(opts.adb, t.manifest.package_name,
                                         std::move(services));
  t.description = opts.adb;
  t.mode = "adb";
  return t;
}

std::unique_ptr<VlmClient> OpenVlm(const std::string& spec) {
  if (spec == "off") return nullptr;
  if (spec == "live") {
    return std::make_unique<HttpVlmClient>(HttpVlmOptions::FromEnv());
  }
  if (spec.starts_with("mock:")) {
    return std::make_unique<MockVlmClient>(
        MockVlmClient::FromFile(spec.substr(5)));
  }
  throw Error(ErrorCode::kInvalidArgument,
              "--vlm must be off, live or mock:PATH");
}

BroadcastCatalog OpenCatalog(const std::string& path) {
  return LoadCatalog(path.empty() ? DefaultCatalogPath() : fs::path(path));
}

int64_t BudgetSeconds(const std::string& text) {
  auto s = ParseDuration(text);
  if (!s || *s <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad duration '" + text + "'");
  }
  return *s;
}

void AddTargetOptions(CLI::App* cmd, TargetOptions& t) {
  cmd->add_option("--sim", t.sim, "Simulated app spec (JSON)");
  cmd->add_option("--adb", t.adb, "Device serial for the ADB backend");
  cmd->add_option("--apk", t.apk,
                  "APK, or its `aapt dump xmltree` output (ADB mode)");
}

int RunFuzz(const FuzzOptions& o, std::ostream& out) {
  ExplorerConfig config;
  config.tau = o.tau;
  config.idle_wait_ms = o.idle_wait_ms;
  config.progress_timeout_ms = o.progress_timeout_ms;
  config.total_budget_seconds = BudgetSeconds(o.budget);
  config.rng_seed = o.seed;
  config.non_ignore_components = o.non_ignore;
  config.vlm_enabled = o.vlm != "off";
  config.Validate();

  std::unique_ptr<VlmClient> vlm = OpenVlm(o.vlm);
  const BroadcastCatalog catalog = OpenCatalog(o.catalog);
  Target target = OpenTarget(o.target);

  const fs::path dir = o.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  std::ofstream events(dir / "events.tsv", std::ios::binary | std::ios::trunc);
  if (!events) throw Error(ErrorCode::kIoError, "cannot write event log");

  Explorer explorer(*target.device, target.manifest, config, vlm.get(),
                    &catalog);
  explorer.recorder().SetEventSink(&events);
  const RunResult result = explorer.Run();
  events.close();

  std::ostringstream graph;
  explorer.recorder().graph().ExportTsv(graph);
  WriteFileAtomic(dir / "graph.tsv", graph.str());

  RunReport report;
  report.config = {target.description, target.mode,    config.tau,
                   config.idle_wait_ms, config.progress_timeout_ms,
                   config.total_budget_seconds, config.rng_seed, o.vlm,
                   config.non_ignore_components};
  report.budget = result.plan;
  report.assessments = result.assessments;
  report.components = result.components;
  report.coverage = explorer.recorder().coverage();
  report.crashes = DedupCrashes(explorer.recorder().crashes());
  report.states_discovered =
      static_cast<int64_t>(explorer.recorder().graph().StateCount());
  report.transitions_discovered =
      static_cast<int64_t>(explorer.recorder().graph().TransitionCount());
  report.events = static_cast<int64_t>(explorer.recorder().events().size());
  report.graph_path = "graph.tsv";
  report.event_log_path = "events.tsv";
  SaveReport(report, dir);

  out << "states " << report.states_discovered << "\n"
      << "transitions " << report.transitions_discovered << "\n"
      << "unique_crashes " << report.crashes.size() << "\n"
      << "report " << (dir / "report.json").string() << "\n";
  return kExitOk;
}

int RunAssess(const TargetOptions& t, const std::string& budget,
              uint64_t seed, int64_t idle_wait_ms, std::ostream& out) {
  const int64_t total = BudgetSeconds(budget);
  Target target = OpenTarget(t);
  Rng rng(seed);
  const std::vector<ComplexityAssessment> assessments = AssessComplexity(
      *target.device, target.manifest, rng, idle_wait_ms);
  const BudgetPlan plan = AllocateBudget(assessments, total - total / 10);
  json doc = {{"total_seconds", total}, {"allocated_seconds", plan.total}};
  json rows = json::array();
  for (const ComplexityAssessment& a : assessments) {
    rows.push_back({{"component", a.component},
                    {"interactive_count", a.interactive_count},
                    {"menu_item_count", a.menu_item_count},
                    {"launch_failed", a.launch_failed},
                    {"seconds", plan.For(a.component)}});
  }
  doc["components"] = rows;
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int RunParseHierarchy(const std::string& file, const std::string& component,
                      bool interactive_only, std::ostream& out) {
  const UiSnapshot snap = ParseHierarchy(ReadFile(file), component);
  out << "state " << StateSignature(snap).ToString() << "\n";
  out << "window " << snap.window << (snap.overlay ? " overlay" : "") << "\n";
  out << "editor " << (HasTextEditor(snap) ? "yes" : "no") << "\n";
  out << "progress " << (DetectProgressIndicator(snap) ? "yes" : "no") << "\n";
  const std::vector<int> interactive = InteractiveIndices(snap);
  size_t label = 0;
  for (size_t i = 0; i < snap.widgets.size(); ++i) {
    const Widget& w = snap.widgets[i];
    const bool is_interactive = w.IsInteractive();
    if (interactive_only && !is_interactive) continue;
    std::string flags;
    if (w.clickable) flags += 'c';
    if (w.long_clickable) flags += 'l';
    if (w.scrollable) flags += 's';
    if (w.editable) flags += 'e';
    if (w.inherited_interactive) flags += 'i';
    out << (is_interactive ? std::to_string(++label) : std::string("-"))
        << '\t' << w.class_name << '\t' << w.resource_id << '\t'
        << FormatBounds(w.bounds) << '\t' << (flags.empty() ? "-" : flags)
        << '\t' << w.text << "\n";
  }
  return kExitOk;
}

int RunReplayLog(const std::string& sim, const std::string& log_path,
                 int64_t idle_wait_ms, std::ostream& out) {
  if (!fs::exists(sim)) {
    throw Error(ErrorCode::kIoError, "no such spec file: " + sim);
  }
  const std::string log = ReadFile(log_path);
  const fs::path report_path = fs::path(log_path).parent_path() / "report.json";
  if (idle_wait_ms < 0) {
    idle_wait_ms = 1500;
    if (fs::exists(report_path)) {
      idle_wait_ms = LoadReport(report_path).config.idle_wait_ms;
    }
  }
  SimDevice device(LoadSimAppSpecFile(sim));
  RecordingDevice rec(device, idle_wait_ms);
  std::istringstream in(log);
  std::string line;
  int line_no = 0;
  int mismatches = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, '\t')) fields.push_back(field);
    int64_t mono = 0;
    if (fields.size() != 4 ||
        std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(),
                        mono)
                .ec != std::errc()) {
      throw Error(ErrorCode::kInvalidArgument,
                  log_path + ":" + std::to_string(line_no) + ": bad record");
    }
    std::optional<Action> action = ParseAction(fields[2], Grammar::kFull);
    if (!action) {
      throw Error(ErrorCode::kInvalidArgument,
                  log_path + ":" + std::to_string(line_no) +
                      ": unknown action " + fields[2]);
    }
    device.sim_clock().AdvanceTo(mono);
    rec.Invalidate();
    const ActionOutcome o = rec.Execute(*action);
    if (o.after.ToString() != fields[3]) ++mismatches;
  }
  rec.FinalCoverageSample();
  out << "states " << rec.graph().StateCount() << "\n"
      << "transitions " << rec.graph().TransitionCount() << "\n"
      << "events " << rec.events().size() << "\n"
      << "mismatches " << mismatches << "\n";
  return mismatches == 0 ? kExitOk : kExitFailure;
}

}  // namespace

std::optional<int64_t> ParseDuration(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int64_t unit = 1;
  switch (text.back()) {
    case 's': unit = 1; text.remove_suffix(1); break;
    case 'm': unit = 60; text.remove_suffix(1); break;
    case 'h': unit = 3600; text.remove_suffix(1); break;
    default: break;
  }
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() ||
      value < 0) {
    return std::nullopt;
  }
  return value * unit;
}

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("vlmfuzz", sink);
  logger->set_pattern("%l: %v");
  logger->set_level(spdlog::level::warn);
  auto previous = spdlog::default_logger();
  spdlog::set_default_logger(logger);
  struct Restore {
    std::shared_ptr<spdlog::logger> logger;
    ~Restore() { spdlog::set_default_logger(logger); }
  } restore{previous};

  CLI::App app{"GUI exploration engine for Android apps and simulated apps",
               "vlmfuzz"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  FuzzOptions fuzz;
  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "Explore a target");
  AddTargetOptions(fuzz_cmd, fuzz.target);
  fuzz_cmd->add_option("--budget", fuzz.budget, "Total time, e.g. 60s, 5m, 1h");
  fuzz_cmd->add_option("--tau", fuzz.tau, "Visit threshold");
  fuzz_cmd->add_option("--seed", fuzz.seed, "RNG seed");
  fuzz_cmd->add_option("--vlm", fuzz.vlm, "off | live | mock:PATH");
  fuzz_cmd->add_option("--out", fuzz.out, "Output directory");
  fuzz_cmd->add_option("--non-ignore", fuzz.non_ignore,
                       "External components to explore")
      ->delimiter(',');
  fuzz_cmd->add_option("--idle-wait-ms", fuzz.idle_wait_ms,
                       "Wait after each action");
  fuzz_cmd->add_option("--progress-timeout-ms", fuzz.progress_timeout_ms,
                       "Longest wait on a loading indicator");
  fuzz_cmd->add_option("--catalog", fuzz.catalog, "Broadcast intent catalog");

  TargetOptions assess_target;
  std::string assess_budget = "1h";
  uint64_t assess_seed = 0;
  int64_t assess_idle = 1500;
  CLI::App* assess_cmd =
      app.add_subcommand("assess", "Print the per-component budget plan");
  AddTargetOptions(assess_cmd, assess_target);
  assess_cmd->add_option("--budget", assess_budget, "Total time");
  assess_cmd->add_option("--seed", assess_seed, "RNG seed");
  assess_cmd->add_option("--idle-wait-ms", assess_idle, "Wait after launch");

  std::string hier_file;
  std::string hier_component = "unknown";
  bool hier_interactive = false;
  CLI::App* hier_cmd =
      app.add_subcommand("parse-hierarchy", "Dump a UI hierarchy file");
  hier_cmd->add_option("file", hier_file, "uiautomator XML")->required();
  hier_cmd->add_option("--component", hier_component, "Owning component");
  hier_cmd->add_flag("--interactive", hier_interactive,
                     "Only interactive widgets");

  std::string replay_sim;
  std::string replay_log;
  int64_t replay_idle = -1;
  CLI::App* replay_cmd =
      app.add_subcommand("replay-log", "Re-run an event log on a simulated app");
  replay_cmd->add_option("--sim", replay_sim, "Simulated app spec")->required();
  replay_cmd->add_option("--log", replay_log, "events.tsv")->required();
  replay_cmd->add_option("--idle-wait-ms", replay_idle,
                         "Defaults to the recorded run's setting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }
  if (verbose) logger->set_level(spdlog::level::debug);

  try {
    if (fuzz_cmd->parsed()) return RunFuzz(fuzz, out);
    if (assess_cmd->parsed()) {
      return RunAssess(assess_target, assess_budget, assess_seed, assess_idle,
                       out);
    }
    if (hier_cmd->parsed()) {
      return RunParseHierarchy(hier_file, hier_component, hier_interactive,
                               out);
    }
    if (replay_cmd->parsed()) {
      return RunReplayLog(replay_sim, replay_log, replay_idle, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace vlmfuzz
