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


#include "vlmfuzz/adb_device.h"

#include <future>
#include <regex>
#include <sstream>
#include <thread>

#include <boost/asio/io_context.hpp>
#include <boost/process.hpp>

#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

namespace bp = boost::process;

std::string ShellQuote(const std::string& s) {
  const bool plain = !s.empty() && s.find_first_not_of(
                                       "abcdefghijklmnopqrstuvwxyz"
                                       "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                       "0123456789._-/:=,@+%") ==
                                       std::string::npos;
  if (plain) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string_view LogMessage(std::string_view line) {
  const size_t tag = line.find("AndroidRuntime");
  if (tag == std::string_view::npos) return {};
  const size_t colon = line.find(':', tag);
  if (colon == std::string_view::npos) return {};
  line.remove_prefix(colon + 1);
  if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
  return line;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

CommandResult ProcessRunner::Run(const std::vector<std::string>& argv,
                                 std::chrono::milliseconds timeout) {
  if (argv.empty()) throw Error(ErrorCode::kInvalidArgument, "empty command");
  boost::filesystem::path exe = argv[0];
  if (argv[0].find('/') == std::string::npos) exe = bp::search_path(argv[0]);
  if (exe.empty() || !boost::filesystem::exists(exe)) {
    throw Error(ErrorCode::kAdbUnavailable, argv[0] + " not found");
  }
  std::vector<std::string> args(argv.begin() + 1, argv.end());
  boost::asio::io_context io;
  std::future<std::string> out;
  std::future<std::string> err;
  std::error_code ec;
  bp::child child(exe, bp::args(args), bp::std_out > out, bp::std_err > err,
                  bp::std_in.close(), io, ec);
  if (ec) {
    throw Error(ErrorCode::kAdbUnavailable,
                "cannot start " + argv[0] + ": " + ec.message());
  }
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  io.run_until(deadline);
  // Pipes can hit EOF a moment before the child is reaped.
  while (child.running(ec) && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (child.running(ec)) {
    child.terminate(ec);
    throw Error(ErrorCode::kCommandTimeout,
                argv[0] + " timed out after " +
                    std::to_string(timeout.count()) + " ms");
  }
  child.wait(ec);
  CommandResult result;
  result.exit_code = child.exit_code();
  result.out = out.get();
  if (result.exit_code != 0) result.out += err.get();
  return result;
}

std::string AdbExec(CommandRunner& runner, const std::string& serial,
                    const std::vector<std::string>& args,
                    std::chrono::milliseconds timeout) {
  std::vector<std::string> argv{"adb"};
  if (!serial.empty()) {
    argv.push_back("-s");
    argv.push_back(serial);
  }
  argv.insert(argv.end(), args.begin(), args.end());
  CommandResult r = runner.Run(argv, timeout);
  if (r.exit_code != 0) {
    std::string cmd;
    for (const auto& a : args) cmd += " " + a;
    throw Error(ErrorCode::kDeviceError,
                "adb" + cmd + " exited " + std::to_string(r.exit_code) + ": " +
                    r.out);
  }
  return r.out;
}

std::vector<CrashEvent> ParseLogcatCrashes(std::string_view log) {
  std::vector<CrashEvent> out;
  std::istringstream in{std::string(log)};
  std::string raw;
  enum { kIdle, kHeader, kFrames } mode = kIdle;
  CrashEvent current;
  auto flush = [&] {
    if (mode != kIdle && !current.exception_type.empty()) {
      if (current.stack_top_frame.empty()) current.stack_top_frame = "<unknown>";
      out.push_back(current);
    }
    mode = kIdle;
    current = CrashEvent{};
  };
  while (std::getline(in, raw)) {
    std::string_view msg = LogMessage(raw);
    if (msg.data() == nullptr) continue;
    msg = Trim(msg);
    if (msg.starts_with("FATAL EXCEPTION")) {
      flush();
      mode = kHeader;
      continue;
    }
    if (mode == kHeader) {
      if (msg.starts_with("Process:") || msg.empty()) continue;
      const size_t colon = msg.find(": ");
      current.exception_type = std::string(
          colon == std::string_view::npos ? msg : msg.substr(0, colon));
      if (colon != std::string_view::npos) {
        current.message = std::string(msg.substr(colon + 2));
      }
      current.fatal = true;
      mode = kFrames;
      continue;
    }
    if (mode == kFrames && current.stack_top_frame.empty() &&
        msg.starts_with("at ")) {
      std::string_view frame = msg.substr(3);
      frame = frame.substr(0, frame.find('('));
      current.stack_top_frame = std::string(frame);
    }
  }
  flush();
  return out;
}

std::string EscapeInputText(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ') {
      out += "%s";
    } else if (std::string_view("()<>|;&*\\~\"'`$?#[]{}!").find(c) !=
               std::string_view::npos) {
      out += '\\';
      out += c;
    } else {
      out += c;
    }
  }
  return out;
}

std::optional<std::string> ParseResumedActivity(std::string_view dumpsys) {
  static const std::regex re(
      R"((?:mResumedActivity|topResumedActivity|ResumedActivity)[:=]?\s*ActivityRecord\{\S+\s+\S+\s+([A-Za-z0-9_.]+)/([A-Za-z0-9_.$]+))");
  std::cmatch m;
  if (!std::regex_search(dumpsys.data(), dumpsys.data() + dumpsys.size(), m,
                         re)) {
    return std::nullopt;
  }
  const std::string pkg = m[1].str();
  std::string cls = m[2].str();
  if (!cls.empty() && cls.front() == '.') cls = pkg + cls;
  return cls;
}

std::vector<std::string> IntentArgs(const Intent& intent) {
  std::vector<std::string> args;
  if (intent.kind == IntentKind::kExplicit && !intent.target.empty()) {
    args.push_back("-n");
    args.push_back(ShellQuote(intent.package_name + "/" + intent.target));
  }
  if (!intent.action.empty()) {
    args.push_back("-a");
    args.push_back(ShellQuote(intent.action));
  }
  for (const std::string& c : intent.categories) {
    args.push_back("-c");
    args.push_back(ShellQuote(c));
  }
  if (intent.data_uri) {
    args.push_back("-d");
    args.push_back(ShellQuote(*intent.data_uri));
  }
  for (const auto& [key, value] : intent.extras) {
    if (const auto* s = std::get_if<std::string>(&value)) {
      args.insert(args.end(), {"--es", ShellQuote(key), ShellQuote(*s)});
    } else if (const auto* i = std::get_if<int64_t>(&value)) {
      args.insert(args.end(), {"--ei", ShellQuote(key), std::to_string(*i)});
    } else {
      args.insert(args.end(), {"--ez", ShellQuote(key),
                               std::get<bool>(value) ? "true" : "false"});
    }
  }
  return args;
}

AdbDevice::AdbDevice(std::string serial, std::string package,
                     std::set<std::string> services,
                     std::unique_ptr<CommandRunner> runner)
    : serial_(std::move(serial)),
      package_(std::move(package)),
      services_(std::move(services)),
      runner_(std::move(runner)) {}

std::string AdbDevice::Shell(const std::vector<std::string>& args) {
  std::vector<std::string> full{"shell"};
  full.insert(full.end(), args.begin(), args.end());
  return AdbExec(*runner_, serial_, full);
}

void AdbDevice::Key(int code) { Shell({"input", "keyevent", std::to_string(code)}); }

bool AdbDevice::Launch(const Intent& intent) {
  const bool service = services_.count(intent.target) > 0;
  std::vector<std::string> args{"am", service ? "startservice" : "start"};
  const std::vector<std::string> rest = IntentArgs(intent);
  args.insert(args.end(), rest.begin(), rest.end());
  const std::string out = Shell(args);
  if (out.find("Error") != std::string::npos ||
      out.find("Exception") != std::string::npos) {
    return false;
  }
  if (!service) last_launch_ = intent;
  return true;
}

void AdbDevice::Broadcast(const Intent& intent) {
  std::vector<std::string> args{"am", "broadcast"};
  const std::vector<std::string> rest = IntentArgs(intent);
  args.insert(args.end(), rest.begin(), rest.end());
  Shell(args);
}

void AdbDevice::Tap(int x, int y) {
  Shell({"input", "tap", std::to_string(x), std::to_string(y)});
}

void AdbDevice::LongPress(int x, int y) {
  Swipe(x, y, x, y, 1000);
}

void AdbDevice::Swipe(int x1, int y1, int x2, int y2, int duration_ms) {
  Shell({"input", "swipe", std::to_string(x1), std::to_string(y1),
         std::to_string(x2), std::to_string(y2),
         std::to_string(duration_ms)});
}

void AdbDevice::InputText(const Widget& target, const std::string& text) {
  Tap(target.bounds.CenterX(), target.bounds.CenterY());
  if (!target.text.empty()) {
    std::vector<std::string> keys{"input", "keyevent", "123"};  // MOVE_END
    for (size_t i = 0; i < target.text.size(); ++i) keys.push_back("67");
    Shell(keys);
  }
  if (!text.empty()) Shell({"input", "text", EscapeInputText(text)});
}

void AdbDevice::ResumeApp() {
  if (last_launch_) {
    Shell({"am", "start", "-n",
           ShellQuote(last_launch_->package_name + "/" +
                      last_launch_->target)});
  } else {
    Shell({"monkey", "-p", package_, "-c", "android.intent.category.LAUNCHER",
           "1"});
  }
}

void AdbDevice::SetOrientation(Orientation o) {
  Shell({"settings", "put", "system", "accelerometer_rotation", "0"});
  Shell({"settings", "put", "system", "user_rotation",
         o == Orientation::kLandscape ? "1" : "0"});
}

std::string AdbDevice::DumpHierarchy() {
  Shell({"uiautomator", "dump", "/sdcard/window_dump.xml"});
  return AdbExec(*runner_, serial_,
                 {"exec-out", "cat", "/sdcard/window_dump.xml"});
}

std::string AdbDevice::Screenshot() {
  return AdbExec(*runner_, serial_, {"exec-out", "screencap", "-p"});
}

std::string AdbDevice::CurrentComponent() {
  const std::string out = Shell({"dumpsys", "activity", "activities"});
  return ParseResumedActivity(out).value_or("");
}

std::vector<CrashEvent> AdbDevice::DrainCrashEvents() {
  const std::string log =
      AdbExec(*runner_, serial_, {"logcat", "-d", "-b", "crash"});
  AdbExec(*runner_, serial_, {"logcat", "-c", "-b", "crash"});
  std::vector<CrashEvent> events = ParseLogcatCrashes(log);
  for (CrashEvent& e : events) e.mono_ms = clock_.NowMs();
  return events;
}

Rect AdbDevice::ScreenRect() {
  if (!screen_) {
    const std::string out = Shell({"wm", "size"});
    static const std::regex re(R"((\d+)x(\d+))");
    std::smatch m;
    std::string last;
    // "Override size" wins over "Physical size" when both are printed.
    for (auto it = std::sregex_iterator(out.begin(), out.end(), re);
         it != std::sregex_iterator(); ++it) {
      m = *it;
      last = m.str();
    }
    if (last.empty()) {
      throw Error(ErrorCode::kDeviceError, "cannot read screen size: " + out);
    }
    const size_t x = last.find('x');
    screen_ = Rect{0, 0, std::stoi(last.substr(0, x)),
                   std::stoi(last.substr(x + 1))};
  }
  return *screen_;
}

}  // namespace vlmfuzz
