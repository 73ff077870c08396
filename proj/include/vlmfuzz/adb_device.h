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


#ifndef VLMFUZZ_ADB_DEVICE_H_
#define VLMFUZZ_ADB_DEVICE_H_

#include <chrono>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vlmfuzz/clock.h"
#include "vlmfuzz/device.h"

namespace vlmfuzz {

struct CommandResult {
  int exit_code = 0;
  std::string out;
};

class CommandRunner {
 public:
  virtual ~CommandRunner() = default;
  // argv[0] is the program. Throws kAdbUnavailable when it cannot be found
  // and kCommandTimeout when `timeout` elapses.
  virtual CommandResult Run(const std::vector<std::string>& argv,
                            std::chrono::milliseconds timeout) = 0;
};

// Runs commands with boost::process, searching PATH for argv[0].
class ProcessRunner : public CommandRunner {
 public:
  CommandResult Run(const std::vector<std::string>& argv,
                    std::chrono::milliseconds timeout) override;
};

// `adb [-s serial] args...`; throws kDeviceError on a non-zero exit.
std::string AdbExec(CommandRunner& runner, const std::string& serial,
                    const std::vector<std::string>& args,
                    std::chrono::milliseconds timeout =
                        std::chrono::seconds(30));

// "FATAL EXCEPTION" blocks from an AndroidRuntime log.
std::vector<CrashEvent> ParseLogcatCrashes(std::string_view log);

// `input text` argument: spaces become %s, shell metacharacters escaped.
std::string EscapeInputText(std::string_view text);

// `mResumedActivity` / `topResumedActivity` from `dumpsys activity`.
std::optional<std::string> ParseResumedActivity(std::string_view dumpsys);

// The `am start` / `am broadcast` argument list for an intent.
std::vector<std::string> IntentArgs(const Intent& intent);

class AdbDevice : public DeviceAdapter {
 public:
  AdbDevice(std::string serial, std::string package,
            std::set<std::string> services,
            std::unique_ptr<CommandRunner> runner =
                std::make_unique<ProcessRunner>());

  bool Launch(const Intent& intent) override;
  void Broadcast(const Intent& intent) override;
  void Tap(int x, int y) override;
  void LongPress(int x, int y) override;
  void Swipe(int x1, int y1, int x2, int y2, int duration_ms) override;
  void InputText(const Widget& target, const std::string& text) override;
  void PressBack() override { Key(4); }
  void PressEnter() override { Key(66); }
  void PressMenu() override { Key(82); }
  void PressHome() override { Key(3); }
  void ResumeApp() override;
  void SetOrientation(Orientation o) override;
  std::string DumpHierarchy() override;
  std::string Screenshot() override;
  std::string CurrentComponent() override;
  std::vector<CrashEvent> DrainCrashEvents() override;
  Rect ScreenRect() override;
  Clock& clock() override { return clock_; }

 private:
  std::string Shell(const std::vector<std::string>& args);
  void Key(int code);

  std::string serial_;
  std::string package_;
  std::set<std::string> services_;
  std::unique_ptr<CommandRunner> runner_;
  SteadyClock clock_;
  std::optional<Intent> last_launch_;
  std::optional<Rect> screen_;
};

}  // namespace vlmfuzz

#endif  // VLMFUZZ_ADB_DEVICE_H_
