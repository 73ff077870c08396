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

#ifndef VLMFUZZ_ERROR_H_
#define VLMFUZZ_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vlmfuzz {

enum class ErrorCode {
  kMalformedManifest,
  kEmptyManifest,
  kMalformedCatalog,
  kMalformedHierarchy,
  kEmptyHierarchy,
  kNoScreenshot,
  kPrecondition,
  kNoLaunchableComponents,
  kInvalidArgument,
  kSpecError,
  kDeviceError,
  kAdbUnavailable,
  kCommandTimeout,
  kVlmError,
  kNoStepsLine,
  kWidgetVanished,
  kIoError,
  kReportError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures surface as this exception. The code is what
// callers branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

  // Device-side failures (ADB, timeouts, sim faults) share one policy in the
  // explorer: skip to the next component.
  bool IsDeviceError() const {
    return code_ == ErrorCode::kDeviceError ||
           code_ == ErrorCode::kAdbUnavailable ||
           code_ == ErrorCode::kCommandTimeout;
  }

  bool IsVlmError() const {
    return code_ == ErrorCode::kVlmError || code_ == ErrorCode::kNoStepsLine;
  }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedManifest: return "MalformedManifest";
    case ErrorCode::kEmptyManifest: return "EmptyManifest";
    case ErrorCode::kMalformedCatalog: return "MalformedCatalog";
    case ErrorCode::kMalformedHierarchy: return "MalformedHierarchy";
    case ErrorCode::kEmptyHierarchy: return "EmptyHierarchy";
    case ErrorCode::kNoScreenshot: return "NoScreenshot";
    case ErrorCode::kPrecondition: return "PreconditionViolation";
    case ErrorCode::kNoLaunchableComponents: return "NoLaunchableComponents";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSpecError: return "SpecError";
    case ErrorCode::kDeviceError: return "DeviceError";
    case ErrorCode::kAdbUnavailable: return "AdbUnavailable";
    case ErrorCode::kCommandTimeout: return "CommandTimeout";
    case ErrorCode::kVlmError: return "VlmError";
    case ErrorCode::kNoStepsLine: return "NoStepsLine";
    case ErrorCode::kWidgetVanished: return "WidgetVanished";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kReportError: return "ReportError";
  }
  return "Unknown";
}

}  // namespace vlmfuzz

#endif  // VLMFUZZ_ERROR_H_
