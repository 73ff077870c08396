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


#ifndef VLMFUZZ_VLM_H_
#define VLMFUZZ_VLM_H_

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vlmfuzz/action.h"
#include "vlmfuzz/hierarchy.h"
#include "vlmfuzz/rng.h"

namespace vlmfuzz {

// The shipped prompt. Byte-stable; tests compare against it.
extern const std::string_view kPromptTemplate;

struct VlmRequest {
  std::string prompt_text;
  std::string image_png;  // empty for text-only requests
  std::string model_hint;
  int timeout_seconds = 60;
  // Routing for the scripted client.
  std::string component;
  std::string kind = "vision";  // or "text"
};

struct VlmResponse {
  std::string process;
  std::vector<Action> steps;
  std::string summary;
  std::string raw;
  std::vector<std::string> warnings;
};

VlmRequest BuildPrompt(const LabeledScreenshot& labeled,
                       const std::string& component = "");

// Throws kNoStepsLine when no `Steps` line is present. Never throws anything
// else.
VlmResponse ParseResponse(std::string_view raw);

class VlmClient {
 public:
  virtual ~VlmClient() = default;
  // Raw model text. Throws kVlmError on transport failure.
  virtual std::string Send(const VlmRequest& request) = 0;
};

// Replays a JSON script: an array of
//   {"match_component": "<name>|*", "response": "...", "kind": "vision|text"}
// Each request consumes the first unconsumed record whose component and kind
// match. No match is a kVlmError.
class MockVlmClient : public VlmClient {
 public:
  struct Record {
    std::string match_component;
    std::string response;
    std::string kind = "vision";
    bool consumed = false;
  };

  explicit MockVlmClient(std::vector<Record> records)
      : records_(std::move(records)) {}
  static MockVlmClient FromJson(std::string_view json_text);
  static MockVlmClient FromFile(const std::string& path);

  std::string Send(const VlmRequest& request) override;

  const std::vector<VlmRequest>& requests() const { return requests_; }
  size_t remaining() const;

 private:
  std::vector<Record> records_;
  std::vector<VlmRequest> requests_;
};

struct HttpVlmOptions {
  std::string url;  // full chat-completion endpoint
  std::string api_key;
  std::string model = "gpt-4o";
  int retries = 2;
  std::chrono::milliseconds backoff{500};

  // Reads VLMFUZZ_VLM_URL, VLMFUZZ_VLM_KEY and VLMFUZZ_VLM_MODEL. Throws
  // kVlmError when the URL is unset.
  static HttpVlmOptions FromEnv();
};

class HttpVlmClient : public VlmClient {
 public:
  explicit HttpVlmClient(HttpVlmOptions options);
  std::string Send(const VlmRequest& request) override;

  // Request body in the chat-completion wire format.
  static std::string BuildBody(const VlmRequest& request,
                               const std::string& model);
  // choices[0].message.content. Throws kVlmError.
  static std::string ExtractContent(std::string_view body);

 private:
  HttpVlmOptions options_;
  std::string scheme_host_;
  std::string path_;
};

enum class InputKind { kText, kNumeric };

// [a-z]{8} or an integer in [0, 999].
std::string RandomFallbackInput(InputKind kind, Rng& rng);

// Asks `client` (may be null) for a plausible value given the widget's
// attributes. Falls back to random text on any failure.
std::string PredictTextInput(VlmClient* client,
                             const std::map<std::string, std::string>& attrs,
                             Rng& rng, const std::string& component = "");

std::map<std::string, std::string> WidgetAttributes(const Widget& w);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_VLM_H_
