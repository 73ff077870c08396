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


#include "vlmfuzz/vlm.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"
#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

using nlohmann::json;

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool StartsWithNoCase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) {
      return false;
    }
  }
  return true;
}

// Matches `**Keyword**:` style headers. On success `rest` holds what follows
// and `had_colon` tells whether a colon separated it.
bool MatchHeader(std::string_view line, std::string_view keyword,
                 std::string_view* rest, bool* had_colon) {
  line = TrimView(line);
  while (!line.empty() && (line.front() == '*' || line.front() == '#' ||
                           line.front() == '-' || line.front() == ' ')) {
    line.remove_prefix(1);
  }
  if (!StartsWithNoCase(line, keyword)) return false;
  line.remove_prefix(keyword.size());
  if (!line.empty() && std::isalnum(static_cast<unsigned char>(line.front()))) {
    return false;
  }
  *had_colon = false;
  while (!line.empty() && (line.front() == '*' || line.front() == ':' ||
                           line.front() == ' ' || line.front() == '\t')) {
    if (line.front() == ':') *had_colon = true;
    line.remove_prefix(1);
  }
  *rest = TrimView(line);
  return true;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

// From the `[` at `list_start` to the end of the text when a `]` follows,
// otherwise just the line.
std::string_view ListSpan(std::string_view raw, std::string_view line_rest) {
  const size_t offset = line_rest.data() - raw.data();
  std::string_view tail = raw.substr(offset);
  if (tail.find(']') != std::string_view::npos) return tail;
  return line_rest;
}

}  // namespace

const std::string_view kPromptTemplate =
    "You are exploring a mobile app. The attached screenshot marks every "
    "interactive element with a numeric label. Work out what a user would do "
    "on this screen and answer with an action plan built only from these "
    "functions:\n"
    "1. tap(element: int): tap the element carrying that label.\n"
    "2. long_press(element: int): press and hold the labelled element.\n"
    "3. swipe(element: int, direction: str, dist: str): swipe on the element; "
    "direction is up, down, left or right and dist is short, medium or "
    "long.\n"
    "4. input(element: int, text_input: str): type text into the labelled "
    "text field.\n"
    "5. tap(BACK): press the system back key.\n"
    "6. tap(ENTER): press the enter key.\n"
    "7. scroll(UP): scroll the screen up.\n"
    "8. scroll(DOWN): scroll the screen down.\n"
    "Reply with exactly three lines:\n"
    "Process: <your reasoning in one sentence>\n"
    "Steps: [<action>; <action>; ...]\n"
    "Summary: <what the steps accomplish>\n"
    "Example. For a book search form where 2 is the author field, 3 is the "
    "title field and 4 is the search button, a good reply is:\n"
    "Process: Fill both fields, then submit the search.\n"
    "Steps: [tap(2); input(2, \"J.K. Rowling\"); tap(3); input(3, \"Harry "
    "Potter\"); tap(4);]\n"
    "Summary: Entered an author and a title and started the search.\n";

VlmRequest BuildPrompt(const LabeledScreenshot& labeled,
                       const std::string& component) {
  VlmRequest req;
  req.prompt_text = std::string(kPromptTemplate);
  req.image_png = EncodePng(labeled.image);
  req.component = component;
  req.kind = "vision";
  return req;
}

VlmResponse ParseResponse(std::string_view raw) {
  VlmResponse out;
  out.raw = std::string(raw);
  bool found = false;
  try {
    const std::vector<std::string_view> lines = SplitLines(raw);
    for (size_t i = 0; i < lines.size(); ++i) {
      std::string_view rest;
      bool colon = false;
      if (out.process.empty() && MatchHeader(lines[i], "process", &rest,
                                             &colon) && colon) {
        out.process = std::string(rest);
        continue;
      }
      if (out.summary.empty() && MatchHeader(lines[i], "summary", &rest,
                                             &colon) && colon) {
        out.summary = std::string(rest);
        continue;
      }
      if (found || !MatchHeader(lines[i], "steps", &rest, &colon)) continue;
      if (rest.empty()) {
        // List on the following line.
        size_t j = i + 1;
        while (j < lines.size() && TrimView(lines[j]).empty()) ++j;
        if (j < lines.size() && TrimView(lines[j]).starts_with("[")) {
          rest = TrimView(lines[j]);
          i = j;
        } else if (!colon) {
          continue;
        }
      } else if (rest.front() != '[' && !colon) {
        continue;
      }
      std::string_view list = rest;
      if (!rest.empty() && rest.front() == '[') list = ListSpan(raw, rest);
      ParsedSteps parsed = ParseActionList(list, Grammar::kVlm);
      out.steps = std::move(parsed.actions);
      out.warnings = std::move(parsed.warnings);
      found = true;
    }
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kNoStepsLine,
                std::string("unparseable response: ") + e.what());
  }
  if (!found) throw Error(ErrorCode::kNoStepsLine, "no Steps line in response");
  return out;
}

MockVlmClient MockVlmClient::FromJson(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("mock script: ") + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "mock script must be an array");
  }
  std::vector<Record> records;
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    const std::string where = "mock script [" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("response") ||
        !item["response"].is_string()) {
      throw Error(ErrorCode::kInvalidArgument, where + ": missing response");
    }
    Record r;
    r.match_component = item.value("match_component", std::string("*"));
    r.response = item["response"].get<std::string>();
    r.kind = item.value("kind", std::string("vision"));
    if (r.kind != "vision" && r.kind != "text") {
      throw Error(ErrorCode::kInvalidArgument, where + ": bad kind " + r.kind);
    }
    records.push_back(std::move(r));
  }
  return MockVlmClient(std::move(records));
}

MockVlmClient MockVlmClient::FromFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str());
}

std::string MockVlmClient::Send(const VlmRequest& request) {
  requests_.push_back(request);
  for (Record& r : records_) {
    if (r.consumed || r.kind != request.kind) continue;
    if (r.match_component != "*" && r.match_component != request.component) {
      continue;
    }
    r.consumed = true;
    return r.response;
  }
  throw Error(ErrorCode::kVlmError,
              "mock script has no " + request.kind + " response for " +
                  request.component);
}

size_t MockVlmClient::remaining() const {
  return std::count_if(records_.begin(), records_.end(),
                       [](const Record& r) { return !r.consumed; });
}

HttpVlmOptions HttpVlmOptions::FromEnv() {
  HttpVlmOptions o;
  const char* url = std::getenv("VLMFUZZ_VLM_URL");
  if (url == nullptr || *url == '\0') {
    throw Error(ErrorCode::kVlmError, "VLMFUZZ_VLM_URL is not set");
  }
  o.url = url;
  if (const char* key = std::getenv("VLMFUZZ_VLM_KEY")) o.api_key = key;
  if (const char* model = std::getenv("VLMFUZZ_VLM_MODEL"); model && *model) {
    o.model = model;
  }
  return o;
}

HttpVlmClient::HttpVlmClient(HttpVlmOptions options)
    : options_(std::move(options)) {
  const size_t scheme_end = options_.url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kVlmError, "bad endpoint URL " + options_.url);
  }
  const size_t path_start = options_.url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_ = options_.url;
    path_ = "/v1/chat/completions";
  } else {
    scheme_host_ = options_.url.substr(0, path_start);
    path_ = options_.url.substr(path_start);
  }
}

std::string HttpVlmClient::BuildBody(const VlmRequest& request,
                                     const std::string& model) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", request.prompt_text}});
  if (!request.image_png.empty()) {
    content.push_back(
        {{"type", "image_url"},
         {"image_url",
          {{"url", "data:image/png;base64," +
                       httplib::detail::base64_encode(request.image_png)}}}});
  }
  json body = {
      {"model", request.model_hint.empty() ? model : request.model_hint},
      {"messages", json::array({{{"role", "user"}, {"content", content}}})},
  };
  return body.dump();
}

std::string HttpVlmClient::ExtractContent(std::string_view body) {
  try {
    const json doc = json::parse(body);
    return doc.at("choices").at(0).at("message").at("content")
        .get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kVlmError,
                std::string("malformed completion: ") + e.what());
  }
}

std::string HttpVlmClient::Send(const VlmRequest& request) {
  const std::string body = BuildBody(request, options_.model);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  auto backoff = options_.backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(scheme_host_);
    client.set_connection_timeout(request.timeout_seconds, 0);
    client.set_read_timeout(request.timeout_seconds, 0);
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      spdlog::warn("VLM request failed ({}), attempt {}", last_error,
                   attempt + 1);
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      spdlog::warn("VLM request failed ({}), attempt {}", last_error,
                   attempt + 1);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kVlmError, "HTTP " + std::to_string(res->status));
    }
    return ExtractContent(res->body);
  }
  throw Error(ErrorCode::kVlmError, "giving up: " + last_error);
}

std::string RandomFallbackInput(InputKind kind, Rng& rng) {
  if (kind == InputKind::kNumeric) return std::to_string(rng.Below(1000));
  std::string s(8, 'a');
  for (char& c : s) c = static_cast<char>('a' + rng.Below(26));
  return s;
}

std::map<std::string, std::string> WidgetAttributes(const Widget& w) {
  std::map<std::string, std::string> attrs;
  auto put = [&](const char* k, const std::string& v) {
    if (!v.empty()) attrs[k] = v;
  };
  std::string id = w.resource_id;
  if (const size_t slash = id.rfind('/'); slash != std::string::npos) {
    id = id.substr(slash + 1);
  }
  put("resource_id", id);
  put("class", w.class_name);
  put("hint", w.content_desc);
  put("text", w.text);
  return attrs;
}

std::string PredictTextInput(VlmClient* client,
                             const std::map<std::string, std::string>& attrs,
                             Rng& rng, const std::string& component) {
  if (client == nullptr || attrs.empty()) {
    return RandomFallbackInput(InputKind::kText, rng);
  }
  VlmRequest req;
  req.kind = "text";
  req.component = component;
  req.prompt_text =
      "Suggest one realistic value for the text field described below. "
      "Answer with the value only, on one line.\n" +
      json(attrs).dump();
  try {
    const std::string raw = client->Send(req);
    std::string_view line = raw;
    line = line.substr(0, line.find('\n'));
    line = TrimView(line);
    if (line.size() >= 2 && line.front() == '"' && line.back() == '"') {
      line = line.substr(1, line.size() - 2);
    }
    if (line.empty()) return RandomFallbackInput(InputKind::kText, rng);
    return std::string(line.substr(0, 256));
  } catch (const Error& e) {
    spdlog::debug("text prediction failed: {}", e.what());
    return RandomFallbackInput(InputKind::kText, rng);
  }
}

}  // namespace vlmfuzz
