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


#include "vlmfuzz/heuristics.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <spdlog/spdlog.h>

#include "vlmfuzz/error.h"

namespace vlmfuzz {
namespace {

constexpr std::string_view kBuiltinLexicon =
    "save\tpositive\nopen\tpositive\nok\tpositive\nadd\tpositive\n"
    "search\tpositive\nnext\tpositive\ndone\tpositive\nyes\tpositive\n"
    "exit\tnegative\nback\tnegative\ncancel\tnegative\nno\tnegative\n"
    "delete\tnegative\nquit\tnegative\nclose\tnegative\n";

std::string Normalize(std::string_view text) {
  auto is_trim = [](unsigned char c) {
    return std::isspace(c) || c == '.' || c == '!' || c == '?' || c == ':';
  };
  size_t b = 0, e = text.size();
  while (b < e && is_trim(text[b])) ++b;
  while (e > b && is_trim(text[e - 1])) --e;
  std::string out(text.substr(b, e - b));
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

std::string_view SentimentName(Sentiment s) {
  switch (s) {
    case Sentiment::kNeutral: return "neutral";
    case Sentiment::kPositive: return "positive";
    case Sentiment::kNegative: return "negative";
  }
  return "neutral";
}

SentimentLexicon SentimentLexicon::Parse(std::string_view text) {
  SentimentLexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "lexicon line " + std::to_string(line_no) + ": missing tab");
    }
    const std::string word = Normalize(line.substr(0, tab));
    const std::string kind = Normalize(line.substr(tab + 1));
    if (kind == "positive") {
      lex.Add(word, Sentiment::kPositive);
    } else if (kind == "negative") {
      lex.Add(word, Sentiment::kNegative);
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "lexicon line " + std::to_string(line_no) +
                      ": unknown sentiment '" + kind + "'");
    }
  }
  return lex;
}

SentimentLexicon SentimentLexicon::LoadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

const SentimentLexicon& SentimentLexicon::Default() {
  static const SentimentLexicon lexicon = [] {
    std::string path = std::string(VLMFUZZ_DATA_DIR) + "/sentiment_lexicon.txt";
    if (const char* env = std::getenv("VLMFUZZ_DATA_DIR")) {
      path = std::string(env) + "/sentiment_lexicon.txt";
    }
    try {
      return LoadFile(path);
    } catch (const Error& e) {
      spdlog::debug("using built-in lexicon: {}", e.what());
      return Parse(kBuiltinLexicon);
    }
  }();
  return lexicon;
}

Sentiment SentimentLexicon::Classify(std::string_view text) const {
  auto it = words_.find(Normalize(text));
  return it == words_.end() ? Sentiment::kNeutral : it->second;
}

Sentiment ClassifySentiment(std::string_view text) {
  return SentimentLexicon::Default().Classify(text);
}

std::string SentimentText(const Widget& w) {
  return w.text.empty() ? w.content_desc : w.text;
}

int RowEpsilon(const Rect& screen) {
  return std::max(1, screen.Height() / 50);
}

TapOrder OrderTapActions(const std::vector<Widget>& widgets, int row_epsilon,
                         Rng& rng, const SentimentLexicon& lexicon) {
  const size_t n = widgets.size();
  // Union-find over side-by-side pairs.
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::vector<bool> in_row(n, false);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const Rect& a = widgets[i].bounds;
      const Rect& b = widgets[j].bounds;
      if (std::abs(a.CenterY() - b.CenterY()) > row_epsilon) continue;
      if (a.x1 < b.x2 && b.x1 < a.x2) continue;  // stacked or nested
      in_row[i] = in_row[j] = true;
      parent[find(i)] = find(j);
    }
  }

  std::vector<size_t> groups[3];
  std::vector<size_t> row;
  std::vector<Sentiment> sentiment(n);
  for (size_t i = 0; i < n; ++i) {
    sentiment[i] = lexicon.Classify(SentimentText(widgets[i]));
    if (in_row[i]) {
      row.push_back(i);
    } else {
      groups[static_cast<int>(sentiment[i])].push_back(i);
    }
  }
  for (auto& g : groups) rng.Shuffle(std::span<size_t>(g));

  // Rows ordered by their topmost center, members left to right.
  std::map<size_t, int> row_y;
  for (size_t i : row) {
    const size_t r = find(i);
    const int cy = widgets[i].bounds.CenterY();
    auto [it, inserted] = row_y.emplace(r, cy);
    if (!inserted) it->second = std::min(it->second, cy);
  }
  std::stable_sort(row.begin(), row.end(), [&](size_t a, size_t b) {
    const int ya = row_y[find(a)], yb = row_y[find(b)];
    if (ya != yb) return ya < yb;
    if (find(a) != find(b)) return find(a) < find(b);
    return widgets[a].bounds.x1 < widgets[b].bounds.x1;
  });

  TapOrder out;
  auto emit = [&](size_t i, bool same_row) {
    out.order.push_back(i);
    out.sentiment.push_back(sentiment[i]);
    out.same_row.push_back(same_row);
  };
  for (int k : {0, 1, 2}) {
    for (size_t i : groups[k]) emit(i, false);
  }
  for (size_t i : row) emit(i, true);
  return out;
}

}  // namespace vlmfuzz
