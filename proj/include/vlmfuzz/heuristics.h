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


#ifndef VLMFUZZ_HEURISTICS_H_
#define VLMFUZZ_HEURISTICS_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vlmfuzz/hierarchy.h"
#include "vlmfuzz/rng.h"

namespace vlmfuzz {

enum class Sentiment { kNeutral, kPositive, kNegative };

std::string_view SentimentName(Sentiment s);

class SentimentLexicon {
 public:
  // Lines of `word<TAB>positive|negative`; '#' starts a comment.
  static SentimentLexicon Parse(std::string_view text);
  static SentimentLexicon LoadFile(const std::string& path);
  // The shipped list, or the built-in copy when the data file is missing.
  static const SentimentLexicon& Default();

  Sentiment Classify(std::string_view text) const;
  void Add(const std::string& word, Sentiment s) { words_[word] = s; }
  size_t size() const { return words_.size(); }

 private:
  std::map<std::string, Sentiment> words_;
};

Sentiment ClassifySentiment(std::string_view text);

// Label used for sentiment: text, else content description.
std::string SentimentText(const Widget& w);

struct TapOrder {
  // Indices into the input list, in execution order.
  std::vector<size_t> order;
  // Parallel to `order`.
  std::vector<Sentiment> sentiment;
  std::vector<bool> same_row;
};

// Neutral, positive and negative taps each shuffled with `rng`, followed by
// widgets that share a row with another tappable (top to bottom, left to
// right). Two widgets share a row when their vertical centers are within
// `row_epsilon` pixels and their horizontal extents do not overlap.
TapOrder OrderTapActions(const std::vector<Widget>& widgets, int row_epsilon,
                         Rng& rng,
                         const SentimentLexicon& lexicon =
                             SentimentLexicon::Default());

// 2% of the screen height.
int RowEpsilon(const Rect& screen);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_HEURISTICS_H_
