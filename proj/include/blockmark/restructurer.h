// Copyright 2026 The blockmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLOCKMARK_RESTRUCTURER_H_
#define BLOCKMARK_RESTRUCTURER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace blockmark {

// An ordered list of non-empty sentences.
class SentenceText {
 public:
  SentenceText() = default;
  // Throws SegmentationError if any sentence is empty.
  explicit SentenceText(std::vector<std::string> sentences);

  size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  const std::string& operator[](size_t i) const { return sentences_[i]; }
  const std::vector<std::string>& sentences() const { return sentences_; }
  auto begin() const { return sentences_.begin(); }
  auto end() const { return sentences_.end(); }

  // Sentences joined by single spaces.
  std::string Join() const;

  friend bool operator==(const SentenceText&, const SentenceText&) = default;

 private:
  std::vector<std::string> sentences_;
};

// Rule-based sentence splitter. A boundary is a run of '.', '!' or '?'
// (optionally followed by closing quotes/brackets), then whitespace, then an
// uppercase letter, digit or opening quote. A lone '.' ending a known
// abbreviation or a single capital initial ("W.") is not a boundary.
class Segmenter {
 public:
  Segmenter();
  explicit Segmenter(const std::vector<std::string>& abbreviations);

  // One abbreviation per line; blank lines and lines starting with '#' are
  // skipped.
  static Segmenter FromFile(const std::string& path);
  static const std::vector<std::string>& DefaultAbbreviations();

  // Throws SegmentationError on empty or whitespace-only input.
  SentenceText Segment(std::string_view text) const;

  // True for listed abbreviations and single capital initials ("W.").
  bool IsAbbreviation(std::string_view token) const;

 private:
  std::unordered_set<std::string> abbreviations_;  // lowercased
};

// Segments with the default abbreviation list.
SentenceText Segment(std::string_view text);

// Joins two sentences: the left one's trailing '.', '!' or '?' run is dropped
// and one space is inserted. Capitalization is left alone.
std::string MergeSentences(std::string_view left, std::string_view right);

// Splits at the whitespace boundary whose left and right character counts
// are closest; ties go to the leftmost boundary. Throws SplitError when the
// sentence has no internal whitespace.
std::pair<std::string, std::string> SplitSentence(std::string_view sentence);

// Replaces sentences `boundary` and `boundary + 1` (0-based) with their
// merge. Throws RestructureError if boundary + 1 >= size().
SentenceText MergeAt(const SentenceText& text, size_t boundary);

// Replaces sentence `index` (0-based) with its two halves. Throws
// RestructureError for a bad index, SplitError for a one-word sentence.
SentenceText SplitAt(const SentenceText& text, size_t index);

enum class RsMode {
  kOff,     // the input text only
  kSingle,  // input, every single merge, every single split
  kMulti,   // every configuration of <= a_max merges and <= b_max splits
};

// Parses "off" | "single" | "multi".
RsMode ParseRsMode(std::string_view s);
std::string_view RsModeName(RsMode mode);

struct RsCandidate {
  SentenceText text;
  std::vector<size_t> merges;  // boundaries removed, 0-based
  std::vector<size_t> splits;  // original sentences split, 0-based

  // "original", "merge:3", "split:0", "merge:1,4+split:2".
  std::string Label() const;
};

struct RsCandidateSet {
  SentenceText original;
  int a_max = 1;
  int b_max = 1;
  // candidates[0] is always the unmodified input.
  std::vector<RsCandidate> candidates;

  size_t size() const { return candidates.size(); }
  size_t NumMerged() const;  // candidates with merges only
  size_t NumSplit() const;   // candidates with splits only
};

// Builds the restructuring candidates for `text`. Multi-step mode follows a
// separator model: each original sentence has one internal split point, the
// N-1 boundaries and N internal points are independent slots, and merged
// sentences are never split again at their own midpoint. Sentences without
// internal whitespace contribute no split slot.
RsCandidateSet EnumerateCandidates(const SentenceText& text,
                                   RsMode mode = RsMode::kSingle,
                                   int a_max = 1, int b_max = 1);

using BigInt = boost::multiprecision::cpp_int;

// Size of the restructuring solution space with at most `max_merges` merges
// and at most `max_splits` splits of an N-sentence text:
//   (sum_{i<=a} C(N-1, i)) * (sum_{j<=b} C(N, j)).
// Throws DomainError unless 0 <= a < N and 0 <= b < N.
BigInt CountConfigurations(int num_sentences, int max_merges, int max_splits);

// Sentence-count change ratio |after| / |before|.
struct CountRatio {
  size_t after = 0;
  size_t before = 0;
  double value() const {
    return static_cast<double>(after) / static_cast<double>(before);
  }
};

CountRatio DeltaRatio(const SentenceText& before, const SentenceText& after);

}  // namespace blockmark

#endif  // BLOCKMARK_RESTRUCTURER_H_
