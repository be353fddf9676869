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

#include "blockmark/restructurer.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>

#include "blockmark/errors.h"

namespace blockmark {
namespace {

bool IsTerminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool IsCloser(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }
bool IsOpener(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }
bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// All subsets of `items` with at most `k` elements, smallest first.
std::vector<std::vector<size_t>> SubsetsUpTo(const std::vector<size_t>& items,
                                             int k) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> cur;
  const int limit = std::min<int>(k, static_cast<int>(items.size()));
  for (int size = 0; size <= limit; ++size) {
    std::function<void(size_t)> rec = [&](size_t start) {
      if (static_cast<int>(cur.size()) == size) {
        out.push_back(cur);
        return;
      }
      for (size_t i = start; i < items.size(); ++i) {
        cur.push_back(items[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

std::string JoinIndices(const std::vector<size_t>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

SentenceText::SentenceText(std::vector<std::string> sentences)
    : sentences_(std::move(sentences)) {
  for (const auto& s : sentences_) {
    if (s.empty()) throw SegmentationError("empty sentence");
  }
}

std::string SentenceText::Join() const {
  std::string out;
  for (size_t i = 0; i < sentences_.size(); ++i) {
    if (i) out += ' ';
    out += sentences_[i];
  }
  return out;
}

const std::vector<std::string>& Segmenter::DefaultAbbreviations() {
  static const std::vector<std::string> kList = {
      "Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "St.", "vs.", "e.g.", "i.e.",
      "U.S."};
  return kList;
}

Segmenter::Segmenter() : Segmenter(DefaultAbbreviations()) {}

Segmenter::Segmenter(const std::vector<std::string>& abbreviations) {
  for (const auto& a : abbreviations) abbreviations_.insert(Lower(a));
}

Segmenter Segmenter::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open abbreviation list " + path);
  std::vector<std::string> list;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    list.emplace_back(t);
  }
  return Segmenter(list);
}

bool Segmenter::IsAbbreviation(std::string_view token) const {
  while (!token.empty() && IsOpener(token.front())) token.remove_prefix(1);
  if (token.size() == 2 && std::isupper(static_cast<unsigned char>(token[0]))) {
    return true;  // single initial, "W."
  }
  return abbreviations_.contains(Lower(token));
}

SentenceText Segmenter::Segment(std::string_view text) const {
  if (Trim(text).empty()) {
    throw SegmentationError("cannot segment empty text");
  }
  std::vector<std::string> out;
  size_t start = 0;
  const size_t n = text.size();
  size_t i = 0;
  while (i < n) {
    if (!IsTerminator(text[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && IsTerminator(text[j])) ++j;
    size_t k = j;
    while (k < n && IsCloser(text[k])) ++k;
    if (k >= n || !IsSpace(text[k])) {
      i = k;
      continue;
    }
    size_t next = k;
    while (next < n && IsSpace(text[next])) ++next;
    if (next >= n) break;
    const auto c = static_cast<unsigned char>(text[next]);
    const bool starts_sentence =
        std::isupper(c) || std::isdigit(c) || IsOpener(text[next]);
    bool boundary = starts_sentence;
    if (boundary && j == i + 1 && k == j && text[i] == '.') {
      size_t w = i;
      while (w > start && !IsSpace(text[w - 1])) --w;
      if (IsAbbreviation(text.substr(w, i + 1 - w))) boundary = false;
    }
    if (boundary) {
      const auto s = Trim(text.substr(start, k - start));
      if (!s.empty()) out.emplace_back(s);
      start = next;
    }
    i = next;
  }
  const auto rest = Trim(text.substr(start));
  if (!rest.empty()) out.emplace_back(rest);
  return SentenceText(std::move(out));
}

SentenceText Segment(std::string_view text) {
  static const Segmenter kDefault;
  return kDefault.Segment(text);
}

std::string MergeSentences(std::string_view left, std::string_view right) {
  size_t c = left.size();
  while (c > 0 && IsCloser(left[c - 1])) --c;
  size_t t = c;
  while (t > 0 && IsTerminator(left[t - 1])) --t;
  std::string joined(left.substr(0, t));
  joined.append(left.substr(c));
  while (!joined.empty() && IsSpace(joined.back())) joined.pop_back();
  if (joined.empty()) return std::string(right);
  joined += ' ';
  joined.append(right);
  return joined;
}

std::pair<std::string, std::string> SplitSentence(std::string_view sentence) {
  const auto s = Trim(sentence);
  const auto len = static_cast<long>(s.size());
  long best_a = -1, best_b = -1, best_gap = 0;
  size_t i = 0;
  while (i < s.size()) {
    if (!IsSpace(s[i])) {
      ++i;
      continue;
    }
    const size_t a = i;
    while (i < s.size() && IsSpace(s[i])) ++i;
    const auto left = static_cast<long>(a);
    const auto right = len - static_cast<long>(i);
    const long gap = std::labs(left - right);
    if (best_a < 0 || gap < best_gap) {
      best_a = left;
      best_b = static_cast<long>(i);
      best_gap = gap;
    }
  }
  if (best_a < 0) {
    throw SplitError("cannot split one-word sentence \"" + std::string(s) +
                     "\"");
  }
  return {std::string(s.substr(0, static_cast<size_t>(best_a))),
          std::string(s.substr(static_cast<size_t>(best_b)))};
}

SentenceText MergeAt(const SentenceText& text, size_t boundary) {
  if (boundary + 1 >= text.size()) {
    throw RestructureError("merge boundary " + std::to_string(boundary) +
                           " out of range for " + std::to_string(text.size()) +
                           " sentences");
  }
  std::vector<std::string> out;
  out.reserve(text.size() - 1);
  for (size_t i = 0; i < text.size(); ++i) {
    if (i == boundary) {
      out.push_back(MergeSentences(text[i], text[i + 1]));
      ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return SentenceText(std::move(out));
}

SentenceText SplitAt(const SentenceText& text, size_t index) {
  if (index >= text.size()) {
    throw RestructureError("split index " + std::to_string(index) +
                           " out of range for " + std::to_string(text.size()) +
                           " sentences");
  }
  auto [left, right] = SplitSentence(text[index]);
  std::vector<std::string> out;
  out.reserve(text.size() + 1);
  for (size_t i = 0; i < text.size(); ++i) {
    if (i == index) {
      out.push_back(std::move(left));
      out.push_back(std::move(right));
    } else {
      out.push_back(text[i]);
    }
  }
  return SentenceText(std::move(out));
}

RsMode ParseRsMode(std::string_view s) {
  if (s == "off") return RsMode::kOff;
  if (s == "single") return RsMode::kSingle;
  if (s == "multi") return RsMode::kMulti;
  throw ConfigError("unknown rs mode \"" + std::string(s) +
                    "\" (expected off, single or multi)");
}

std::string_view RsModeName(RsMode mode) {
  switch (mode) {
    case RsMode::kOff:
      return "off";
    case RsMode::kSingle:
      return "single";
    case RsMode::kMulti:
      return "multi";
  }
  return "?";
}

std::string RsCandidate::Label() const {
  if (merges.empty() && splits.empty()) return "original";
  std::string s;
  if (!merges.empty()) s += "merge:" + JoinIndices(merges);
  if (!splits.empty()) {
    if (!s.empty()) s += '+';
    s += "split:" + JoinIndices(splits);
  }
  return s;
}

size_t RsCandidateSet::NumMerged() const {
  return static_cast<size_t>(std::count_if(
      candidates.begin(), candidates.end(),
      [](const RsCandidate& c) { return !c.merges.empty() && c.splits.empty(); }));
}

size_t RsCandidateSet::NumSplit() const {
  return static_cast<size_t>(std::count_if(
      candidates.begin(), candidates.end(),
      [](const RsCandidate& c) { return c.merges.empty() && !c.splits.empty(); }));
}

namespace {

// Realizes one separator configuration. `halves[i]` holds the split of
// sentence i when it has one.
SentenceText Realize(
    const SentenceText& text,
    const std::vector<std::optional<std::pair<std::string, std::string>>>& halves,
    const std::vector<size_t>& merges, const std::vector<size_t>& splits) {
  std::vector<bool> merged(text.size(), false);
  std::vector<bool> split(text.size(), false);
  for (size_t b : merges) merged[b] = true;
  for (size_t s : splits) split[s] = true;

  std::vector<std::string> out;
  std::optional<std::string> cur;
  auto extend = [&](const std::string& piece) {
    cur = cur ? MergeSentences(*cur, piece) : piece;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    if (split[i]) {
      extend(halves[i]->first);
      out.push_back(std::move(*cur));
      cur = halves[i]->second;
    } else {
      extend(text[i]);
    }
    if (!merged[i]) {
      out.push_back(std::move(*cur));
      cur.reset();
    }
  }
  return SentenceText(std::move(out));
}

}  // namespace

RsCandidateSet EnumerateCandidates(const SentenceText& text, RsMode mode,
                                   int a_max, int b_max) {
  if (text.empty()) throw SegmentationError("no sentences to restructure");
  if (a_max < 0 || b_max < 0) {
    throw ConfigError("restructuring caps must be non-negative");
  }
  RsCandidateSet set;
  set.original = text;
  set.a_max = a_max;
  set.b_max = b_max;
  set.candidates.push_back({text, {}, {}});
  if (mode == RsMode::kOff) return set;

  std::vector<std::optional<std::pair<std::string, std::string>>> halves(
      text.size());
  std::vector<size_t> split_slots;
  for (size_t i = 0; i < text.size(); ++i) {
    try {
      halves[i] = SplitSentence(text[i]);
      split_slots.push_back(i);
    } catch (const SplitError&) {
      // No internal slot for a one-word sentence.
    }
  }

  if (mode == RsMode::kSingle) {
    for (size_t b = 0; b + 1 < text.size(); ++b) {
      set.candidates.push_back({MergeAt(text, b), {b}, {}});
    }
    for (size_t i : split_slots) {
      set.candidates.push_back({Realize(text, halves, {}, {i}), {}, {i}});
    }
    return set;
  }

  std::vector<size_t> boundary_slots;
  for (size_t b = 0; b + 1 < text.size(); ++b) boundary_slots.push_back(b);
  const auto merge_sets = SubsetsUpTo(boundary_slots, a_max);
  const auto split_sets = SubsetsUpTo(split_slots, b_max);
  for (const auto& ms : merge_sets) {
    for (const auto& ss : split_sets) {
      if (ms.empty() && ss.empty()) continue;
      set.candidates.push_back({Realize(text, halves, ms, ss), ms, ss});
    }
  }
  return set;
}

BigInt CountConfigurations(int num_sentences, int max_merges, int max_splits) {
  if (num_sentences < 1 || max_merges < 0 || max_splits < 0 ||
      max_merges >= num_sentences || max_splits >= num_sentences) {
    throw DomainError("count_configurations requires 0 <= a < N and 0 <= b < N");
  }
  auto partial_binomial_sum = [](int n, int k) {
    BigInt sum = 0;
    BigInt c = 1;  // C(n, 0)
    for (int i = 0; i <= k; ++i) {
      sum += c;
      c = c * (n - i) / (i + 1);
    }
    return sum;
  };
  return partial_binomial_sum(num_sentences - 1, max_merges) *
         partial_binomial_sum(num_sentences, max_splits);
}

CountRatio DeltaRatio(const SentenceText& before, const SentenceText& after) {
  if (before.empty() || after.empty()) {
    throw DomainError("sentence-count ratio needs two non-empty texts");
  }
  return {after.size(), before.size()};
}

}  // namespace blockmark
