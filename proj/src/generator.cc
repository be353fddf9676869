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

#include "blockmark/generator.h"

#include <algorithm>
#include <cctype>

#include "blockmark/restructurer.h"

namespace blockmark {
namespace {

constexpr uint64_t kSelectionTag = 0x73656c63;  // "selc"

}  // namespace

SyntheticSource::SyntheticSource(uint64_t seed, int words_per_sentence,
                                 int word_length)
    : seed_(seed), words_(words_per_sentence), word_length_(word_length) {
  if (words_per_sentence < 1 || word_length < 1) {
    throw ConfigError("synthetic sentences need at least one letter");
  }
}

std::string SyntheticSource::RandomSentence(Rng& rng, int words,
                                            int word_length) {
  std::string s;
  s.reserve(static_cast<size_t>(words * (word_length + 1)));
  for (int w = 0; w < words; ++w) {
    if (w) s += ' ';
    for (int k = 0; k < word_length; ++k) {
      s += static_cast<char>('a' + rng.below(26));
    }
  }
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  s += '.';
  return s;
}

std::vector<std::string> SyntheticSource::NextSentences(std::string_view context,
                                                        int n) const {
  const uint64_t key = derive_key(seed_, {fnv1a64(context)});
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(std::max(n, 0)));
  for (int q = 0; q < n; ++q) {
    Rng rng(prf64(key, static_cast<uint64_t>(q)));
    out.push_back(RandomSentence(rng, words_, word_length_));
  }
  return out;
}

void GenerationConfig::Validate() const {
  if (candidates < 1) throw ConfigError("candidate budget Q must be >= 1");
  if (num_sentences < 1) throw ConfigError("num_sentences must be >= 1");
}

std::string GenerationRecord::Text() const {
  return SentenceText(sentences).Join();
}

int MatchCount(const BitSequence& extracted, const BitSequence& target_block) {
  return static_cast<int>(extracted.size()) - hamming(extracted, target_block);
}

GenerationRecord GenerateWatermarked(const SecretMaterial& material,
                                     const EmbedderBackend& backend,
                                     const CandidateSource& source,
                                     const GenerationConfig& cfg,
                                     std::string_view prompt) {
  cfg.Validate();
  if (prompt.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ConfigError("prompt must be non-empty");
  }
  const int M = material.block_size();
  Rng selector(derive_key(cfg.selection_seed, {kSelectionTag}));
  GenerationRecord record;
  std::string context(prompt);

  for (int n = 0; n < cfg.num_sentences; ++n) {
    std::vector<std::string> candidates;
    std::vector<BitSequence> bits;
    try {
      for (auto& raw : source.NextSentences(context, cfg.candidates)) {
        if (raw.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        candidates.push_back(Segment(raw)[0]);
      }
      if (candidates.empty()) {
        throw GenerationAborted("source " + source.name() +
                                    " returned no candidates at sentence " +
                                    std::to_string(n),
                                std::move(record));
      }
      for (const auto& e : EmbedBatch(backend, candidates)) {
        bits.push_back(ExtractBits(material, e));
      }
    } catch (const GenerationAborted&) {
      throw;
    } catch (const Error& e) {
      throw GenerationAborted("sentence " + std::to_string(n) + ": " + e.what(),
                              std::move(record));
    }
    if (static_cast<int>(candidates.size()) < cfg.candidates) {
      record.warnings.push_back(
          "sentence " + std::to_string(n) + ": source returned " +
          std::to_string(candidates.size()) + " of " +
          std::to_string(cfg.candidates) + " candidates");
    }

    const BitSequence target = material.SecretBlock(static_cast<size_t>(n));
    std::vector<int> counts;
    counts.reserve(bits.size());
    for (const auto& b : bits) counts.push_back(MatchCount(b, target));
    const int best = *std::max_element(counts.begin(), counts.end());
    std::vector<size_t> tied;
    for (size_t q = 0; q < counts.size(); ++q) {
      if (counts[q] == best) tied.push_back(q);
    }
    const size_t pick = tied[selector.below(tied.size())];

    record.sentences.push_back(candidates[pick]);
    record.match_counts.push_back(best);
    record.full_match.push_back(best == M);
    context += ' ';
    context += candidates[pick];
  }
  return record;
}

}  // namespace blockmark
