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

#ifndef BLOCKMARK_GENERATOR_H_
#define BLOCKMARK_GENERATOR_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "blockmark/bit_sequence.h"
#include "blockmark/embedding.h"
#include "blockmark/errors.h"
#include "blockmark/random.h"
#include "blockmark/secret_material.h"

namespace blockmark {

// Proposes next-sentence candidates for a context.
class CandidateSource {
 public:
  virtual ~CandidateSource() = default;
  virtual std::string name() const = 0;
  // Should return exactly `n` single sentences.
  virtual std::vector<std::string> NextSentences(std::string_view context,
                                                 int n) const = 0;
};

// Offline source. Candidate q for a context is a string of random words drawn
// from a stream keyed by (seed, context, q), so the same context always gets
// the same candidates. Every sentence has the same character length, which
// makes a merge of two sentences split back exactly at the join.
class SyntheticSource final : public CandidateSource {
 public:
  explicit SyntheticSource(uint64_t seed, int words_per_sentence = 6,
                           int word_length = 5);

  std::string name() const override { return "synthetic"; }
  std::vector<std::string> NextSentences(std::string_view context,
                                         int n) const override;

  // "Abcde fghij ... xyzab." with `words` words of `word_length` letters.
  static std::string RandomSentence(Rng& rng, int words, int word_length);

 private:
  uint64_t seed_;
  int words_;
  int word_length_;
};

struct GenerationConfig {
  int candidates = 64;  // Q
  int num_sentences = 12;
  uint64_t selection_seed = 0;

  void Validate() const;
};

struct GenerationRecord {
  std::vector<std::string> sentences;
  std::vector<int> match_counts;  // in [0, M]
  std::vector<bool> full_match;   // match_counts[i] == M
  std::vector<std::string> warnings;

  std::string Text() const;
};

// Thrown when the backend or source fails mid-generation; carries what was
// generated before the failure.
class GenerationAborted : public GenerationError {
 public:
  GenerationAborted(const std::string& what, GenerationRecord partial)
      : GenerationError(what), partial_(std::move(partial)) {}
  const GenerationRecord& partial() const { return partial_; }

 private:
  GenerationRecord partial_;
};

// Positions where the bits agree. Throws BlockAlignmentError on a length
// mismatch.
int MatchCount(const BitSequence& extracted, const BitSequence& target_block);

// Generates cfg.num_sentences sentences after `prompt`. Sentence n (0-based)
// is chosen among Q candidates for the context prompt + previous selections:
// the candidates whose bits best match secret block n, ties broken uniformly
// with a stream seeded by cfg.selection_seed. The prompt consumes no key
// bits. Candidates that contain a sentence boundary are cut at it.
GenerationRecord GenerateWatermarked(const SecretMaterial& material,
                                     const EmbedderBackend& backend,
                                     const CandidateSource& source,
                                     const GenerationConfig& cfg,
                                     std::string_view prompt);

}  // namespace blockmark

#endif  // BLOCKMARK_GENERATOR_H_
