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

#ifndef BLOCKMARK_DETECTOR_H_
#define BLOCKMARK_DETECTOR_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "blockmark/bit_sequence.h"
#include "blockmark/calibration.h"
#include "blockmark/embedding.h"
#include "blockmark/restructurer.h"
#include "blockmark/secret_material.h"
#include "json.hpp"

namespace blockmark {

// Bounds on the secret prefix length relative to the input's block count.
// alpha = beta = 1 pins the prefix to the input length.
struct AlignmentParams {
  double alpha = 0.5;
  double beta = 1.5;

  // Throws ConfigError unless 0 < alpha <= 1 <= beta.
  void Validate() const;
};

// Block counts max(1, ceil(alpha * n)) .. ceil(beta * n), ascending.
std::vector<size_t> SecretCandidateLengths(const AlignmentParams& params,
                                           size_t num_blocks);

// The corresponding key-stream prefixes.
std::vector<BitSequence> SecretCandidates(const SecretMaterial& material,
                                          const AlignmentParams& params,
                                          size_t num_blocks);

struct DetectOptions {
  AlignmentParams params;
  RsMode rs_mode = RsMode::kSingle;
  int rs_a = 1;  // multi-step caps
  int rs_b = 1;
};

struct DetectionAttempt {
  size_t candidate_id = 0;
  size_t secret_blocks = 0;
  double ber = 0.0;
  double z = 0.0;
};

struct DetectionReport {
  double score = 0.0;  // max z over all attempts
  size_t best_candidate_id = 0;
  std::string best_candidate;  // label of the winning restructuring
  size_t best_secret_blocks = 0;
  size_t num_sentences = 0;
  std::vector<std::string> candidate_labels;
  std::vector<DetectionAttempt> attempts;

  nlohmann::json ToJson() const;
};

// Watermark score of `text` (generated text only, no prompt).
//
// Restructures the text, embeds each distinct sentence once, and for every
// candidate computes one block edit table against the longest secret prefix;
// its bottom row gives the distance to every shorter prefix. Each attempt's
// z-score uses the null statistics for the candidate's own block count.
DetectionReport Detect(const SecretMaterial& material,
                       const EmbedderBackend& backend,
                       const CalibrationTable& table,
                       const DetectOptions& options, std::string_view text);

DetectionReport DetectSentences(const SecretMaterial& material,
                                const EmbedderBackend& backend,
                                const CalibrationTable& table,
                                const DetectOptions& options,
                                const SentenceText& sentences);

// Straightforward reference: embeds every candidate separately and runs a
// full table per secret prefix. Same report as DetectSentences.
DetectionReport DetectSentencesNaive(const SecretMaterial& material,
                                     const EmbedderBackend& backend,
                                     const CalibrationTable& table,
                                     const DetectOptions& options,
                                     const SentenceText& sentences);

}  // namespace blockmark

#endif  // BLOCKMARK_DETECTOR_H_
