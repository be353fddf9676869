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

#include "blockmark/detector.h"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "blockmark/block_edit.h"
#include "blockmark/errors.h"
#include "blockmark/math_util.h"

namespace blockmark {
namespace {

void CheckInputs(const SecretMaterial& material, const EmbedderBackend& backend,
                 const DetectOptions& options, const SentenceText& sentences) {
  options.params.Validate();
  if (!backend.deterministic()) {
    throw ConfigError("backend " + backend.name() +
                      " is non-deterministic and cannot be used for detection");
  }
  if (backend.embed_dim() != material.embed_dim()) {
    throw ExtractionError("backend dimension " +
                          std::to_string(backend.embed_dim()) +
                          " does not match key dimension " +
                          std::to_string(material.embed_dim()));
  }
  if (sentences.empty()) throw SegmentationError("no sentences to detect");
}

// Attempts are appended in (candidate, ascending length) order; the first
// maximum wins ties in both detection paths.
void Finalize(DetectionReport& report, const RsCandidateSet& set) {
  if (report.attempts.empty()) throw Error("detection produced no attempts");
  report.score = -std::numeric_limits<double>::infinity();
  for (const auto& a : report.attempts) {
    if (a.z > report.score) {
      report.score = a.z;
      report.best_candidate_id = a.candidate_id;
      report.best_secret_blocks = a.secret_blocks;
    }
  }
  report.num_sentences = set.original.size();
  report.candidate_labels.reserve(set.size());
  for (const auto& c : set.candidates) {
    report.candidate_labels.push_back(c.Label());
  }
  report.best_candidate = report.candidate_labels[report.best_candidate_id];
}

}  // namespace

void AlignmentParams::Validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0 && beta >= 1.0 && std::isfinite(beta))) {
    throw ConfigError("alignment bounds need 0 < alpha <= 1 <= beta, got alpha=" +
                      std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
}

std::vector<size_t> SecretCandidateLengths(const AlignmentParams& params,
                                           size_t num_blocks) {
  params.Validate();
  if (num_blocks == 0) throw DomainError("input has no blocks");
  const size_t lo = std::max<size_t>(1, CeilScaled(params.alpha, num_blocks));
  const size_t hi = std::max(lo, CeilScaled(params.beta, num_blocks));
  std::vector<size_t> out;
  for (size_t n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::vector<BitSequence> SecretCandidates(const SecretMaterial& material,
                                          const AlignmentParams& params,
                                          size_t num_blocks) {
  std::vector<BitSequence> out;
  for (size_t n : SecretCandidateLengths(params, num_blocks)) {
    out.push_back(material.SecretPrefix(n));
  }
  return out;
}

nlohmann::json DetectionReport::ToJson() const {
  nlohmann::json attempts_json = nlohmann::json::array();
  for (const auto& a : attempts) {
    attempts_json.push_back({{"candidate", a.candidate_id},
                             {"secret_blocks", a.secret_blocks},
                             {"ber", a.ber},
                             {"z", a.z}});
  }
  return {{"score", score},
          {"best_candidate", best_candidate},
          {"best_candidate_id", best_candidate_id},
          {"best_secret_blocks", best_secret_blocks},
          {"num_sentences", num_sentences},
          {"candidates", candidate_labels},
          {"attempts", std::move(attempts_json)}};
}

DetectionReport Detect(const SecretMaterial& material,
                       const EmbedderBackend& backend,
                       const CalibrationTable& table,
                       const DetectOptions& options, std::string_view text) {
  return DetectSentences(material, backend, table, options, Segment(text));
}

DetectionReport DetectSentences(const SecretMaterial& material,
                                const EmbedderBackend& backend,
                                const CalibrationTable& table,
                                const DetectOptions& options,
                                const SentenceText& sentences) {
  CheckInputs(material, backend, options, sentences);
  const int M = material.block_size();
  const RsCandidateSet set = EnumerateCandidates(
      sentences, options.rs_mode, options.rs_a, options.rs_b);

  // Every candidate is built from the original, merged and split sentences;
  // each distinct string is embedded once.
  std::unordered_map<std::string, size_t> index;
  std::vector<std::string> distinct;
  for (const auto& c : set.candidates) {
    for (const auto& s : c.text) {
      if (index.try_emplace(s, distinct.size()).second) distinct.push_back(s);
    }
  }
  const auto embeddings = EmbedBatch(backend, distinct);
  std::vector<BitSequence> sentence_bits;
  sentence_bits.reserve(distinct.size());
  for (const auto& e : embeddings) {
    sentence_bits.push_back(ExtractBits(material, e));
  }

  size_t longest = 0;
  for (const auto& c : set.candidates) {
    longest = std::max(longest,
                       SecretCandidateLengths(options.params, c.text.size()).back());
  }
  const PackedBlocks secret(material.SecretPrefix(longest), M);

  DetectionReport report;
  for (size_t id = 0; id < set.size(); ++id) {
    const auto& text = set.candidates[id].text;
    BitSequence bits;
    for (const auto& s : text) bits.append(sentence_bits[index.at(s)]);
    const PackedBlocks extracted(bits, M);
    const size_t n = text.size();

    const auto lengths = SecretCandidateLengths(options.params, n);
    const std::vector<int> row =
        BlockEditLastRow(extracted, secret, lengths.back());
    const CalibrationCell null = table.Lookup(M, static_cast<int>(n));
    for (size_t len : lengths) {
      const double ber = static_cast<double>(row[len]) /
                         static_cast<double>(static_cast<size_t>(M) * std::max(n, len));
      report.attempts.push_back({id, len, ber, (null.mu - ber) / null.sigma});
    }
  }
  Finalize(report, set);
  return report;
}

DetectionReport DetectSentencesNaive(const SecretMaterial& material,
                                     const EmbedderBackend& backend,
                                     const CalibrationTable& table,
                                     const DetectOptions& options,
                                     const SentenceText& sentences) {
  CheckInputs(material, backend, options, sentences);
  const int M = material.block_size();
  const RsCandidateSet set = EnumerateCandidates(
      sentences, options.rs_mode, options.rs_a, options.rs_b);

  DetectionReport report;
  for (size_t id = 0; id < set.size(); ++id) {
    const auto& text = set.candidates[id].text;
    const BitSequence bits =
        ExtractTextBits(material, backend, text.sentences());
    const size_t n = text.size();
    const auto lengths = SecretCandidateLengths(options.params, n);
    const auto secrets = SecretCandidates(material, options.params, n);
    for (size_t k = 0; k < secrets.size(); ++k) {
      const double ber = BlockEditRate(bits, secrets[k], M);
      report.attempts.push_back(
          {id, lengths[k], ber, ZScore(table, M, static_cast<int>(n), ber)});
    }
  }
  Finalize(report, set);
  return report;
}

}  // namespace blockmark
