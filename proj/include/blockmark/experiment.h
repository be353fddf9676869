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

#ifndef BLOCKMARK_EXPERIMENT_H_
#define BLOCKMARK_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "blockmark/attack.h"
#include "blockmark/calibration.h"
#include "blockmark/corpus.h"
#include "blockmark/detector.h"
#include "blockmark/embedding.h"
#include "blockmark/generator.h"
#include "blockmark/metrics.h"
#include "blockmark/secret_material.h"
#include "json.hpp"

namespace blockmark {

// {"kind": "toy", "toy_seed": u64, "embed_dim": int}
// {"kind": "http", "url": str, "embed_dim": int, "timeout_ms": int,
//  "max_in_flight": int}
std::shared_ptr<const EmbedderBackend> MakeEmbedder(const nlohmann::json& cfg);

// {"kind": "synthetic", "seed": u64, "words": int, "word_length": int}
// {"kind": "http", "url": str}
std::shared_ptr<const CandidateSource> MakeSource(const nlohmann::json& cfg);

struct AttackSpec {
  enum class Kind { kNone, kChannel, kProbe };
  Kind kind = Kind::kNone;
  ChannelSpec channel;
  ProbeSpec probe;

  // {"kind": "none" | "channel" | "insert" | "delete" | "reorder",
  //  "merge_p", "split_p", "flip_p", "rate", "seed"}. The distractor pool is
  // not serialized.
  nlohmann::json ToJson() const;
  static AttackSpec FromJson(const nlohmann::json& j);
};

// Watermarked records "wm-00000", ... Record i gets its own synthetic prompt
// and a selection seed derived from (cfg.selection_seed, i).
std::vector<CorpusRecord> GenerateWatermarkedCorpus(
    const SecretMaterial& material, const EmbedderBackend& backend,
    const CandidateSource& source, const GenerationConfig& cfg, size_t count,
    int threads = 1);

// Unwatermarked records "hu-00000", ...: random sentences joined and passed
// through the segmenter.
std::vector<CorpusRecord> MakeHumanCorpus(size_t count, int num_sentences,
                                          uint64_t seed);

std::vector<std::string> MakeDistractorPool(size_t count, uint64_t seed);

// Applies the attack to the record's segmented text and records the spec,
// sentence counts and delta ratio in meta.
CorpusRecord AttackRecord(const AttackSpec& attack, const CorpusRecord& record);

// `base`, or `base` behind the record's bit-flip channel when its meta
// carries one.
std::shared_ptr<const EmbedderBackend> BackendForRecord(
    std::shared_ptr<const EmbedderBackend> base, const SecretMaterial& material,
    const CorpusRecord& record);

// Detects every record; reports are in record order.
std::vector<DetectionReport> DetectCorpus(
    const SecretMaterial& material,
    const std::shared_ptr<const EmbedderBackend>& backend,
    const CalibrationTable& table, const DetectOptions& options,
    const std::vector<CorpusRecord>& records, int threads = 1);

// Counts of meta.delta values (rounded to 4 decimals) across a corpus.
std::map<double, size_t> DeltaHistogram(const std::vector<CorpusRecord>& records);

struct ExperimentConfig {
  uint64_t key_seed = 0;
  int embed_dim = 768;
  int block_size = 8;
  nlohmann::json embedder = {{"kind", "toy"}, {"toy_seed", 0}};
  nlohmann::json source = {{"kind", "synthetic"}, {"seed", 0}};
  GenerationConfig generation;
  size_t n_pos = 200;
  size_t n_neg = 200;
  uint64_t human_seed = 1;
  std::string watermarked_in;  // optional pre-generated corpus
  std::string human_in;        // optional negative corpus
  AttackSpec attack;
  uint64_t pool_seed = 2;
  size_t pool_size = 200;
  DetectOptions detect;
  std::string table_path;  // optional; cells missing from it are extended
  uint64_t calib_seed = 0;
  int calib_samples = CalibrationTable::kDefaultSamples;
  std::vector<double> fpr_targets = {0.01, 0.05};
  int threads = 1;
  std::string out_dir;

  static ExperimentConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct ExperimentResult {
  MetricsReport metrics;
  std::vector<CorpusRecord> positives;  // after the attack
  std::vector<CorpusRecord> negatives;
  std::vector<double> pos_scores;
  std::vector<double> neg_scores;
};

// generate (or load) -> attack -> detect -> metrics. When out_dir is set,
// writes watermarked.jsonl, attacked.jsonl, human.jsonl, reports.jsonl and
// metrics.json there. Stage failures are rethrown as Error naming the stage
// and record.
ExperimentResult RunExperiment(const ExperimentConfig& config);

}  // namespace blockmark

#endif  // BLOCKMARK_EXPERIMENT_H_
