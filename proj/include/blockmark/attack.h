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

#ifndef BLOCKMARK_ATTACK_H_
#define BLOCKMARK_ATTACK_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "blockmark/bit_sequence.h"
#include "blockmark/embedding.h"
#include "blockmark/restructurer.h"
#include "blockmark/secret_material.h"
#include "json.hpp"

namespace blockmark {

// Parametric paraphrase channel. Structure is perturbed in the text (merges
// per boundary, then splits per sentence); lexical drift is modeled as i.i.d.
// flips of each sentence's extracted bits.
struct ChannelSpec {
  double bit_flip_p = 0.0;
  double merge_p = 0.0;  // per boundary
  double split_p = 0.0;  // per sentence, after merging
  uint64_t attack_seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static ChannelSpec FromJson(const nlohmann::json& j);
};

// Structural half of the channel. Merges use MergeSentences; splits use
// SplitSentence and then punctuate the left half and capitalize the right
// half, so the pieces survive re-segmentation of the joined text. All
// probabilities zero returns the input unchanged. Deterministic in
// (spec, text).
SentenceText ApplyChannel(const ChannelSpec& spec, const SentenceText& text);

// Flips each bit independently with probability p.
BitSequence ApplyBitChannel(const BitSequence& bits, double p, uint64_t seed);

// Lexical half of the channel, applied at embedding time: each sentence gets a
// fixed set of secret directions (keyed by attack seed and normalized text,
// each chosen with probability p) along which its embedding is reflected.
// Reflection across v_m flips exactly bit m and leaves the other projections
// alone.
class BitFlipEmbedder final : public EmbedderBackend {
 public:
  BitFlipEmbedder(std::shared_ptr<const EmbedderBackend> inner,
                  const SecretMaterial& material, double flip_p,
                  uint64_t attack_seed);

  std::string name() const override { return "bitflip(" + inner_->name() + ")"; }
  int embed_dim() const override { return inner_->embed_dim(); }
  bool deterministic() const override { return inner_->deterministic(); }
  std::vector<Embedding> Embed(
      std::span<const std::string> texts) const override;

  // Mask of directions flipped for `text`.
  std::vector<bool> FlipMask(std::string_view text) const;

 private:
  std::shared_ptr<const EmbedderBackend> inner_;
  SecretMaterial material_;
  double flip_p_;
  uint64_t key_;
};

enum class ProbeKind { kInsert, kDelete, kReorder };

ProbeKind ParseProbeKind(std::string_view s);
std::string_view ProbeKindName(ProbeKind kind);

struct ProbeSpec {
  ProbeKind kind = ProbeKind::kDelete;
  double rate = 0.1;  // in (0, 1]
  uint64_t probe_seed = 0;
  std::vector<std::string> distractor_pool;  // used by insert

  void Validate() const;
  // Rates outside [0.1, 0.5] are allowed but untested territory.
  bool InStudiedBand() const { return rate >= 0.1 && rate <= 0.5; }
};

// insert: ceil(rate*N) pool sentences at uniform positions.
// delete: ceil(rate*N) distinct sentences removed, at least one kept.
// reorder: ceil(rate*N) positions (at least 2) cyclically permuted so every
//          chosen position receives a different sentence.
// Retained sentences are never modified.
SentenceText ApplyProbe(const ProbeSpec& spec, const SentenceText& text);

}  // namespace blockmark

#endif  // BLOCKMARK_ATTACK_H_
