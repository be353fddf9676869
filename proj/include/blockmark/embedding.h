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

#ifndef BLOCKMARK_EMBEDDING_H_
#define BLOCKMARK_EMBEDDING_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blockmark/bit_sequence.h"
#include "blockmark/secret_material.h"

namespace blockmark {

using Embedding = std::vector<double>;

// Source of sentence embeddings. Implementations must be safe to call from
// several threads at once.
class EmbedderBackend {
 public:
  virtual ~EmbedderBackend() = default;

  virtual std::string name() const = 0;
  virtual int embed_dim() const = 0;
  // Non-deterministic backends cannot be used for detection.
  virtual bool deterministic() const { return true; }

  // Raw call; one vector per input text, in order. Callers should go through
  // EmbedBatch, which validates the result.
  virtual std::vector<Embedding> Embed(
      std::span<const std::string> texts) const = 0;
};

// Embeds `texts` and checks the result against the backend's declared
// contract: one vector per text, each of embed_dim() finite entries.
// Throws ProtocolError on violations and propagates BackendError.
std::vector<Embedding> EmbedBatch(const EmbedderBackend& backend,
                                  std::span<const std::string> texts);

// Text normalization applied before hashing in the toy embedder: lowercase,
// whitespace collapsed and trimmed, trailing '.', '!' and '?' removed.
std::string NormalizeForEmbedding(std::string_view text);

// Offline embedder: hashes the normalized sentence into a seed and returns a
// unit-length Gaussian vector. Any change to the normalized text produces an
// unrelated embedding.
class ToyEmbedder final : public EmbedderBackend {
 public:
  ToyEmbedder(uint64_t toy_seed, int embed_dim);

  std::string name() const override { return "toy"; }
  int embed_dim() const override { return embed_dim_; }
  std::vector<Embedding> Embed(
      std::span<const std::string> texts) const override;

  Embedding EmbedOne(std::string_view text) const;

 private:
  uint64_t toy_seed_;
  int embed_dim_;
};

// M bits of one embedding: bit m is 0 iff <emb, v_m> < 0. A zero inner
// product yields 1. Throws ExtractionError on dimension mismatch.
BitSequence ExtractBits(const SecretMaterial& material,
                        std::span<const double> emb);

// Concatenated bits of every sentence, M per sentence.
BitSequence ExtractTextBits(const SecretMaterial& material,
                            const EmbedderBackend& backend,
                            std::span<const std::string> sentences);

}  // namespace blockmark

#endif  // BLOCKMARK_EMBEDDING_H_
