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

#ifndef BLOCKMARK_SECRET_MATERIAL_H_
#define BLOCKMARK_SECRET_MATERIAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blockmark/bit_sequence.h"
#include "json.hpp"

namespace blockmark {

// The watermark key: an addressable pseudo-random bit stream plus M
// orthonormal vectors in the embedding space. Everything is a pure function
// of (seed, embed_dim, block_size), so only that header is ever persisted.
//
// Immutable after construction; safe to share across threads.
class SecretMaterial {
 public:
  static constexpr int kKeyFormatVersion = 1;

  // Throws DimensionError if block_size > embed_dim, ConfigError if
  // embed_dim < 2 or block_size < 1.
  static SecretMaterial Derive(uint64_t seed, int embed_dim, int block_size);

  uint64_t seed() const { return seed_; }
  int embed_dim() const { return embed_dim_; }
  int block_size() const { return block_size_; }

  // Secret vector m, 0-based, m < block_size().
  std::span<const double> vector(int m) const;

  // Bits [start_bit, start_bit + count) of the key stream.
  BitSequence SecretBits(uint64_t start_bit, size_t count) const;
  // Block n (0-based) of the stream: the bits the n-th generated sentence
  // carries.
  BitSequence SecretBlock(size_t n) const;
  // The first `num_blocks` blocks.
  BitSequence SecretPrefix(size_t num_blocks) const;

  nlohmann::json ToJson() const;
  static SecretMaterial FromJson(const nlohmann::json& j);

 private:
  SecretMaterial(uint64_t seed, int embed_dim, int block_size);

  uint64_t seed_;
  int embed_dim_;
  int block_size_;
  uint64_t stream_key_;
  std::vector<double> vectors_;  // block_size x embed_dim, row-major
};

}  // namespace blockmark

#endif  // BLOCKMARK_SECRET_MATERIAL_H_
