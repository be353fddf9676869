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

#include "blockmark/secret_material.h"

#include <cmath>
#include <string>

#include "blockmark/errors.h"
#include "blockmark/random.h"

namespace blockmark {
namespace {

constexpr uint64_t kStreamTag = 0x62697473;  // "bits"
constexpr uint64_t kVectorTag = 0x76656373;  // "vecs"
constexpr double kRedrawNorm = 1e-8;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SecretMaterial::SecretMaterial(uint64_t seed, int embed_dim, int block_size)
    : seed_(seed),
      embed_dim_(embed_dim),
      block_size_(block_size),
      stream_key_(derive_key(seed, {kStreamTag})) {}

SecretMaterial SecretMaterial::Derive(uint64_t seed, int embed_dim,
                                      int block_size) {
  if (embed_dim < 2) {
    throw ConfigError("embed_dim must be at least 2, got " +
                      std::to_string(embed_dim));
  }
  if (block_size < 1) {
    throw ConfigError("block size must be positive, got " +
                      std::to_string(block_size));
  }
  if (block_size > embed_dim) {
    throw DimensionError("block size " + std::to_string(block_size) +
                         " exceeds embedding dimension " +
                         std::to_string(embed_dim));
  }

  SecretMaterial m(seed, embed_dim, block_size);
  const auto dim = static_cast<size_t>(embed_dim);
  m.vectors_.assign(static_cast<size_t>(block_size) * dim, 0.0);

  // Modified Gram-Schmidt over seeded Gaussian draws. A draw that collapses
  // onto the span of earlier vectors is replaced by the next attempt.
  for (int i = 0; i < block_size; ++i) {
    std::span<double> v(m.vectors_.data() + static_cast<size_t>(i) * dim, dim);
    for (uint64_t attempt = 0;; ++attempt) {
      Rng rng(derive_key(seed, {kVectorTag, static_cast<uint64_t>(i), attempt}));
      for (double& x : v) x = rng.normal();
      for (int j = 0; j < i; ++j) {
        std::span<const double> u(
            m.vectors_.data() + static_cast<size_t>(j) * dim, dim);
        const double p = dot(v, u);
        for (size_t d = 0; d < dim; ++d) v[d] -= p * u[d];
      }
      const double norm = std::sqrt(dot(v, v));
      if (norm >= kRedrawNorm) {
        for (double& x : v) x /= norm;
        break;
      }
    }
  }
  return m;
}

std::span<const double> SecretMaterial::vector(int m) const {
  const auto dim = static_cast<size_t>(embed_dim_);
  return {vectors_.data() + static_cast<size_t>(m) * dim, dim};
}

BitSequence SecretMaterial::SecretBits(uint64_t start_bit, size_t count) const {
  std::vector<uint8_t> bits(count);
  uint64_t word_index = ~0ULL;
  uint64_t word = 0;
  for (size_t k = 0; k < count; ++k) {
    const uint64_t i = start_bit + k;
    if (i / 64 != word_index) {
      word_index = i / 64;
      word = prf64(stream_key_, word_index);
    }
    bits[k] = static_cast<uint8_t>((word >> (i % 64)) & 1U);
  }
  return BitSequence(std::move(bits));
}

BitSequence SecretMaterial::SecretBlock(size_t n) const {
  const auto M = static_cast<size_t>(block_size_);
  return SecretBits(n * M, M);
}

BitSequence SecretMaterial::SecretPrefix(size_t num_blocks) const {
  return SecretBits(0, num_blocks * static_cast<size_t>(block_size_));
}

nlohmann::json SecretMaterial::ToJson() const {
  return {{"version", kKeyFormatVersion},
          {"seed", seed_},
          {"embed_dim", embed_dim_},
          {"M", block_size_}};
}

SecretMaterial SecretMaterial::FromJson(const nlohmann::json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kKeyFormatVersion) {
      throw ConfigError("unsupported key format version " +
                        std::to_string(version));
    }
    return Derive(j.at("seed").get<uint64_t>(), j.at("embed_dim").get<int>(),
                  j.at("M").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed key document: ") + e.what());
  }
}

}  // namespace blockmark
