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

#include "blockmark/embedding.h"

#include <cctype>
#include <cmath>

#include "blockmark/errors.h"
#include "blockmark/random.h"

namespace blockmark {

std::vector<Embedding> EmbedBatch(const EmbedderBackend& backend,
                                  std::span<const std::string> texts) {
  if (texts.empty()) return {};
  for (const auto& t : texts) {
    if (t.empty()) throw ConfigError("cannot embed an empty string");
  }
  std::vector<Embedding> out = backend.Embed(texts);
  if (out.size() != texts.size()) {
    throw ProtocolError(backend.name() + " returned " +
                        std::to_string(out.size()) + " embeddings for " +
                        std::to_string(texts.size()) + " texts");
  }
  const auto dim = static_cast<size_t>(backend.embed_dim());
  for (const auto& e : out) {
    if (e.size() != dim) {
      throw ProtocolError(backend.name() + " returned a " +
                          std::to_string(e.size()) +
                          "-dim embedding, declared " + std::to_string(dim));
    }
    for (double x : e) {
      if (!std::isfinite(x)) {
        throw ProtocolError(backend.name() +
                            " returned a non-finite embedding entry");
      }
    }
  }
  return out;
}

std::string NormalizeForEmbedding(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  while (!out.empty() &&
         (out.back() == '.' || out.back() == '!' || out.back() == '?' ||
          out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

ToyEmbedder::ToyEmbedder(uint64_t toy_seed, int embed_dim)
    : toy_seed_(toy_seed), embed_dim_(embed_dim) {
  if (embed_dim < 2) throw ConfigError("toy embed_dim must be at least 2");
}

Embedding ToyEmbedder::EmbedOne(std::string_view text) const {
  Rng rng(derive_key(toy_seed_, {fnv1a64(NormalizeForEmbedding(text))}));
  Embedding e(static_cast<size_t>(embed_dim_));
  double norm2 = 0.0;
  for (double& x : e) {
    x = rng.normal();
    norm2 += x * x;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : e) x *= inv;
  return e;
}

std::vector<Embedding> ToyEmbedder::Embed(
    std::span<const std::string> texts) const {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(EmbedOne(t));
  return out;
}

BitSequence ExtractBits(const SecretMaterial& material,
                        std::span<const double> emb) {
  if (emb.size() != static_cast<size_t>(material.embed_dim())) {
    throw ExtractionError("embedding has dimension " +
                          std::to_string(emb.size()) + ", key expects " +
                          std::to_string(material.embed_dim()));
  }
  BitSequence bits;
  for (int m = 0; m < material.block_size(); ++m) {
    const auto v = material.vector(m);
    double p = 0.0;
    for (size_t d = 0; d < emb.size(); ++d) p += emb[d] * v[d];
    bits.push_back(!(p < 0.0));
  }
  return bits;
}

BitSequence ExtractTextBits(const SecretMaterial& material,
                            const EmbedderBackend& backend,
                            std::span<const std::string> sentences) {
  if (sentences.empty()) throw ExtractionError("no sentences to extract");
  BitSequence out;
  for (const auto& e : EmbedBatch(backend, sentences)) {
    out.append(ExtractBits(material, e));
  }
  return out;
}

}  // namespace blockmark
