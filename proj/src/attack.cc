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

#include "blockmark/attack.h"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "blockmark/errors.h"
#include "blockmark/math_util.h"
#include "blockmark/random.h"

namespace blockmark {
namespace {

constexpr uint64_t kChannelTag = 0x6368616e;  // "chan"
constexpr uint64_t kFlipTag = 0x666c6970;     // "flip"
constexpr uint64_t kProbeTag = 0x70726f62;    // "prob"

void CheckProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(name) + " must be in [0, 1], got " +
                      std::to_string(p));
  }
}

bool EndsWithTerminator(const std::string& s) {
  return !s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?');
}

}  // namespace

void ChannelSpec::Validate() const {
  CheckProbability(bit_flip_p, "bit_flip_p");
  CheckProbability(merge_p, "merge_p");
  CheckProbability(split_p, "split_p");
}

nlohmann::json ChannelSpec::ToJson() const {
  return {{"bit_flip_p", bit_flip_p},
          {"merge_p", merge_p},
          {"split_p", split_p},
          {"attack_seed", attack_seed}};
}

ChannelSpec ChannelSpec::FromJson(const nlohmann::json& j) {
  ChannelSpec spec;
  spec.bit_flip_p = j.value("bit_flip_p", 0.0);
  spec.merge_p = j.value("merge_p", 0.0);
  spec.split_p = j.value("split_p", 0.0);
  spec.attack_seed = j.value("attack_seed", uint64_t{0});
  spec.Validate();
  return spec;
}

SentenceText ApplyChannel(const ChannelSpec& spec, const SentenceText& text) {
  spec.Validate();
  if (text.empty()) throw DomainError("channel input has no sentences");
  Rng rng(derive_key(spec.attack_seed, {kChannelTag, fnv1a64(text.Join())}));

  std::vector<std::string> merged;
  merged.push_back(text[0]);
  for (size_t i = 1; i < text.size(); ++i) {
    if (rng.bernoulli(spec.merge_p)) {
      merged.back() = MergeSentences(merged.back(), text[i]);
    } else {
      merged.push_back(text[i]);
    }
  }

  std::vector<std::string> out;
  out.reserve(merged.size());
  for (auto& s : merged) {
    if (!rng.bernoulli(spec.split_p)) {
      out.push_back(std::move(s));
      continue;
    }
    std::pair<std::string, std::string> halves;
    try {
      halves = SplitSentence(s);
    } catch (const SplitError&) {
      out.push_back(std::move(s));
      continue;
    }
    auto& [left, right] = halves;
    if (!EndsWithTerminator(left)) left += '.';
    right[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(right[0])));
    out.push_back(std::move(left));
    out.push_back(std::move(right));
  }
  return SentenceText(std::move(out));
}

BitSequence ApplyBitChannel(const BitSequence& bits, double p, uint64_t seed) {
  CheckProbability(p, "bit flip probability");
  Rng rng(derive_key(seed, {kFlipTag}));
  std::vector<uint8_t> out(bits.bits());
  for (auto& b : out) {
    if (rng.bernoulli(p)) b ^= 1;
  }
  return BitSequence(std::move(out));
}

BitFlipEmbedder::BitFlipEmbedder(std::shared_ptr<const EmbedderBackend> inner,
                                 const SecretMaterial& material, double flip_p,
                                 uint64_t attack_seed)
    : inner_(std::move(inner)),
      material_(material),
      flip_p_(flip_p),
      key_(derive_key(attack_seed, {kFlipTag})) {
  CheckProbability(flip_p, "bit_flip_p");
  if (inner_->embed_dim() != material.embed_dim()) {
    throw DimensionError("bit-flip channel: backend and key dimensions differ");
  }
}

std::vector<bool> BitFlipEmbedder::FlipMask(std::string_view text) const {
  const uint64_t k = prf64(key_, fnv1a64(NormalizeForEmbedding(text)));
  std::vector<bool> mask(static_cast<size_t>(material_.block_size()));
  for (size_t m = 0; m < mask.size(); ++m) {
    const double u = static_cast<double>(prf64(k, m) >> 11) * 0x1.0p-53;
    mask[m] = u < flip_p_;
  }
  return mask;
}

std::vector<Embedding> BitFlipEmbedder::Embed(
    std::span<const std::string> texts) const {
  std::vector<Embedding> out = inner_->Embed(texts);
  for (size_t t = 0; t < out.size() && t < texts.size(); ++t) {
    const auto mask = FlipMask(texts[t]);
    Embedding& e = out[t];
    if (e.size() != static_cast<size_t>(material_.embed_dim())) continue;
    for (size_t m = 0; m < mask.size(); ++m) {
      if (!mask[m]) continue;
      const auto v = material_.vector(static_cast<int>(m));
      double p = 0.0;
      for (size_t d = 0; d < e.size(); ++d) p += e[d] * v[d];
      for (size_t d = 0; d < e.size(); ++d) e[d] -= 2.0 * p * v[d];
    }
  }
  return out;
}

ProbeKind ParseProbeKind(std::string_view s) {
  if (s == "insert") return ProbeKind::kInsert;
  if (s == "delete") return ProbeKind::kDelete;
  if (s == "reorder") return ProbeKind::kReorder;
  throw ConfigError("unknown probe kind \"" + std::string(s) + "\"");
}

std::string_view ProbeKindName(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::kInsert:
      return "insert";
    case ProbeKind::kDelete:
      return "delete";
    case ProbeKind::kReorder:
      return "reorder";
  }
  return "?";
}

void ProbeSpec::Validate() const {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw ConfigError("probe rate must be in (0, 1], got " +
                      std::to_string(rate));
  }
  if (kind == ProbeKind::kInsert && distractor_pool.empty()) {
    throw ConfigError("insert probe needs a non-empty distractor pool");
  }
}

SentenceText ApplyProbe(const ProbeSpec& spec, const SentenceText& text) {
  spec.Validate();
  const size_t n = text.size();
  if (n == 0) throw DomainError("probe input has no sentences");
  if (spec.kind != ProbeKind::kInsert && n < 2) {
    throw DomainError(std::string(ProbeKindName(spec.kind)) +
                      " probe needs at least 2 sentences");
  }
  Rng rng(derive_key(spec.probe_seed,
                     {kProbeTag, static_cast<uint64_t>(spec.kind),
                      fnv1a64(text.Join())}));
  std::vector<std::string> s = text.sentences();
  const size_t k = CeilScaled(spec.rate, n);

  switch (spec.kind) {
    case ProbeKind::kInsert: {
      for (size_t i = 0; i < k; ++i) {
        const auto& pick = spec.distractor_pool[rng.below(spec.distractor_pool.size())];
        const auto pos = static_cast<std::ptrdiff_t>(rng.below(s.size() + 1));
        s.insert(s.begin() + pos, pick);
      }
      break;
    }
    case ProbeKind::kDelete: {
      const size_t count = std::min(k, n - 1);
      std::vector<size_t> idx(n);
      std::iota(idx.begin(), idx.end(), size_t{0});
      rng.shuffle(std::span<size_t>(idx));
      std::vector<bool> drop(n, false);
      for (size_t i = 0; i < count; ++i) drop[idx[i]] = true;
      std::vector<std::string> kept;
      for (size_t i = 0; i < n; ++i) {
        if (!drop[i]) kept.push_back(std::move(s[i]));
      }
      s = std::move(kept);
      break;
    }
    case ProbeKind::kReorder: {
      const size_t count = std::clamp<size_t>(k, 2, n);
      std::vector<size_t> idx(n);
      std::iota(idx.begin(), idx.end(), size_t{0});
      rng.shuffle(std::span<size_t>(idx));
      const std::vector<std::string> before = s;
      for (size_t i = 0; i < count; ++i) {
        s[idx[i]] = before[idx[(i + 1) % count]];
      }
      break;
    }
  }
  return SentenceText(std::move(s));
}

}  // namespace blockmark
