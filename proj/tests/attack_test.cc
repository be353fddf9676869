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
#include <map>

#include <gtest/gtest.h>

#include "blockmark/errors.h"
#include "blockmark/generator.h"
#include "blockmark/random.h"

namespace blockmark {
namespace {

SentenceText RandomText(Rng& rng, int n) {
  std::vector<std::string> s;
  for (int i = 0; i < n; ++i) s.push_back(SyntheticSource::RandomSentence(rng, 6, 5));
  return SentenceText(std::move(s));
}

std::vector<std::string> Sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(ChannelTest, IdentityWhenAllZero) {
  Rng rng(1);
  const auto t = RandomText(rng, 12);
  EXPECT_EQ(ApplyChannel({}, t), t);
}

TEST(ChannelTest, ForcedMerges) {
  Rng rng(2);
  const auto t = RandomText(rng, 5);
  ChannelSpec spec;
  spec.merge_p = 1.0;
  const auto out = ApplyChannel(spec, t);
  EXPECT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(DeltaRatio(t, out).value(), 0.2);
}

TEST(ChannelTest, ForcedSplitsSurviveSegmentation) {
  Rng rng(3);
  const auto t = RandomText(rng, 4);
  ChannelSpec spec;
  spec.split_p = 1.0;
  const auto out = ApplyChannel(spec, t);
  EXPECT_EQ(out.size(), 8u);
  EXPECT_EQ(Segment(out.Join()), out);
}

TEST(ChannelTest, SplitIsUndoneByMerge) {
  Rng rng(4);
  const auto t = RandomText(rng, 3);
  ChannelSpec spec;
  spec.split_p = 1.0;
  const auto out = ApplyChannel(spec, t);
  const ToyEmbedder toy(0, 32);
  const auto back = MergeAt(out, 0);
  EXPECT_EQ(toy.EmbedOne(back[0]), toy.EmbedOne(t[0]));
}

TEST(ChannelTest, DeterministicAndSeedSensitive) {
  Rng rng(5);
  const auto t = RandomText(rng, 12);
  ChannelSpec spec{0.0, 0.3, 0.3, 8};
  EXPECT_EQ(ApplyChannel(spec, t), ApplyChannel(spec, t));
  bool differs = false;
  for (uint64_t s = 9; s < 20 && !differs; ++s) {
    spec.attack_seed = s;
    differs = ApplyChannel(spec, t) != ApplyChannel({0.0, 0.3, 0.3, 8}, t);
  }
  EXPECT_TRUE(differs);
}

TEST(ChannelTest, DeltaHistogramHasMassOnBothSides) {
  Rng rng(6);
  ChannelSpec spec{0.0, 0.2, 0.2, 1};
  std::map<double, int> hist;
  for (int i = 0; i < 500; ++i) {
    const auto t = RandomText(rng, 12);
    ++hist[DeltaRatio(t, ApplyChannel(spec, t)).value()];
  }
  int below = 0, above = 0;
  for (const auto& [d, n] : hist) {
    if (d < 1.0) below += n;
    if (d > 1.0) above += n;
  }
  EXPECT_GT(below, 50);
  EXPECT_GT(above, 50);
}

TEST(ChannelTest, Validation) {
  EXPECT_THROW(ApplyChannel({1.5, 0, 0, 0}, SentenceText({"A."})), ConfigError);
  EXPECT_THROW(ApplyChannel({0, -0.1, 0, 0}, SentenceText({"A."})), ConfigError);
  const ChannelSpec spec{0.1, 0.2, 0.3, 4};
  const auto back = ChannelSpec::FromJson(spec.ToJson());
  EXPECT_EQ(back.bit_flip_p, 0.1);
  EXPECT_EQ(back.merge_p, 0.2);
  EXPECT_EQ(back.split_p, 0.3);
  EXPECT_EQ(back.attack_seed, 4u);
}

TEST(BitChannelTest, FlipFrequency) {
  Rng rng(7);
  std::vector<uint8_t> v(100000);
  for (auto& b : v) b = rng() & 1;
  const BitSequence bits(v);
  for (double p : {0.0, 0.05, 0.1, 0.3}) {
    const auto out = ApplyBitChannel(bits, p, 11);
    EXPECT_NEAR(hamming(bits, out) / 1e5, p, 0.01);
  }
}

TEST(BitChannelTest, EmbedderFlipsExactlyTheMaskedBits) {
  const auto m = SecretMaterial::Derive(2, 64, 8);
  auto toy = std::make_shared<ToyEmbedder>(0, 64);
  const BitFlipEmbedder flip(toy, m, 0.1, 5);
  Rng rng(8);
  long flipped = 0, total = 0;
  for (int i = 0; i < 12500; ++i) {
    const std::string s = SyntheticSource::RandomSentence(rng, 4, 4);
    const auto clean = ExtractBits(m, toy->EmbedOne(s));
    const auto noisy = ExtractBits(m, EmbedBatch(flip, std::vector<std::string>{s})[0]);
    const auto mask = flip.FlipMask(s);
    for (int k = 0; k < 8; ++k) {
      EXPECT_EQ(noisy[k] != clean[k], mask[k]);
      flipped += mask[k];
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(flipped) / total, 0.1, 0.01);
  EXPECT_THROW(BitFlipEmbedder(std::make_shared<ToyEmbedder>(0, 32), m, 0.1, 5),
               DimensionError);
}

TEST(ProbeTest, DeleteCount) {
  Rng rng(9);
  const auto t = RandomText(rng, 12);
  ProbeSpec spec{ProbeKind::kDelete, 0.5, 3, {}};
  const auto out = ApplyProbe(spec, t);
  EXPECT_EQ(out.size(), 6u);
  for (const auto& s : out) {
    EXPECT_NE(std::find(t.begin(), t.end(), s), t.end());
  }
  // Retained sentences keep their order.
  size_t j = 0;
  for (const auto& s : t) {
    if (j < out.size() && out[j] == s) ++j;
  }
  EXPECT_EQ(j, out.size());
  spec.rate = 1.0;
  EXPECT_EQ(ApplyProbe(spec, t).size(), 1u);
}

TEST(ProbeTest, InsertCount) {
  Rng rng(10);
  const auto t = RandomText(rng, 12);
  ProbeSpec spec{ProbeKind::kInsert, 0.1, 3, {"Distractor one.", "Distractor two."}};
  const auto out = ApplyProbe(spec, t);
  EXPECT_EQ(out.size(), 14u);
  std::vector<std::string> kept;
  for (const auto& s : out) {
    if (s.rfind("Distractor", 0) != 0) kept.push_back(s);
  }
  EXPECT_EQ(kept, t.sentences());
}

TEST(ProbeTest, ReorderPreservesMultiset) {
  Rng rng(11);
  const auto t = RandomText(rng, 12);
  const ProbeSpec spec{ProbeKind::kReorder, 0.2, 3, {}};
  const auto out = ApplyProbe(spec, t);
  EXPECT_EQ(Sorted(out.sentences()), Sorted(t.sentences()));
  int moved = 0;
  for (size_t i = 0; i < t.size(); ++i) moved += out[i] != t[i];
  EXPECT_EQ(moved, 3);
  EXPECT_EQ(ApplyProbe(spec, t), out);
}

TEST(ProbeTest, Preconditions) {
  const SentenceText one({"Only sentence."});
  EXPECT_THROW(ApplyProbe({ProbeKind::kDelete, 0.2, 0, {}}, one), DomainError);
  EXPECT_THROW(ApplyProbe({ProbeKind::kReorder, 0.2, 0, {}}, one), DomainError);
  EXPECT_THROW(ApplyProbe({ProbeKind::kInsert, 0.2, 0, {}}, one), ConfigError);
  EXPECT_THROW(ApplyProbe({ProbeKind::kDelete, 0.0, 0, {}}, one), ConfigError);
  EXPECT_EQ(ApplyProbe({ProbeKind::kInsert, 0.2, 0, {"X."}}, one).size(), 2u);
  EXPECT_TRUE(ProbeSpec({ProbeKind::kDelete, 0.3, 0, {}}).InStudiedBand());
  EXPECT_FALSE(ProbeSpec({ProbeKind::kDelete, 0.6, 0, {}}).InStudiedBand());
  EXPECT_EQ(ParseProbeKind("reorder"), ProbeKind::kReorder);
  EXPECT_THROW(ParseProbeKind("shuffle"), ConfigError);
}

}  // namespace
}  // namespace blockmark
