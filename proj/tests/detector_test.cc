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
#include <cmath>

#include <gtest/gtest.h>

#include "blockmark/block_edit.h"
#include "blockmark/errors.h"
#include "blockmark/generator.h"
#include "blockmark/random.h"

namespace blockmark {
namespace {

class NoisyEmbedder final : public EmbedderBackend {
 public:
  std::string name() const override { return "noisy"; }
  int embed_dim() const override { return 64; }
  bool deterministic() const override { return false; }
  std::vector<Embedding> Embed(std::span<const std::string> texts) const override {
    return ToyEmbedder(0, 64).Embed(texts);
  }
};

class DetectorTest : public ::testing::Test {
 protected:
  SentenceText RandomText(Rng& rng, int n) {
    std::vector<std::string> s;
    for (int i = 0; i < n; ++i) s.push_back(SyntheticSource::RandomSentence(rng, 6, 5));
    return SentenceText(std::move(s));
  }

  SecretMaterial material_ = SecretMaterial::Derive(21, 64, 8);
  ToyEmbedder toy_{0, 64};
  CalibrationTable table_{0, 400};
};

TEST(SecretCandidatesTest, Lengths) {
  EXPECT_EQ(SecretCandidateLengths({0.5, 1.5}, 4), (std::vector<size_t>{2, 3, 4, 5, 6}));
  EXPECT_EQ(SecretCandidateLengths({1.0, 1.0}, 7), (std::vector<size_t>{7}));
  EXPECT_EQ(SecretCandidateLengths({0.5, 1.5}, 1), (std::vector<size_t>{1, 2}));
  EXPECT_EQ(SecretCandidateLengths({0.5, 1.5}, 12).front(), 6u);
  EXPECT_EQ(SecretCandidateLengths({0.5, 1.5}, 12).back(), 18u);
  EXPECT_EQ(SecretCandidateLengths({0.1, 1.0}, 3), (std::vector<size_t>{1, 2, 3}));
}

TEST(SecretCandidatesTest, AreKeyPrefixes) {
  const auto m = SecretMaterial::Derive(3, 16, 4);
  const auto c = SecretCandidates(m, {0.5, 1.5}, 4);
  ASSERT_EQ(c.size(), 5u);
  for (size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], m.SecretPrefix(i + 2));
}

TEST(SecretCandidatesTest, Validation) {
  EXPECT_THROW(AlignmentParams({0.0, 1.5}).Validate(), ConfigError);
  EXPECT_THROW(AlignmentParams({1.2, 1.5}).Validate(), ConfigError);
  EXPECT_THROW(AlignmentParams({0.5, 0.9}).Validate(), ConfigError);
  EXPECT_NO_THROW(AlignmentParams({1.0, 1.0}).Validate());
}

TEST_F(DetectorTest, OptimizedEqualsNaive) {
  Rng rng(33);
  for (RsMode mode : {RsMode::kOff, RsMode::kSingle, RsMode::kMulti}) {
    DetectOptions opts;
    opts.rs_mode = mode;
    for (int trial = 0; trial < 8; ++trial) {
      const auto text = RandomText(rng, 1 + static_cast<int>(rng.below(9)));
      const auto fast = DetectSentences(material_, toy_, table_, opts, text);
      const auto slow = DetectSentencesNaive(material_, toy_, table_, opts, text);
      ASSERT_EQ(fast.attempts.size(), slow.attempts.size());
      for (size_t i = 0; i < fast.attempts.size(); ++i) {
        EXPECT_EQ(fast.attempts[i].candidate_id, slow.attempts[i].candidate_id);
        EXPECT_EQ(fast.attempts[i].secret_blocks, slow.attempts[i].secret_blocks);
        EXPECT_NEAR(fast.attempts[i].z, slow.attempts[i].z, 1e-12);
      }
      EXPECT_NEAR(fast.score, slow.score, 1e-12);
      EXPECT_EQ(fast.best_candidate, slow.best_candidate);
    }
  }
}

TEST_F(DetectorTest, AttemptsCoverEveryCandidateAndLength) {
  Rng rng(1);
  const auto text = RandomText(rng, 5);
  const auto r = DetectSentences(material_, toy_, table_, {}, text);
  EXPECT_EQ(r.candidate_labels.size(), 10u);
  size_t expected = 0;
  const auto set = EnumerateCandidates(text);
  for (const auto& c : set.candidates) {
    expected += SecretCandidateLengths({}, c.text.size()).size();
  }
  EXPECT_EQ(r.attempts.size(), expected);
  double best = -1e300;
  for (const auto& a : r.attempts) best = std::max(best, a.z);
  EXPECT_EQ(r.score, best);
  EXPECT_EQ(r.num_sentences, 5u);
}

TEST_F(DetectorTest, AttemptMatchesDirectComputation) {
  Rng rng(2);
  const auto text = RandomText(rng, 6);
  const auto r = DetectSentences(material_, toy_, table_, {}, text);
  const auto set = EnumerateCandidates(text);
  for (const auto& a : r.attempts) {
    const auto& y = set.candidates[a.candidate_id].text;
    const auto bits = ExtractTextBits(material_, toy_, y.sentences());
    const double ber = BlockEditRate(bits, material_.SecretPrefix(a.secret_blocks), 8);
    EXPECT_EQ(a.ber, ber);
    EXPECT_EQ(a.z, ZScore(table_, 8, static_cast<int>(y.size()), ber));
  }
}

TEST_F(DetectorTest, SingleSentence) {
  const auto r = Detect(material_, toy_, table_, {}, "Just one sentence here.");
  EXPECT_LE(r.candidate_labels.size(), 2u);
  EXPECT_TRUE(std::isfinite(r.score));
  const auto one_word = Detect(material_, toy_, table_, {}, "Word.");
  EXPECT_EQ(one_word.candidate_labels.size(), 1u);
}

TEST_F(DetectorTest, WatermarkBeatsNullThreshold) {
  Rng rng(55);
  std::vector<double> null_scores;
  for (int i = 0; i < 2000; ++i) {
    null_scores.push_back(DetectSentences(material_, toy_, table_, {}, RandomText(rng, 12)).score);
  }
  std::sort(null_scores.begin(), null_scores.end());
  const double threshold = null_scores[1900];
  ASSERT_TRUE(std::isfinite(threshold));

  const SyntheticSource source(4);
  GenerationConfig cfg;
  for (uint64_t s = 0; s < 5; ++s) {
    cfg.selection_seed = s;
    const auto rec = GenerateWatermarked(material_, toy_, source, cfg,
                                         "Prompt number " + std::to_string(s) + ".");
    EXPECT_GT(Detect(material_, toy_, table_, {}, rec.Text()).score, threshold);
  }
}

TEST_F(DetectorTest, Errors) {
  EXPECT_THROW(Detect(material_, toy_, table_, {}, "   "), SegmentationError);
  EXPECT_THROW(Detect(material_, NoisyEmbedder(), table_, {}, "A b."), ConfigError);
  EXPECT_THROW(Detect(material_, ToyEmbedder(0, 32), table_, {}, "A b."), ExtractionError);
  CalibrationTable frozen(0, 100);
  frozen.set_extend_on_demand(false);
  EXPECT_THROW(Detect(material_, toy_, frozen, {}, "A b."), MissingCalibrationError);
}

TEST_F(DetectorTest, ReportJson) {
  const auto r = Detect(material_, toy_, table_, {}, "One two. Three four.");
  const auto j = r.ToJson();
  EXPECT_EQ(j.at("score"), r.score);
  EXPECT_EQ(j.at("num_sentences"), 2);
  EXPECT_EQ(j.at("candidates").size(), r.candidate_labels.size());
  EXPECT_EQ(j.at("attempts").size(), r.attempts.size());
  EXPECT_EQ(j.at("best_candidate"), r.best_candidate);
}

}  // namespace
}  // namespace blockmark
