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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "blockmark/block_edit.h"
#include "blockmark/calibration.h"
#include "blockmark/detector.h"
#include "blockmark/experiment.h"
#include "blockmark/generator.h"
#include "blockmark/random.h"
#include "blockmark/restructurer.h"
#include "oracles.h"

namespace blockmark {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr uint64_t kKeySeed = 2026;
constexpr uint64_t kCalibSeed = 17;
constexpr int kM = 8;
constexpr int kDim = 768;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const char* name, const Outcome& o) {
  std::printf("criterion %2d %-34s %s  %s\n", id, name, o.pass ? "PASS" : "FAIL",
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void Run(int id, const char* name, const std::function<Outcome()>& fn) {
  try {
    Report(id, name, fn());
  } catch (const std::exception& e) {
    Report(id, name, {false, std::string("threw: ") + e.what()});
  }
}

std::vector<int> Unpack(uint32_t word, int bits) {
  std::vector<int> v(bits);
  for (int i = 0; i < bits; ++i) v[i] = (word >> i) & 1;
  return v;
}

BitSequence ToBits(const std::vector<int>& v) {
  return BitSequence(std::vector<uint8_t>(v.begin(), v.end()));
}

SentenceText RandomText(Rng& rng, int n) {
  std::vector<std::string> s;
  for (int i = 0; i < n; ++i) s.push_back(SyntheticSource::RandomSentence(rng, 6, 5));
  return SentenceText(std::move(s));
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double StdDev(const std::vector<double>& v) {
  const double m = Mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Outcome BerOracle() {
  const auto start = Clock::now();
  size_t pairs = 0, mismatches = 0;
  // Every pair of sequences with at most 4 two-bit blocks.
  std::vector<std::vector<int>> all;
  for (int blocks = 0; blocks <= 4; ++blocks) {
    for (uint32_t w = 0; w < (1u << (2 * blocks)); ++w) all.push_back(Unpack(w, 2 * blocks));
  }
  for (const auto& a : all) {
    const auto ba = ToBits(a);
    for (const auto& b : all) {
      if (a.empty() && b.empty()) continue;
      ++pairs;
      if (BlockEditRate(ba, ToBits(b), 2) != oracle::BruteBlockEditRate(a, b, 2)) {
        ++mismatches;
      }
    }
  }
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    const int m = (i % 2) ? 4 : 2;
    const size_t n1 = rng.below(7);
    const size_t n2 = n1 == 0 ? 1 + rng.below(6) : rng.below(7);
    std::vector<int> a(n1 * m), b(n2 * m);
    for (int& x : a) x = static_cast<int>(rng() & 1);
    for (int& x : b) x = static_cast<int>(rng() & 1);
    ++pairs;
    if (BlockEditRate(ToBits(a), ToBits(b), m) != oracle::BruteBlockEditRate(a, b, m)) {
      ++mismatches;
    }
  }
  const double t = Seconds(start);
  return {mismatches == 0 && t < 60.0,
          Fmt("%zu pairs, %zu mismatches, %.1f s (limit 60 s)", pairs, mismatches, t)};
}

Outcome OptimizationEquivalence(const SecretMaterial& key, const EmbedderBackend& toy,
                                const CalibrationTable& table) {
  Rng rng(202);
  double worst = 0.0;
  bool shape_ok = true;
  for (int i = 0; i < 50; ++i) {
    const auto text = RandomText(rng, 12);
    const auto fast = DetectSentences(key, toy, table, {}, text);
    const auto slow = DetectSentencesNaive(key, toy, table, {}, text);
    if (fast.attempts.size() != slow.attempts.size()) {
      shape_ok = false;
      continue;
    }
    for (size_t k = 0; k < fast.attempts.size(); ++k) {
      worst = std::max(worst, std::abs(fast.attempts[k].z - slow.attempts[k].z));
    }
    worst = std::max(worst, std::abs(fast.score - slow.score));
  }
  return {shape_ok && worst <= 1e-12,
          Fmt("50 texts, max |z_fast - z_naive| = %.3g (limit 1e-12)", worst)};
}

Outcome CandidateCounting() {
  size_t bad_single = 0, bad_multi = 0, checked_multi = 0;
  for (int n = 1; n <= 64; ++n) {
    std::vector<std::string> s;
    size_t unsplittable = 0;
    for (int i = 0; i < n; ++i) {
      if (i % 5 == 3) {
        s.push_back("Word" + std::to_string(i) + ".");
        ++unsplittable;
      } else {
        s.push_back("Sentence " + std::to_string(i) + " goes here.");
      }
    }
    const auto set = EnumerateCandidates(SentenceText(s));
    if (set.size() != 2u * n - unsplittable) ++bad_single;
  }
  for (int n = 1; n <= 8; ++n) {
    std::vector<std::string> s;
    for (int i = 0; i < n; ++i) s.push_back("Sentence " + std::to_string(i) + " goes here.");
    for (int a = 0; a <= 2 && a < n; ++a) {
      for (int b = 0; b <= 2 && b < n; ++b) {
        ++checked_multi;
        const auto set = EnumerateCandidates(SentenceText(s), RsMode::kMulti, a, b);
        const BigInt formula = CountConfigurations(n, a, b);
        if (BigInt(set.size()) != formula ||
            formula != BigInt(oracle::BruteCountConfigurations(n, a, b))) {
          ++bad_multi;
        }
      }
    }
  }
  return {bad_single == 0 && bad_multi == 0,
          Fmt("single-step N=1..64: %zu wrong; multi-step %zu cases: %zu wrong",
              bad_single, checked_multi, bad_multi)};
}

Outcome CalibrationSanity(CalibrationTable& grid_out) {
  // Exhaustive M=2, N'=1: BER = h/2 with h ~ Binomial(2, 1/2).
  double mu = 0.0, mu2 = 0.0;
  for (uint32_t x = 0; x < 4; ++x) {
    for (uint32_t y = 0; y < 4; ++y) {
      const double r = oracle::BruteBlockEditRate(Unpack(x, 2), Unpack(y, 2), 2);
      mu += r / 16;
      mu2 += r * r / 16;
    }
  }
  const double sd = std::sqrt(mu2 - mu * mu);
  const int samples = 1000;
  const auto mc = EstimateCell(2, 1, samples, kCalibSeed);
  const double se = sd / std::sqrt(samples);
  const bool exhaustive_ok = std::abs(mc.mu - mu) <= 3 * se;

  std::vector<int> ns(200);
  std::iota(ns.begin(), ns.end(), 1);
  const std::vector<int> ms = {kM};
  const auto start = Clock::now();
  grid_out = Calibrate(ms, ns, samples, kCalibSeed);
  const double t = Seconds(start);
  const auto again = Calibrate(ms, ns, samples, kCalibSeed);
  const bool reproducible = again == grid_out && grid_out.ToJson().dump() == again.ToJson().dump();
  const double s5 = grid_out.Find(kM, 5)->sigma;
  const double s100 = grid_out.Find(kM, 100)->sigma;
  return {exhaustive_ok && s100 < s5 && reproducible && t < 300.0,
          Fmt("exact mu=%.4f, MC mu=%.4f (|diff| %.4f <= 3SE %.4f); sigma(100)=%.4f < "
              "sigma(5)=%.4f; reproducible=%s; M=8 grid %.1f s (limit 300 s)",
              mu, mc.mu, std::abs(mc.mu - mu), 3 * se, s100, s5,
              reproducible ? "yes" : "no", t)};
}

Outcome NullControl(const SecretMaterial& key, const EmbedderBackend& toy,
                    const CalibrationTable& table, double& threshold) {
  const auto humans = MakeHumanCorpus(1000, 12, 909);
  const auto secret = key.SecretPrefix(12);
  std::vector<double> z, scores;
  for (const auto& r : humans) {
    const auto text = Segment(r.text);
    const auto bits = ExtractTextBits(key, toy, text.sentences());
    z.push_back(ZScore(table, kM, static_cast<int>(text.size()),
                       BlockEditRate(bits, secret, kM)));
    scores.push_back(DetectSentences(key, toy, table, {}, text).score);
  }
  threshold = ThresholdAtFpr(scores, 0.05);
  const double m = Mean(z), s = StdDev(z);
  return {m >= -0.1 && m <= 0.1 && s >= 0.9 && s <= 1.1 && std::isfinite(threshold),
          Fmt("matched-length z mean %.3f in [-0.1, 0.1], std %.3f in [0.9, 1.1]; "
              "max-score 5%% threshold %.3f",
              m, s, threshold)};
}

struct Paths {
  fs::path root;
  std::string table;
  std::string watermarked;
};

ExperimentConfig BaseConfig(const Paths& p) {
  ExperimentConfig c;
  c.key_seed = kKeySeed;
  c.embed_dim = kDim;
  c.block_size = kM;
  c.embedder = {{"kind", "toy"}, {"toy_seed", 5}, {"embed_dim", kDim}};
  c.source = {{"kind", "synthetic"}, {"seed", 6}};
  c.generation.candidates = 64;
  c.generation.num_sentences = 12;
  c.generation.selection_seed = 7;
  c.n_pos = 200;
  c.n_neg = 200;
  c.human_seed = 8;
  c.table_path = p.table;
  c.calib_seed = kCalibSeed;
  c.watermarked_in = p.watermarked;
  return c;
}

ExperimentConfig Variant(ExperimentConfig c, const char* which) {
  if (std::string(which) == "no restructuring") c.detect.rs_mode = RsMode::kOff;
  if (std::string(which) == "fixed length") c.detect.params = {1.0, 1.0};
  return c;
}

Outcome CleanDetection(const Paths& p) {
  auto c = BaseConfig(p);
  c.watermarked_in.clear();
  c.out_dir = (p.root / "clean").string();
  const auto start = Clock::now();
  const auto r = RunExperiment(c);
  const double t = Seconds(start);
  fs::copy_file(p.root / "clean" / "watermarked.jsonl", p.watermarked,
                fs::copy_options::overwrite_existing);
  const double tpr = r.metrics.tpr_at.at(0.05);
  return {r.metrics.auroc >= 0.99 && tpr >= 0.95 && t < 600.0,
          Fmt("AUROC %.4f (>= 0.99), TPR@5%% %.3f (>= 0.95), %.1f s (limit 600 s)",
              r.metrics.auroc, tpr, t)};
}

Outcome AblationUnderChannel(const Paths& p) {
  auto c = BaseConfig(p);
  c.attack = AttackSpec::FromJson(
      {{"kind", "channel"}, {"merge_p", 0.2}, {"split_p", 0.2}, {"flip_p", 0.1}, {"seed", 31}});
  const double full = RunExperiment(c).metrics.tpr_at.at(0.05);
  const double no_rs = RunExperiment(Variant(c, "no restructuring")).metrics.tpr_at.at(0.05);
  const double no_ada = RunExperiment(Variant(c, "fixed length")).metrics.tpr_at.at(0.05);
  return {full - no_rs >= 0.05 && full - no_ada >= 0.05,
          Fmt("TPR@5%%: full %.3f, no restructuring %.3f (margin %+.1f pts), fixed length %.3f "
              "(margin %+.1f pts); need >= 5 pts",
              full, no_rs, 100 * (full - no_rs), no_ada, 100 * (full - no_ada))};
}

Outcome ProbingRobustness(const Paths& p) {
  auto c = BaseConfig(p);
  c.attack = AttackSpec::FromJson({{"kind", "delete"}, {"rate", 0.2}, {"seed", 41}});
  const double full = RunExperiment(c).metrics.tpr_at.at(0.05);
  const double no_ada = RunExperiment(Variant(c, "fixed length")).metrics.tpr_at.at(0.05);
  c.attack = AttackSpec::FromJson({{"kind", "insert"}, {"rate", 0.2}, {"seed", 42}});
  const double insert_auc = RunExperiment(c).metrics.auroc;
  c.attack = AttackSpec::FromJson({{"kind", "reorder"}, {"rate", 0.2}, {"seed", 43}});
  const double reorder_auc = RunExperiment(c).metrics.auroc;
  return {full - no_ada >= 0.10 && insert_auc >= 0.85 && reorder_auc >= 0.85,
          Fmt("delete 0.2 TPR@5%%: full %.3f vs fixed length %.3f (margin %+.1f pts, need "
              ">= 10); AUROC insert %.4f, reorder %.4f (>= 0.85)",
              full, no_ada, 100 * (full - no_ada), insert_auc, reorder_auc)};
}

Outcome GenerationStatistics(const Paths& p) {
  const auto records = ReadCorpus(p.watermarked);
  std::vector<int> counts;
  for (const auto& r : records) {
    for (int m : r.meta.at("match_counts").get<std::vector<int>>()) {
      if (counts.size() < 2000) counts.push_back(m);
    }
  }
  const double full = static_cast<double>(std::count(counts.begin(), counts.end(), kM)) /
                      static_cast<double>(counts.size());
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) /
                      static_cast<double>(counts.size());
  const double p_full = oracle::FullMatchProbability(kM, 64);
  const double e_max = oracle::ExpectedMaxBinomial(kM, 64);
  return {counts.size() == 2000 && std::abs(full - p_full) <= 0.03 && mean >= 6.8 &&
              mean <= 7.3,
          Fmt("%zu sentences: full-match %.4f vs exact %.4f (+-0.03); mean match %.3f "
              "in [6.8, 7.3] (exact expectation %.4f)",
              counts.size(), full, p_full, mean, e_max)};
}

Outcome RuntimeScaling(const SecretMaterial& key, const EmbedderBackend& toy,
                       const CalibrationTable& table) {
  Rng rng(505);
  auto time_detect = [&](const SentenceText& text, RsMode mode) {
    DetectOptions opts;
    opts.rs_mode = mode;
    std::vector<double> t;
    for (int rep = 0; rep < 5; ++rep) {
      const auto start = Clock::now();
      DetectSentences(key, toy, table, opts, text);
      t.push_back(Seconds(start));
    }
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
  };
  std::vector<double> times;
  std::string series;
  SentenceText longest({"x"});
  for (int n = 4; n <= 128; n *= 2) {
    const auto text = RandomText(rng, n);
    times.push_back(time_detect(text, RsMode::kSingle));
    series += Fmt("%s%d:%.4f", series.empty() ? "" : " ", n, times.back());
    longest = text;
  }
  bool monotone = true;
  for (size_t i = 1; i < times.size(); ++i) monotone = monotone && times[i] >= times[i - 1];
  const double off = time_detect(longest, RsMode::kOff);
  const double speedup = times.back() / off;
  return {monotone && times.back() < 2.0 && speedup >= 2.0,
          Fmt("median s by N [%s]; monotone=%s; N=128 %.3f s (< 2 s); RS off %.4f s "
              "(%.0fx faster, need >= 2x)",
              series.c_str(), monotone ? "yes" : "no", times.back(), off, speedup)};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome Determinism(const Paths& p) {
  auto c = BaseConfig(p);
  c.watermarked_in.clear();
  c.n_pos = 60;
  c.n_neg = 60;
  c.attack = AttackSpec::FromJson(
      {{"kind", "channel"}, {"merge_p", 0.2}, {"split_p", 0.2}, {"flip_p", 0.1}, {"seed", 51}});
  c.out_dir = (p.root / "run1").string();
  RunExperiment(c);
  c.out_dir = (p.root / "run2").string();
  RunExperiment(c);
  size_t same = 0, total = 0, bytes = 0;
  for (const char* f : {"watermarked.jsonl", "attacked.jsonl", "human.jsonl",
                        "reports.jsonl", "metrics.json"}) {
    const auto a = Slurp(p.root / "run1" / f);
    ++total;
    bytes += a.size();
    if (!a.empty() && a == Slurp(p.root / "run2" / f)) ++same;
  }
  return {same == total,
          Fmt("%zu/%zu output files byte-identical (%zu bytes)", same, total, bytes)};
}

}  // namespace
}  // namespace blockmark

int main() {
  using namespace blockmark;
  const auto root = fs::temp_directory_path() / "blockmark_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  Paths paths{root, (root / "table.json").string(), (root / "watermarked.jsonl").string()};

  const auto key = SecretMaterial::Derive(kKeySeed, kDim, kM);
  const ToyEmbedder toy(5, kDim);
  CalibrationTable table(kCalibSeed, 1000);

  Run(1, "BER oracle equivalence", BerOracle);
  Run(4, "calibration sanity", [&] { return CalibrationSanity(table); });
  table.Save(paths.table);
  Run(2, "optimization equivalence", [&] { return OptimizationEquivalence(key, toy, table); });
  Run(3, "candidate counting", CandidateCounting);
  double null_threshold = 0.0;
  Run(5, "null control", [&] { return NullControl(key, toy, table, null_threshold); });
  Run(6, "clean detection", [&] { return CleanDetection(paths); });
  Run(7, "ablation under structural channel", [&] { return AblationUnderChannel(paths); });
  Run(8, "probing robustness", [&] { return ProbingRobustness(paths); });
  Run(9, "generation statistics", [&] { return GenerationStatistics(paths); });
  Run(10, "runtime scaling", [&] { return RuntimeScaling(key, toy, table); });
  Run(11, "end-to-end determinism", [&] { return Determinism(paths); });

  fs::remove_all(root);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
