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

#include "blockmark/experiment.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "blockmark/errors.h"
#include "blockmark/http_backends.h"
#include "blockmark/parallel.h"
#include "blockmark/random.h"
#include "blockmark/restructurer.h"

namespace blockmark {
namespace {

constexpr uint64_t kPromptTag = 0x70726d74;  // "prmt"
constexpr uint64_t kHumanTag = 0x68756d6e;   // "humn"
constexpr uint64_t kPoolTag = 0x706f6f6c;    // "pool"

std::string RecordId(const char* prefix, size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%05zu", prefix, i);
  return buf;
}

HttpOptions HttpOptionsFromJson(const nlohmann::json& cfg) {
  HttpOptions o;
  o.base_url = cfg.at("url").get<std::string>();
  o.timeout = std::chrono::milliseconds(cfg.value("timeout_ms", 30000));
  o.max_retries = cfg.value("max_retries", 3);
  o.max_in_flight = cfg.value("max_in_flight", 4);
  return o;
}

// Runs `fn`, prefixing any library error with the stage and record.
template <typename Fn>
auto InStage(const std::string& stage, const std::string& id, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw Error(stage + " failed on record " + id + ": " + e.what());
  }
}

}  // namespace

std::shared_ptr<const EmbedderBackend> MakeEmbedder(const nlohmann::json& cfg) {
  try {
    const std::string kind = cfg.value("kind", std::string("toy"));
    const int dim = cfg.value("embed_dim", 768);
    if (kind == "toy") {
      return std::make_shared<ToyEmbedder>(cfg.value("toy_seed", uint64_t{0}), dim);
    }
    if (kind == "http") {
      return std::make_shared<HttpEmbedder>(HttpOptionsFromJson(cfg), dim);
    }
    throw ConfigError("unknown embedder kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("embedder config: ") + e.what());
  }
}

std::shared_ptr<const CandidateSource> MakeSource(const nlohmann::json& cfg) {
  try {
    const std::string kind = cfg.value("kind", std::string("synthetic"));
    if (kind == "synthetic") {
      return std::make_shared<SyntheticSource>(cfg.value("seed", uint64_t{0}),
                                               cfg.value("words", 6),
                                               cfg.value("word_length", 5));
    }
    if (kind == "http") {
      SamplingParams params;
      if (cfg.contains("params")) {
        const auto& p = cfg.at("params");
        params.top_p = p.value("top_p", params.top_p);
        params.temperature = p.value("temperature", params.temperature);
        params.repetition_penalty =
            p.value("repetition_penalty", params.repetition_penalty);
      }
      return std::make_shared<HttpCandidateSource>(HttpOptionsFromJson(cfg), params);
    }
    throw ConfigError("unknown source kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("source config: ") + e.what());
  }
}

nlohmann::json AttackSpec::ToJson() const {
  switch (kind) {
    case Kind::kNone:
      return {{"kind", "none"}};
    case Kind::kChannel:
      return {{"kind", "channel"},
              {"merge_p", channel.merge_p},
              {"split_p", channel.split_p},
              {"flip_p", channel.bit_flip_p},
              {"seed", channel.attack_seed}};
    case Kind::kProbe:
      return {{"kind", ProbeKindName(probe.kind)},
              {"rate", probe.rate},
              {"seed", probe.probe_seed}};
  }
  return {};
}

AttackSpec AttackSpec::FromJson(const nlohmann::json& j) {
  try {
    AttackSpec a;
    const std::string kind = j.value("kind", std::string("none"));
    if (kind == "none") return a;
    if (kind == "channel") {
      a.kind = Kind::kChannel;
      a.channel.merge_p = j.value("merge_p", 0.0);
      a.channel.split_p = j.value("split_p", 0.0);
      a.channel.bit_flip_p = j.value("flip_p", 0.0);
      a.channel.attack_seed = j.value("seed", uint64_t{0});
      a.channel.Validate();
      return a;
    }
    a.kind = Kind::kProbe;
    a.probe.kind = ParseProbeKind(kind);
    a.probe.rate = j.value("rate", 0.1);
    a.probe.probe_seed = j.value("seed", uint64_t{0});
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("attack config: ") + e.what());
  }
}

std::vector<CorpusRecord> GenerateWatermarkedCorpus(
    const SecretMaterial& material, const EmbedderBackend& backend,
    const CandidateSource& source, const GenerationConfig& cfg, size_t count,
    int threads) {
  std::vector<CorpusRecord> out(count);
  ParallelFor(count, threads, [&](size_t i) {
    CorpusRecord& r = out[i];
    r.id = RecordId("wm", i);
    r.label = Label::kWatermarked;
    Rng prompt_rng(derive_key(cfg.selection_seed, {kPromptTag, i}));
    r.prompt = SyntheticSource::RandomSentence(prompt_rng, 6, 5);
    GenerationConfig record_cfg = cfg;
    record_cfg.selection_seed = derive_key(cfg.selection_seed, {i});
    const GenerationRecord g = InStage("generate", r.id, [&] {
      return GenerateWatermarked(material, backend, source, record_cfg, r.prompt);
    });
    r.text = g.Text();
    r.meta = {{"selection_seed", record_cfg.selection_seed},
              {"match_counts", g.match_counts}};
    if (!g.warnings.empty()) r.meta["warnings"] = g.warnings;
  });
  return out;
}

std::vector<CorpusRecord> MakeHumanCorpus(size_t count, int num_sentences,
                                          uint64_t seed) {
  std::vector<CorpusRecord> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    Rng rng(derive_key(seed, {kHumanTag, i}));
    CorpusRecord r;
    r.id = RecordId("hu", i);
    r.label = Label::kHuman;
    r.prompt = SyntheticSource::RandomSentence(rng, 6, 5);
    std::vector<std::string> sentences;
    for (int k = 0; k < num_sentences; ++k) {
      sentences.push_back(SyntheticSource::RandomSentence(rng, 6, 5));
    }
    r.text = Segment(SentenceText(std::move(sentences)).Join()).Join();
    r.meta = {{"seed", seed}};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> MakeDistractorPool(size_t count, uint64_t seed) {
  Rng rng(derive_key(seed, {kPoolTag}));
  std::vector<std::string> pool;
  pool.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    pool.push_back(SyntheticSource::RandomSentence(rng, 6, 5));
  }
  return pool;
}

CorpusRecord AttackRecord(const AttackSpec& attack, const CorpusRecord& record) {
  CorpusRecord out = record;
  if (attack.kind == AttackSpec::Kind::kNone) return out;
  const SentenceText before = Segment(record.text);
  const SentenceText after = attack.kind == AttackSpec::Kind::kChannel
                                 ? ApplyChannel(attack.channel, before)
                                 : ApplyProbe(attack.probe, before);
  out.text = after.Join();
  out.meta["attack"] = attack.ToJson();
  out.meta["sentences_before"] = before.size();
  out.meta["sentences_after"] = after.size();
  out.meta["delta"] = DeltaRatio(before, after).value();
  return out;
}

std::shared_ptr<const EmbedderBackend> BackendForRecord(
    std::shared_ptr<const EmbedderBackend> base, const SecretMaterial& material,
    const CorpusRecord& record) {
  if (!record.meta.contains("attack")) return base;
  const AttackSpec attack = AttackSpec::FromJson(record.meta.at("attack"));
  if (attack.kind != AttackSpec::Kind::kChannel ||
      attack.channel.bit_flip_p <= 0.0) {
    return base;
  }
  return std::make_shared<BitFlipEmbedder>(std::move(base), material,
                                           attack.channel.bit_flip_p,
                                           attack.channel.attack_seed);
}

std::vector<DetectionReport> DetectCorpus(
    const SecretMaterial& material,
    const std::shared_ptr<const EmbedderBackend>& backend,
    const CalibrationTable& table, const DetectOptions& options,
    const std::vector<CorpusRecord>& records, int threads) {
  std::vector<DetectionReport> reports(records.size());
  ParallelFor(records.size(), threads, [&](size_t i) {
    const auto& r = records[i];
    reports[i] = InStage("detect", r.id, [&] {
      const auto b = BackendForRecord(backend, material, r);
      return Detect(material, *b, table, options, r.text);
    });
  });
  return reports;
}

std::map<double, size_t> DeltaHistogram(const std::vector<CorpusRecord>& records) {
  std::map<double, size_t> hist;
  for (const auto& r : records) {
    if (!r.meta.contains("delta")) continue;
    const double d = r.meta.at("delta").get<double>();
    ++hist[std::round(d * 1e4) / 1e4];
  }
  return hist;
}

ExperimentConfig ExperimentConfig::FromJson(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    if (j.contains("key")) {
      const auto& k = j.at("key");
      c.key_seed = k.value("seed", c.key_seed);
      c.embed_dim = k.value("embed_dim", c.embed_dim);
      c.block_size = k.value("M", c.block_size);
    }
    if (j.contains("embedder")) c.embedder = j.at("embedder");
    if (!c.embedder.contains("embed_dim")) c.embedder["embed_dim"] = c.embed_dim;
    if (j.contains("source")) c.source = j.at("source");
    if (j.contains("generation")) {
      const auto& g = j.at("generation");
      c.generation.candidates = g.value("Q", c.generation.candidates);
      c.generation.num_sentences =
          g.value("num_sentences", c.generation.num_sentences);
      c.generation.selection_seed =
          g.value("selection_seed", c.generation.selection_seed);
    }
    if (j.contains("corpus")) {
      const auto& k = j.at("corpus");
      c.n_pos = k.value("n_pos", c.n_pos);
      c.n_neg = k.value("n_neg", c.n_neg);
      c.human_seed = k.value("human_seed", c.human_seed);
      c.watermarked_in = k.value("watermarked_in", c.watermarked_in);
      c.human_in = k.value("human_in", c.human_in);
      c.pool_seed = k.value("pool_seed", c.pool_seed);
      c.pool_size = k.value("pool_size", c.pool_size);
    }
    if (j.contains("attack")) c.attack = AttackSpec::FromJson(j.at("attack"));
    if (j.contains("detect")) {
      const auto& d = j.at("detect");
      c.detect.params.alpha = d.value("alpha", c.detect.params.alpha);
      c.detect.params.beta = d.value("beta", c.detect.params.beta);
      c.detect.rs_mode = ParseRsMode(d.value("rs_mode", std::string("single")));
      c.detect.rs_a = d.value("rs_a", c.detect.rs_a);
      c.detect.rs_b = d.value("rs_b", c.detect.rs_b);
    }
    if (j.contains("calibration")) {
      const auto& k = j.at("calibration");
      c.table_path = k.value("table", c.table_path);
      c.calib_seed = k.value("calib_seed", c.calib_seed);
      c.calib_samples = k.value("samples", c.calib_samples);
    }
    c.fpr_targets = j.value("fpr_targets", c.fpr_targets);
    c.threads = j.value("threads", c.threads);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.detect.params.Validate();
    c.generation.Validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
}

nlohmann::json ExperimentConfig::ToJson() const {
  return {
      {"key", {{"seed", key_seed}, {"embed_dim", embed_dim}, {"M", block_size}}},
      {"embedder", embedder},
      {"source", source},
      {"generation",
       {{"Q", generation.candidates},
        {"num_sentences", generation.num_sentences},
        {"selection_seed", generation.selection_seed}}},
      {"corpus",
       {{"n_pos", n_pos},
        {"n_neg", n_neg},
        {"human_seed", human_seed},
        {"watermarked_in", watermarked_in},
        {"human_in", human_in},
        {"pool_seed", pool_seed},
        {"pool_size", pool_size}}},
      {"attack", attack.ToJson()},
      {"detect",
       {{"alpha", detect.params.alpha},
        {"beta", detect.params.beta},
        {"rs_mode", RsModeName(detect.rs_mode)},
        {"rs_a", detect.rs_a},
        {"rs_b", detect.rs_b}}},
      {"calibration",
       {{"table", table_path},
        {"calib_seed", calib_seed},
        {"samples", calib_samples}}},
      {"fpr_targets", fpr_targets},
      {"threads", threads},
      {"out_dir", out_dir}};
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  const SecretMaterial material =
      SecretMaterial::Derive(config.key_seed, config.embed_dim, config.block_size);
  const auto backend = MakeEmbedder(config.embedder);

  CalibrationTable table = config.table_path.empty()
                               ? CalibrationTable(config.calib_seed, config.calib_samples)
                               : CalibrationTable::Load(config.table_path);

  std::vector<CorpusRecord> watermarked;
  if (!config.watermarked_in.empty()) {
    watermarked = ReadCorpus(config.watermarked_in);
  } else {
    const auto source = MakeSource(config.source);
    watermarked = GenerateWatermarkedCorpus(material, *backend, *source,
                                            config.generation, config.n_pos,
                                            config.threads);
  }

  ExperimentResult result;
  result.negatives = config.human_in.empty()
                         ? MakeHumanCorpus(config.n_neg,
                                           config.generation.num_sentences,
                                           config.human_seed)
                         : ReadCorpus(config.human_in);

  AttackSpec attack = config.attack;
  if (attack.kind == AttackSpec::Kind::kProbe &&
      attack.probe.kind == ProbeKind::kInsert && attack.probe.distractor_pool.empty()) {
    attack.probe.distractor_pool =
        MakeDistractorPool(config.pool_size, config.pool_seed);
  }
  result.positives.reserve(watermarked.size());
  for (const auto& r : watermarked) {
    result.positives.push_back(
        InStage("attack", r.id, [&] { return AttackRecord(attack, r); }));
  }

  const auto pos_reports = DetectCorpus(material, backend, table, config.detect,
                                        result.positives, config.threads);
  const auto neg_reports = DetectCorpus(material, backend, table, config.detect,
                                        result.negatives, config.threads);
  for (const auto& r : pos_reports) result.pos_scores.push_back(r.score);
  for (const auto& r : neg_reports) result.neg_scores.push_back(r.score);
  result.metrics = ComputeMetrics(result.pos_scores, result.neg_scores,
                                  config.fpr_targets);

  if (!config.table_path.empty() && table.extended()) {
    table.Save(config.table_path);
  }
  if (!config.out_dir.empty()) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    WriteCorpus((dir / "watermarked.jsonl").string(), watermarked);
    WriteCorpus((dir / "attacked.jsonl").string(), result.positives);
    WriteCorpus((dir / "human.jsonl").string(), result.negatives);
    std::vector<nlohmann::json> lines;
    auto add = [&](const std::vector<CorpusRecord>& recs,
                   const std::vector<DetectionReport>& reps) {
      for (size_t i = 0; i < recs.size(); ++i) {
        lines.push_back({{"id", recs[i].id},
                         {"label", LabelName(recs[i].label)},
                         {"score", reps[i].score},
                         {"report", reps[i].ToJson()}});
      }
    };
    add(result.positives, pos_reports);
    add(result.negatives, neg_reports);
    WriteJsonl((dir / "reports.jsonl").string(), lines);
    std::ofstream metrics((dir / "metrics.json").string());
    if (!metrics) throw ConfigError("cannot write metrics to " + dir.string());
    metrics << result.metrics.ToJson().dump(2) << '\n';
  }
  return result;
}

}  // namespace blockmark
