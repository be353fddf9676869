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

// Command-line front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockmark/calibration.h"
#include "blockmark/corpus.h"
#include "blockmark/detector.h"
#include "blockmark/errors.h"
#include "blockmark/experiment.h"
#include "blockmark/restructurer.h"
#include "blockmark/secret_material.h"

namespace {

using blockmark::ExperimentConfig;
using nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw blockmark::ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path);
  if (!out) throw blockmark::ConfigError("cannot write " + path);
  out << data;
}

template <typename T>
void Override(T& field, const std::optional<T>& value) {
  if (value) field = *value;
}

struct Flags {
  std::string config_path;
  std::optional<uint64_t> key_seed;
  std::optional<int> threads;
  std::optional<int> embed_dim;
  std::optional<int> m;
  std::optional<uint64_t> toy_seed;

  // generation
  std::optional<int> q;
  std::optional<int> num_sentences;
  std::optional<uint64_t> selection_seed;
  std::optional<uint64_t> source_seed;
  size_t count = 1;
  std::string prompt;

  // detection
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> rs_mode;
  std::optional<int> rs_a;
  std::optional<int> rs_b;
  std::optional<std::string> table;
  std::optional<uint64_t> calib_seed;
  std::optional<int> samples;
  std::string segmenter_file;

  // calibration
  std::vector<int> calib_ms;
  int n_max = 200;

  // attack
  std::string kind = "channel";
  double rate = 0.1;
  double merge_p = 0.0;
  double split_p = 0.0;
  double flip_p = 0.0;
  uint64_t attack_seed = 0;
  uint64_t pool_seed = 2;
  size_t pool_size = 200;

  std::string in;
  std::string out;
  std::string report;
};

ExperimentConfig LoadConfig(const Flags& f) {
  ExperimentConfig c = f.config_path.empty()
                           ? ExperimentConfig{}
                           : ExperimentConfig::FromJson(json::parse(ReadFile(f.config_path)));
  Override(c.key_seed, f.key_seed);
  Override(c.threads, f.threads);
  Override(c.embed_dim, f.embed_dim);
  Override(c.block_size, f.m);
  c.embedder["embed_dim"] = c.embed_dim;
  if (f.toy_seed) c.embedder["toy_seed"] = *f.toy_seed;
  if (f.source_seed) c.source["seed"] = *f.source_seed;
  Override(c.generation.candidates, f.q);
  Override(c.generation.num_sentences, f.num_sentences);
  Override(c.generation.selection_seed, f.selection_seed);
  Override(c.detect.params.alpha, f.alpha);
  Override(c.detect.params.beta, f.beta);
  if (f.rs_mode) c.detect.rs_mode = blockmark::ParseRsMode(*f.rs_mode);
  Override(c.detect.rs_a, f.rs_a);
  Override(c.detect.rs_b, f.rs_b);
  Override(c.table_path, f.table);
  Override(c.calib_seed, f.calib_seed);
  Override(c.calib_samples, f.samples);
  c.detect.params.Validate();
  c.generation.Validate();
  return c;
}

blockmark::CalibrationTable LoadTable(const ExperimentConfig& c) {
  return c.table_path.empty()
             ? blockmark::CalibrationTable(c.calib_seed, c.calib_samples)
             : blockmark::CalibrationTable::Load(c.table_path);
}

blockmark::AttackSpec AttackFromFlags(const Flags& f) {
  json j = {{"kind", f.kind},         {"rate", f.rate},
            {"merge_p", f.merge_p},   {"split_p", f.split_p},
            {"flip_p", f.flip_p},     {"seed", f.attack_seed}};
  blockmark::AttackSpec a = blockmark::AttackSpec::FromJson(j);
  if (a.kind == blockmark::AttackSpec::Kind::kProbe) {
    if (a.probe.kind == blockmark::ProbeKind::kInsert) {
      a.probe.distractor_pool =
          blockmark::MakeDistractorPool(f.pool_size, f.pool_seed);
    }
    a.probe.Validate();
    if (!a.probe.InStudiedBand()) {
      std::cerr << "warning: probe rate " << a.probe.rate
                << " is outside [0.1, 0.5]\n";
    }
  }
  return a;
}

int RunKeygen(const Flags& f) {
  const ExperimentConfig c = LoadConfig(f);
  const auto material =
      blockmark::SecretMaterial::Derive(c.key_seed, c.embed_dim, c.block_size);
  WriteFile(f.out, material.ToJson().dump(2) + "\n");
  return 0;
}

int RunCalibrate(const Flags& f) {
  const ExperimentConfig c = LoadConfig(f);
  std::vector<int> ms = f.calib_ms;
  if (ms.empty()) ms.push_back(c.block_size);
  std::vector<int> ns;
  for (int n = 1; n <= f.n_max; ++n) ns.push_back(n);
  const auto table =
      blockmark::Calibrate(ms, ns, c.calib_samples, c.calib_seed, c.threads);
  WriteFile(f.out, table.ToJson().dump(2) + "\n");
  return 0;
}

int RunGenerate(const Flags& f) {
  const ExperimentConfig c = LoadConfig(f);
  const auto material =
      blockmark::SecretMaterial::Derive(c.key_seed, c.embed_dim, c.block_size);
  const auto backend = blockmark::MakeEmbedder(c.embedder);
  const auto source = blockmark::MakeSource(c.source);
  if (!f.prompt.empty()) {
    const auto g = blockmark::GenerateWatermarked(material, *backend, *source,
                                                  c.generation, f.prompt);
    for (const auto& w : g.warnings) std::cerr << "warning: " << w << "\n";
    WriteFile(f.out, g.Text() + "\n");
    return 0;
  }
  const auto records = blockmark::GenerateWatermarkedCorpus(
      material, *backend, *source, c.generation, f.count, c.threads);
  if (f.out.empty() || f.out == "-") {
    for (const auto& r : records) std::cout << r.ToJson().dump() << "\n";
  } else {
    blockmark::WriteCorpus(f.out, records);
  }
  return 0;
}

int RunAttack(const Flags& f) {
  const auto attack = AttackFromFlags(f);
  const auto records = blockmark::ReadCorpus(f.in);
  std::vector<blockmark::CorpusRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(blockmark::AttackRecord(attack, r));
  blockmark::WriteCorpus(f.out, out);
  return 0;
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int RunDetect(const Flags& f) {
  const ExperimentConfig c = LoadConfig(f);
  const auto material =
      blockmark::SecretMaterial::Derive(c.key_seed, c.embed_dim, c.block_size);
  const auto backend = blockmark::MakeEmbedder(c.embedder);
  auto table = LoadTable(c);

  if (EndsWith(f.in, ".jsonl")) {
    const auto records = blockmark::ReadCorpus(f.in);
    const auto reports = blockmark::DetectCorpus(material, backend, table,
                                                 c.detect, records, c.threads);
    std::vector<json> lines;
    for (size_t i = 0; i < records.size(); ++i) {
      lines.push_back({{"id", records[i].id},
                       {"label", blockmark::LabelName(records[i].label)},
                       {"score", reports[i].score},
                       {"report", reports[i].ToJson()}});
      std::printf("%s\t%.6f\n", records[i].id.c_str(), reports[i].score);
    }
    if (!f.report.empty()) blockmark::WriteJsonl(f.report, lines);
  } else {
    const std::string text = ReadFile(f.in);
    blockmark::DetectionReport report;
    if (f.segmenter_file.empty()) {
      report = blockmark::Detect(material, *backend, table, c.detect, text);
    } else {
      const auto seg = blockmark::Segmenter::FromFile(f.segmenter_file);
      report = blockmark::DetectSentences(material, *backend, table, c.detect,
                                          seg.Segment(text));
    }
    std::printf("%.6f\n", report.score);
    if (!f.report.empty()) WriteFile(f.report, report.ToJson().dump(2) + "\n");
  }
  if (!c.table_path.empty() && table.extended()) table.Save(c.table_path);
  return 0;
}

int RunEval(const Flags& f) {
  ExperimentConfig c = LoadConfig(f);
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.in.empty()) c.watermarked_in = f.in;
  const auto result = blockmark::RunExperiment(c);
  std::cout << result.metrics.ToJson().dump(2) << "\n";
  return 0;
}

int RunDeltaStats(const Flags& f) {
  const auto records = blockmark::ReadCorpus(f.in);
  const auto hist = blockmark::DeltaHistogram(records);
  std::ostringstream csv;
  csv << "delta,count\n";
  for (const auto& [delta, n] : hist) csv << delta << "," << n << "\n";
  WriteFile(f.out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentence-level text watermarking toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config_path, "experiment config (JSON)");
  app.add_option("--key-seed", f.key_seed, "secret key seed");
  app.add_option("--threads", f.threads, "worker threads");

  auto add_key = [&](CLI::App* sub) {
    sub->add_option("--m", f.m, "bits per sentence (M)");
    sub->add_option("--dim", f.embed_dim, "embedding dimension");
    sub->add_option("--toy-seed", f.toy_seed, "toy embedder seed");
  };
  auto add_detect = [&](CLI::App* sub) {
    sub->add_option("--table", f.table, "calibration table JSON");
    sub->add_option("--calib-seed", f.calib_seed, "seed for on-demand cells");
    sub->add_option("--samples", f.samples, "samples per calibration cell");
    sub->add_option("--alpha", f.alpha);
    sub->add_option("--beta", f.beta);
    sub->add_option("--rs-mode", f.rs_mode)
        ->check(CLI::IsMember({"off", "single", "multi"}));
    sub->add_option("--rs-a", f.rs_a, "max merges (multi)");
    sub->add_option("--rs-b", f.rs_b, "max splits (multi)");
  };
  auto add_generate = [&](CLI::App* sub) {
    sub->add_option("--q", f.q, "candidates per sentence");
    sub->add_option("--num-sentences", f.num_sentences);
    sub->add_option("--selection-seed", f.selection_seed);
    sub->add_option("--source-seed", f.source_seed, "synthetic source seed");
  };

  auto* keygen = app.add_subcommand("keygen", "derive and print key material");
  add_key(keygen);
  keygen->add_option("--out", f.out);

  auto* calibrate = app.add_subcommand("calibrate", "build a calibration table");
  calibrate->add_option("--m", f.calib_ms, "block sizes")->expected(1, -1);
  calibrate->add_option("--n-max", f.n_max);
  calibrate->add_option("--samples", f.samples);
  calibrate->add_option("--calib-seed", f.calib_seed);
  calibrate->add_option("--out", f.out)->required();

  auto* generate = app.add_subcommand("generate", "generate watermarked text");
  add_key(generate);
  add_generate(generate);
  generate->add_option("--prompt", f.prompt, "single text from this prompt");
  generate->add_option("--count", f.count, "corpus size");
  generate->add_option("--out", f.out);

  auto* attack = app.add_subcommand("attack", "perturb a corpus");
  attack->add_option("--kind", f.kind)
      ->check(CLI::IsMember({"channel", "insert", "delete", "reorder"}));
  attack->add_option("--rate", f.rate);
  attack->add_option("--merge-p", f.merge_p);
  attack->add_option("--split-p", f.split_p);
  attack->add_option("--flip-p", f.flip_p);
  attack->add_option("--seed", f.attack_seed);
  attack->add_option("--pool-seed", f.pool_seed);
  attack->add_option("--pool-size", f.pool_size);
  attack->add_option("--in", f.in)->required();
  attack->add_option("--out", f.out)->required();

  auto* detect = app.add_subcommand("detect", "score a text or corpus");
  add_key(detect);
  add_detect(detect);
  detect->add_option("--segmenter", f.segmenter_file, "abbreviation list");
  detect->add_option("--in", f.in, "text file or .jsonl corpus")->required();
  detect->add_option("--report", f.report);

  auto* eval = app.add_subcommand("eval", "run a full experiment");
  add_key(eval);
  add_generate(eval);
  add_detect(eval);
  eval->add_option("--in", f.in, "pre-generated watermarked corpus");
  eval->add_option("--out", f.out, "output directory");

  auto* delta = app.add_subcommand("delta-stats", "sentence count ratio histogram");
  delta->add_option("--in", f.in)->required();
  delta->add_option("--out", f.out);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*keygen) return RunKeygen(f);
    if (*calibrate) return RunCalibrate(f);
    if (*generate) return RunGenerate(f);
    if (*attack) return RunAttack(f);
    if (*detect) return RunDetect(f);
    if (*eval) return RunEval(f);
    if (*delta) return RunDeltaStats(f);
  } catch (const blockmark::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
