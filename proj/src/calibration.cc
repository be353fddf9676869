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

#include "blockmark/calibration.h"

#include <cmath>
#include <fstream>
#include <mutex>

#include "blockmark/block_edit.h"
#include "blockmark/errors.h"
#include "blockmark/parallel.h"
#include "blockmark/random.h"

namespace blockmark {
namespace {

constexpr double kMinSigma = 1e-9;
constexpr uint64_t kCalibTag = 0x63616c62;  // "calb"

void FillUniform(PackedBlocks& blocks, Rng& rng) {
  const int M = blocks.block_size();
  const size_t W = blocks.words_per_block();
  const int tail = M % 64;
  const uint64_t tail_mask = tail == 0 ? ~0ULL : (uint64_t{1} << tail) - 1;
  for (size_t i = 0; i < blocks.num_blocks(); ++i) {
    auto w = blocks.mutable_block(i);
    for (size_t k = 0; k < W; ++k) w[k] = rng();
    w[W - 1] &= tail_mask;
  }
}

}  // namespace

CalibrationCell EstimateCell(int block_size, int num_blocks, int samples,
                             uint64_t calib_seed) {
  if (block_size < 1 || num_blocks < 1) {
    throw ConfigError("calibration cell needs M >= 1 and n >= 1");
  }
  if (samples < 2) throw ConfigError("calibration needs at least 2 samples");

  Rng rng(derive_key(calib_seed, {kCalibTag, static_cast<uint64_t>(block_size),
                                  static_cast<uint64_t>(num_blocks)}));
  PackedBlocks a(block_size, static_cast<size_t>(num_blocks));
  PackedBlocks b(block_size, static_cast<size_t>(num_blocks));
  std::vector<double> rates(static_cast<size_t>(samples));
  for (double& r : rates) {
    FillUniform(a, rng);
    FillUniform(b, rng);
    r = BlockEditRate(a, b);
  }

  double mean = 0.0;
  for (double r : rates) mean += r;
  mean /= static_cast<double>(samples);
  double ss = 0.0;
  for (double r : rates) ss += (r - mean) * (r - mean);
  const double sigma = std::sqrt(ss / static_cast<double>(samples - 1));

  const std::string where = "(M=" + std::to_string(block_size) +
                            ", n=" + std::to_string(num_blocks) + ")";
  if (!(sigma >= kMinSigma)) {
    throw CalibrationError("degenerate null deviation for cell " + where);
  }
  if (!(mean > 0.0)) {
    throw CalibrationError("zero null mean for cell " + where);
  }
  return {mean, sigma};
}

CalibrationTable::CalibrationTable(uint64_t calib_seed, int samples_per_cell)
    : calib_seed_(calib_seed), samples_(samples_per_cell) {
  if (samples_per_cell < 2) {
    throw ConfigError("calibration needs at least 2 samples per cell");
  }
}

CalibrationTable::CalibrationTable(const CalibrationTable& other)
    : calib_seed_(other.calib_seed_),
      samples_(other.samples_),
      extend_on_demand_(other.extend_on_demand_) {
  std::shared_lock lock(other.mu_);
  cells_ = other.cells_;
  extended_ = other.extended_;
}

CalibrationTable& CalibrationTable::operator=(const CalibrationTable& other) {
  if (this == &other) return *this;
  std::map<std::pair<int, int>, CalibrationCell> cells;
  bool extended;
  {
    std::shared_lock lock(other.mu_);
    cells = other.cells_;
    extended = other.extended_;
  }
  std::unique_lock lock(mu_);
  calib_seed_ = other.calib_seed_;
  samples_ = other.samples_;
  extend_on_demand_ = other.extend_on_demand_;
  cells_ = std::move(cells);
  extended_ = extended;
  return *this;
}

bool CalibrationTable::extended() const {
  std::shared_lock lock(mu_);
  return extended_;
}

void CalibrationTable::Insert(int block_size, int num_blocks,
                              CalibrationCell cell) {
  if (!(cell.mu > 0.0 && cell.mu <= 1.0) || !(cell.sigma > 0.0)) {
    throw CalibrationError("invalid calibration cell (M=" +
                           std::to_string(block_size) +
                           ", n=" + std::to_string(num_blocks) + ")");
  }
  std::unique_lock lock(mu_);
  cells_[{block_size, num_blocks}] = cell;
}

std::optional<CalibrationCell> CalibrationTable::Find(int block_size,
                                                      int num_blocks) const {
  std::shared_lock lock(mu_);
  auto it = cells_.find({block_size, num_blocks});
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

CalibrationCell CalibrationTable::Lookup(int block_size, int num_blocks) const {
  if (auto cell = Find(block_size, num_blocks)) return *cell;
  if (!extend_on_demand_) {
    throw MissingCalibrationError(
        "no calibration for (M=" + std::to_string(block_size) +
        ", n=" + std::to_string(num_blocks) + ") and extension is disabled");
  }
  // Same seed, same value: concurrent extensions of one cell agree.
  const CalibrationCell cell =
      EstimateCell(block_size, num_blocks, samples_, calib_seed_);
  std::unique_lock lock(mu_);
  auto [it, inserted] = cells_.try_emplace({block_size, num_blocks}, cell);
  if (inserted) extended_ = true;
  return it->second;
}

size_t CalibrationTable::size() const {
  std::shared_lock lock(mu_);
  return cells_.size();
}

std::map<std::pair<int, int>, CalibrationCell> CalibrationTable::cells() const {
  std::shared_lock lock(mu_);
  return cells_;
}

nlohmann::json CalibrationTable::ToJson() const {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [key, cell] : this->cells()) {
    cells.push_back({{"m", key.first},
                     {"n", key.second},
                     {"mu", cell.mu},
                     {"sigma", cell.sigma}});
  }
  return {{"version", kFormatVersion},
          {"calib_seed", calib_seed_},
          {"samples", samples_},
          {"cells", std::move(cells)}};
}

CalibrationTable CalibrationTable::FromJson(const nlohmann::json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw ConfigError("unsupported calibration table version " +
                        std::to_string(version));
    }
    CalibrationTable table(j.at("calib_seed").get<uint64_t>(),
                           j.at("samples").get<int>());
    for (const auto& c : j.at("cells")) {
      table.Insert(c.at("m").get<int>(), c.at("n").get<int>(),
                   {c.at("mu").get<double>(), c.at("sigma").get<double>()});
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed calibration table: ") + e.what());
  }
}

void CalibrationTable::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write calibration table " + path);
  out << ToJson().dump(1) << '\n';
}

CalibrationTable CalibrationTable::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read calibration table " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("calibration table " + path + ": " + e.what());
  }
  return FromJson(j);
}

bool operator==(const CalibrationTable& a, const CalibrationTable& b) {
  return a.calib_seed_ == b.calib_seed_ && a.samples_ == b.samples_ &&
         a.cells() == b.cells();
}

CalibrationTable Calibrate(std::span<const int> block_sizes,
                           std::span<const int> num_blocks, int samples,
                           uint64_t calib_seed, int threads) {
  CalibrationTable table(calib_seed, samples);
  std::vector<std::pair<int, int>> grid;
  for (int m : block_sizes) {
    for (int n : num_blocks) grid.emplace_back(m, n);
  }
  std::vector<CalibrationCell> cells(grid.size());
  ParallelFor(grid.size(), threads, [&](size_t i) {
    cells[i] = EstimateCell(grid[i].first, grid[i].second, samples, calib_seed);
  });
  for (size_t i = 0; i < grid.size(); ++i) {
    table.Insert(grid[i].first, grid[i].second, cells[i]);
  }
  return table;
}

double ZScore(const CalibrationTable& table, int block_size, int num_blocks,
              double ber) {
  const CalibrationCell cell = table.Lookup(block_size, num_blocks);
  return (cell.mu - ber) / cell.sigma;
}

}  // namespace blockmark
