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

#ifndef BLOCKMARK_CALIBRATION_H_
#define BLOCKMARK_CALIBRATION_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace blockmark {

// Null statistics of the block edit rate between two independent uniform
// bit sequences of n blocks of M bits.
struct CalibrationCell {
  double mu = 0.0;
  double sigma = 0.0;
  friend bool operator==(const CalibrationCell&, const CalibrationCell&) = default;
};

// Monte-Carlo estimate over `samples` equal-length pairs; sigma uses the
// n-1 denominator. The pair stream is keyed by (calib_seed, M, n), so a cell
// has the same value whether it is computed in a grid or on demand.
// Throws CalibrationError when sigma < 1e-9.
CalibrationCell EstimateCell(int block_size, int num_blocks, int samples,
                             uint64_t calib_seed);

// Table of null statistics indexed by (M, n). Lookups of missing cells either
// fail or, with on-demand extension enabled, estimate and store the cell.
// Concurrent Lookup calls are safe.
class CalibrationTable {
 public:
  static constexpr int kFormatVersion = 1;
  static constexpr int kDefaultSamples = 1000;

  CalibrationTable(uint64_t calib_seed, int samples_per_cell);
  CalibrationTable(const CalibrationTable& other);
  CalibrationTable& operator=(const CalibrationTable& other);

  uint64_t calib_seed() const { return calib_seed_; }
  int samples_per_cell() const { return samples_; }

  bool extend_on_demand() const { return extend_on_demand_; }
  void set_extend_on_demand(bool on) { extend_on_demand_ = on; }
  // True once a lookup has added a cell.
  bool extended() const;

  void Insert(int block_size, int num_blocks, CalibrationCell cell);
  std::optional<CalibrationCell> Find(int block_size, int num_blocks) const;
  // Throws MissingCalibrationError if the cell is absent and extension is
  // off.
  CalibrationCell Lookup(int block_size, int num_blocks) const;

  size_t size() const;
  std::map<std::pair<int, int>, CalibrationCell> cells() const;

  // {version, calib_seed, samples, cells: [{m, n, mu, sigma}, ...]}
  nlohmann::json ToJson() const;
  static CalibrationTable FromJson(const nlohmann::json& j);
  void Save(const std::string& path) const;
  static CalibrationTable Load(const std::string& path);

  friend bool operator==(const CalibrationTable& a, const CalibrationTable& b);

 private:
  uint64_t calib_seed_;
  int samples_;
  bool extend_on_demand_ = true;
  mutable std::shared_mutex mu_;
  mutable std::map<std::pair<int, int>, CalibrationCell> cells_;
  mutable bool extended_ = false;
};

// Fills every (M, n) cell of the grid.
CalibrationTable Calibrate(std::span<const int> block_sizes,
                           std::span<const int> num_blocks, int samples,
                           uint64_t calib_seed, int threads = 1);

// (mu - ber) / sigma for the (M, n) cell.
double ZScore(const CalibrationTable& table, int block_size, int num_blocks,
              double ber);

}  // namespace blockmark

#endif  // BLOCKMARK_CALIBRATION_H_
