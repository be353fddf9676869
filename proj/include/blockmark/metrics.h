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

#ifndef BLOCKMARK_METRICS_H_
#define BLOCKMARK_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "json.hpp"

namespace blockmark {

struct MetricsReport {
  double auroc = 0.0;
  std::map<double, double> tpr_at;        // FPR target -> TPR
  std::map<double, double> threshold_at;  // FPR target -> score threshold
  size_t n_pos = 0;
  size_t n_neg = 0;

  nlohmann::json ToJson() const;
};

// Mann-Whitney AUROC; a tied (pos, neg) pair counts one half.
double Auroc(std::span<const double> pos, std::span<const double> neg);

// The k-th smallest negative score with k = ceil((1 - fpr) * n), clamped to
// [1, n]. Scores strictly above it are flagged.
double ThresholdAtFpr(std::span<const double> neg, double fpr);

// Throws MetricsError for an empty list, a non-finite score or a target
// outside (0, 1).
MetricsReport ComputeMetrics(std::span<const double> pos,
                             std::span<const double> neg,
                             std::span<const double> fpr_targets);

}  // namespace blockmark

#endif  // BLOCKMARK_METRICS_H_
