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

#include "blockmark/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "blockmark/errors.h"
#include "blockmark/math_util.h"

namespace blockmark {
namespace {

void CheckScores(std::span<const double> scores, const char* which) {
  if (scores.empty()) {
    throw MetricsError(std::string("no ") + which + " scores");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw MetricsError(std::string("non-finite ") + which + " score");
    }
  }
}

std::string TargetKey(double fpr) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", fpr);
  return buf;
}

}  // namespace

nlohmann::json MetricsReport::ToJson() const {
  nlohmann::json tpr = nlohmann::json::object();
  nlohmann::json thr = nlohmann::json::object();
  for (const auto& [f, v] : tpr_at) tpr[TargetKey(f)] = v;
  for (const auto& [f, v] : threshold_at) thr[TargetKey(f)] = v;
  return {{"auroc", auroc},
          {"tpr_at", std::move(tpr)},
          {"threshold_at", std::move(thr)},
          {"n_pos", n_pos},
          {"n_neg", n_neg}};
}

double Auroc(std::span<const double> pos, std::span<const double> neg) {
  CheckScores(pos, "positive");
  CheckScores(neg, "negative");
  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.push_back({s, true});
  for (double s : neg) all.push_back({s, false});
  std::sort(all.begin(), all.end(),
            [](const Item& a, const Item& b) { return a.score < b.score; });

  // Sum of 1-based ranks of positives, ties sharing their average rank.
  double rank_sum = 0.0;
  size_t i = 0;
  while (i < all.size()) {
    size_t j = i;
    size_t tied_pos = 0;
    while (j < all.size() && all[j].score == all[i].score) {
      tied_pos += all[j].positive;
      ++j;
    }
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum += avg_rank * static_cast<double>(tied_pos);
    i = j;
  }
  const auto np = static_cast<double>(pos.size());
  const auto nn = static_cast<double>(neg.size());
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

double ThresholdAtFpr(std::span<const double> neg, double fpr) {
  CheckScores(neg, "negative");
  if (!(fpr > 0.0 && fpr < 1.0)) {
    throw MetricsError("FPR target must be in (0, 1)");
  }
  std::vector<double> sorted(neg.begin(), neg.end());
  std::sort(sorted.begin(), sorted.end());
  const size_t k = std::clamp<size_t>(CeilScaled(1.0 - fpr, sorted.size()), 1,
                                      sorted.size());
  return sorted[k - 1];
}

MetricsReport ComputeMetrics(std::span<const double> pos,
                             std::span<const double> neg,
                             std::span<const double> fpr_targets) {
  MetricsReport r;
  r.auroc = Auroc(pos, neg);
  r.n_pos = pos.size();
  r.n_neg = neg.size();
  for (double f : fpr_targets) {
    const double t = ThresholdAtFpr(neg, f);
    const auto above = std::count_if(pos.begin(), pos.end(),
                                     [t](double s) { return s > t; });
    r.threshold_at[f] = t;
    r.tpr_at[f] = static_cast<double>(above) / static_cast<double>(pos.size());
  }
  return r;
}

}  // namespace blockmark
