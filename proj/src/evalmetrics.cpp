// Copyright 2026 The JA-GNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jagnn/evalmetrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace jagnn {

namespace {

struct Counts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

Counts check(std::span<const double> scores, std::span<const int> labels, bool need_both) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
  if (scores.empty()) throw std::invalid_argument("empty scored set");
  Counts c;
  for (int y : labels) {
    if (y == 1) ++c.pos;
    else if (y == 0) ++c.neg;
    else throw std::invalid_argument("labels must be 0 or 1");
  }
  if (need_both && (c.pos == 0 || c.neg == 0)) {
    throw std::invalid_argument("both classes must be present");
  }
  return c;
}

std::vector<std::size_t> descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = check(scores, labels, true);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1..j share their average.
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) rank_sum += avg;
    }
    i = j;
  }
  const double p = static_cast<double>(c.pos), n = static_cast<double>(c.neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

PrThreshold pr_threshold(std::span<const double> scores, std::span<const int> labels) {
  const Counts c = check(scores, labels, true);
  const std::vector<std::size_t> order = descending(scores);
  PrThreshold best{scores[order[0]], 0.0, 0.0, -1.0};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(c.pos);
    const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + (c.pos - tp));
    // Scanning downward, >= hands ties to the lower threshold.
    if (f1 >= best.f1) best = {scores[order[i]], precision, recall, f1};
    i = j;
  }
  return best;
}

double recall_at(std::span<const double> scores, std::span<const int> labels, double threshold) {
  const Counts c = check(scores, labels, false);
  if (c.pos == 0) throw std::invalid_argument("recall needs at least one positive");
  std::size_t tp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1 && scores[i] >= threshold) ++tp;
  }
  return static_cast<double>(tp) / static_cast<double>(c.pos);
}

}  // namespace jagnn
