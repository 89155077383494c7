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

#pragma once

#include <span>

namespace jagnn {

struct PrThreshold {
  double threshold;
  double precision;
  double recall;
  double f1;
};

/// Probability that a random positive outranks a random negative, ties
/// counting one half. Computed from average ranks.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// F1-maximizing threshold over the distinct scores, predicting positive when
/// score >= threshold. Ties in F1 go to the lower threshold.
PrThreshold pr_threshold(std::span<const double> scores, std::span<const int> labels);

double recall_at(std::span<const double> scores, std::span<const int> labels, double threshold);

}  // namespace jagnn
