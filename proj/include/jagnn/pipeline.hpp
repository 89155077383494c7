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
#include <vector>

#include "jagnn/graphstore.hpp"
#include "jagnn/model.hpp"
#include "jagnn/sampler.hpp"
#include "jagnn/splits.hpp"
#include "jagnn/train_config.hpp"

namespace jagnn {

/// Per-feature standardization fitted on training anchors.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> scale;  // standard deviation; 1 for constant features

  Tensor apply(const TransactionGraph& g) const;
};

FeatureScaler fit_scaler(const TransactionGraph& g, std::span<const NodeId> anchors);

/// A graph snapshot with scored edges and one sample per visible anchor.
struct Phase {
  TransactionGraph graph{1, 1};
  SampleCache samples;
};

// Keeps edges of `visible` anchors, scores them with the frozen covariances
// and samples every visible anchor.
Phase build_phase(const TransactionGraph& g, const std::vector<bool>& visible,
                  const CovarianceSet& cov, const TrainConfig& cfg);

/// Everything training needs that does not depend on the model.
///
/// The train phase sees only training anchors' edges, validation adds the
/// validation anchors, and test sees the whole graph. Covariances and the
/// feature scaler come from the train phase and stay fixed.
struct PreparedData {
  SplitAssignment splits;
  CovarianceSet covariances;
  FeatureScaler scaler;
  Tensor features;
  Phase train;
  Phase val;
  Phase test;

  const Phase& phase(Split s) const;
  const std::vector<NodeId>& anchors(Split s) const;
};

PreparedData prepare(const TransactionGraph& g, const TrainConfig& cfg);

std::vector<int> labels_of(const TransactionGraph& g, std::span<const NodeId> anchors);

// Drops anchors without a label.
std::vector<NodeId> labeled(const TransactionGraph& g, std::span<const NodeId> anchors);

}  // namespace jagnn
