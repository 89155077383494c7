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

#include <cstddef>
#include <functional>
#include <vector>

#include "jagnn/evalmetrics.hpp"
#include "jagnn/model.hpp"
#include "jagnn/pipeline.hpp"
#include "jagnn/train_config.hpp"
#include "json.hpp"

namespace jagnn {

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_auc = 0.0;
  double val_recall = 0.0;
  double elapsed_ms = 0.0;

  nlohmann::json to_json() const;
};

struct EvalReport {
  double auc = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double threshold = 0.5;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  nlohmann::json to_json() const;
};

struct TrainHooks {
  // Sees every training batch before its forward pass.
  std::function<void(std::size_t epoch, const std::vector<NodeId>& batch)> on_batch;
  std::function<void(const EpochLog&)> on_epoch;
  // Called after each optimizer step with the batch's loss parts.
  std::function<void(const LossParts&)> on_loss;
};

struct TrainResult {
  ModelParams params;  // best validation epoch
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
  double best_val_auc = 0.0;
  // F1-maximizing threshold on the validation split for `params`.
  double threshold = 0.5;
};

/// Scores one split with the phase graph it belongs to. With `threshold`
/// unset, the F1-optimal threshold of this split is used.
EvalReport evaluate(const ModelParams& params, const PreparedData& data, Split split,
                    std::size_t batch_size, const double* threshold = nullptr);

/// Balanced mini-batch training with Adam and early stopping on validation
/// AUC, at jump depth `depth`.
TrainResult train(const PreparedData& data, const TrainConfig& cfg, std::size_t depth,
                  const TrainHooks& hooks = {});

struct DepthRow {
  std::size_t depth;
  double val_auc;
  double test_auc;
  double test_recall;
};

struct DepthSearch {
  std::vector<DepthRow> rows;  // d = 0 baseline first, then 1..layers
  std::size_t best_depth = 1;
  TrainResult best;
};

/// Trains at d = 0, 1, ..., layers and keeps the d >= 1 with the highest
/// validation AUC.
DepthSearch progressive_depth_search(const PreparedData& data, const TrainConfig& cfg,
                                     const TrainHooks& hooks = {});

}  // namespace jagnn
