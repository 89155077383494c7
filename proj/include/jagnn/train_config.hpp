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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "jagnn/model.hpp"
#include "jagnn/sampler.hpp"
#include "json.hpp"

namespace jagnn {

/// Every training hyperparameter. Serialized as a flat JSON object whose keys
/// are the field names; unknown keys are rejected.
struct TrainConfig {
  // training
  std::size_t epochs = 50;
  std::size_t batch_size = 1024;
  std::size_t eval_batch_size = 512;
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  std::array<double, 3> split = {0.6, 0.2, 0.2};
  std::size_t patience = 5;
  InitScheme init = InitScheme::kGlorot;
  std::size_t max_batches_per_epoch = 0;  // 0: one pass over the non-fraud anchors
  int threads = 0;                        // 0: OpenMP default

  // sampling
  double epsilon = 0.2;
  std::size_t hypernode_cap = 100;
  std::size_t k_min = 1;
  std::size_t k_max = 64;
  std::optional<double> ridge;  // unset: scaled to the covariance trace
  EdgeScoreMode edge_score = EdgeScoreMode::kReciprocal;
  double label_threshold = 50.0;

  // architecture
  std::size_t layers = 3;
  std::size_t heads = 4;
  std::size_t width = 128;
  std::optional<std::size_t> jump_depth = 2;  // unset: progressive search
  std::size_t extraction_depth = 0;          // 0: 2 * layers
  double lambda = 0.0002;
  JumpAggregation jump_aggregation = JumpAggregation::kMean;
  Variant variant = Variant::kFull;
  double leaky_slope = 0.2;

  void validate() const;
  bool progressive() const { return !jump_depth.has_value(); }
  std::size_t resolved_extraction_depth() const {
    return extraction_depth == 0 ? 2 * layers : extraction_depth;
  }
  ModelConfig model_config(std::size_t feature_dim, std::size_t num_relations,
                           std::size_t depth) const;
  SamplerConfig sampler_config() const;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& doc);
  static TrainConfig load(const std::filesystem::path& path);
};

}  // namespace jagnn
