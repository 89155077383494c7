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

#include <filesystem>

#include "jagnn/model.hpp"
#include "jagnn/pipeline.hpp"
#include "jagnn/sampler.hpp"
#include "jagnn/train_config.hpp"

namespace jagnn {

/// A trained model with everything scoring needs: frozen covariances, the
/// feature scaler and the validation threshold.
struct Checkpoint {
  ModelParams params;
  TrainConfig config;
  CovarianceSet covariances;
  FeatureScaler scaler;
  double threshold = 0.5;
  std::size_t best_epoch = 0;
};

// Architecture summary stored in the file header and checked on load.
nlohmann::json manifest_of(const ModelConfig& cfg);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace jagnn
