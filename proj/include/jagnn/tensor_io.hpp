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
#include <string>
#include <utility>
#include <vector>

#include "jagnn/tensor.hpp"
#include "json.hpp"

namespace jagnn {

inline constexpr int kTensorFormatVersion = 1;

/// Named tensors plus a free-form JSON header.
struct TensorBundle {
  nlohmann::json header = nlohmann::json::object();
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const;
};

// C99 hex-float text ("%a"); decoding is exact.
std::string encode_hex_double(double value);
double decode_hex_double(const std::string& text);

nlohmann::json bundle_to_json(const TensorBundle& bundle);
TensorBundle bundle_from_json(const nlohmann::json& doc);

void save_tensors(const std::filesystem::path& path, const TensorBundle& bundle);
TensorBundle load_tensors(const std::filesystem::path& path);

}  // namespace jagnn
