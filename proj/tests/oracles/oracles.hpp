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
#include <span>
#include <vector>

#include "jagnn/graphstore.hpp"
#include "jagnn/model.hpp"
#include "jagnn/sampler.hpp"

// Slow, literal reference implementations used only by tests.
namespace jagnn::oracle {

// Coefficient straight from the edge list: every edge is visited for every
// common neighbor, parallel edges keep their largest score.
double wmnc_direct(const TransactionGraph& g, NodeId a1, NodeId a2);

// Recomputes each silhouette from scratch for every k.
double silhouette_direct(const TransactionGraph& g, NodeId target,
                         const std::vector<NodeId>& ranked, std::size_t k);
std::vector<NodeId> k_top_exhaustive(const TransactionGraph& g, NodeId target,
                                     std::span<const WmncScore> scores, std::size_t k_min,
                                     std::size_t k_max);

// Fraction of (positive, negative) pairs ranked correctly, ties counting 1/2.
double auc_pairwise(std::span<const double> scores, std::span<const int> labels);

// Whole-graph forward with loops: every sampled node gets every layer's
// embedding, then the targets are read off.
std::vector<double> dense_forward(const ModelParams& params, const Tensor& features,
                                  const SampleCache& samples, std::span<const NodeId> targets);

}  // namespace jagnn::oracle
