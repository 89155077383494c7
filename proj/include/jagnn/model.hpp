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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jagnn/graphstore.hpp"
#include "jagnn/sampler.hpp"
#include "jagnn/tape.hpp"
#include "jagnn/tensor.hpp"

namespace jagnn {

enum class JumpAggregation { kMean, kConcat, kMax };

// full: attention over k_top, jump over N_random.
// sample: attention over k_top, no jump connection.
// solo: no similarity sampling; every two-hop candidate feeds both paths.
enum class Variant { kFull, kSample, kSolo };

std::string to_string(JumpAggregation a);
std::string to_string(Variant v);
JumpAggregation parse_jump_aggregation(const std::string& s);
Variant parse_variant(const std::string& s);

struct ModelConfig {
  std::size_t feature_dim = 0;
  std::size_t num_relations = 1;
  std::size_t layers = 3;
  std::size_t heads = 4;
  std::size_t width = 128;
  std::size_t jump_depth = 2;
  JumpAggregation aggregation = JumpAggregation::kMean;
  Variant variant = Variant::kFull;
  double leaky_slope = 0.2;

  void validate() const;
  bool has_jump() const { return variant != Variant::kSample; }
  // Layers n whose h^(n-1) feeds the jump path, ascending.
  std::vector<std::size_t> jump_layers() const;
  // d as charged by the depth penalty; 0 when the variant has no jump path.
  std::size_t effective_depth() const { return has_jump() ? jump_depth : 0; }
  std::size_t jump_width() const;
  std::size_t combined_width() const { return width + jump_width(); }
};

enum class InitScheme { kGlorot, kZeros };

/// Learnable tensors, stored in a fixed order derived from the config.
///
///   input.weight (width x d_feat), input.bias (width)
///   layer{n}.norm.gain / .bias (width)
///   layer{n}.rel{r}.weight (width x width)
///   layer{n}.rel{r}.attn_self / .attn_neigh (width x heads)
///   head.weight (combined), head.bias (1)
struct ModelParams {
  ModelConfig config;
  std::vector<std::string> names;
  std::vector<Tensor> tensors;

  std::size_t size() const { return tensors.size(); }
  std::size_t index_of(const std::string& name) const;
  Tensor& at(const std::string& name) { return tensors[index_of(name)]; }
  const Tensor& at(const std::string& name) const { return tensors[index_of(name)]; }
  std::size_t num_scalars() const;
};

ModelParams init_params(const ModelConfig& cfg, InitScheme scheme, std::uint64_t seed);

/// Per-anchor samples indexed by NodeId.
class SampleCache {
 public:
  SampleCache() = default;
  SampleCache(std::size_t num_nodes, std::vector<SampledSubgraph> samples);

  bool contains(NodeId v) const { return v < index_.size() && index_[v] >= 0; }
  const SampledSubgraph& at(NodeId v) const;
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<SampledSubgraph> samples_;
  std::vector<std::int64_t> index_;
};

// Message-passing edges of one (layer, relation). src indexes the layer's
// input node list, dst the output list. Rows of one group share dst.
struct RelationEdges {
  std::vector<std::uint32_t> src;
  std::vector<std::uint32_t> self;  // input-list index of the group's own node
  std::vector<std::uint32_t> dst;
  std::vector<std::uint32_t> group;
  std::size_t num_groups = 0;
};

struct JumpEdges {
  std::vector<std::uint32_t> src;  // into nodes[n - 1]
  std::vector<std::uint32_t> dst;  // into the target list
  std::vector<double> weight;
};

/// Which node embeddings each layer needs for a set of targets.
struct BatchPlan {
  std::vector<NodeId> targets;
  // Row of nodes[layers] for each target; targets may repeat.
  std::vector<std::uint32_t> target_rows;
  // nodes[n] for n = 0..layers; nodes[layers] holds the distinct targets.
  // Each list starts with the entries of the next one.
  std::vector<std::vector<NodeId>> nodes;
  // edges[n - 1][r] for layer n.
  std::vector<std::vector<RelationEdges>> edges;
  // One entry per ModelConfig::jump_layers(), same order.
  std::vector<JumpEdges> jump;
};

// Attention set and jump set of an anchor under a variant.
std::vector<NodeId> attention_members(const SampledSubgraph& s, Variant v);
std::vector<NodeId> jump_members(const SampledSubgraph& s, Variant v);

BatchPlan build_plan(const ModelConfig& cfg, const SampleCache& samples,
                     std::span<const NodeId> targets);

struct AttentionStats {
  std::size_t groups_checked = 0;
  double max_deviation = 0.0;
};

struct ForwardOptions {
  // Verify every softmax group sums to 1 within kAttentionSumTolerance.
  bool check_attention = false;
  AttentionStats* stats = nullptr;
  // Called with (layer, relation, alpha (rows x heads), edges).
  std::function<void(std::size_t, std::size_t, const Tensor&, const RelationEdges&)> on_attention;
};

inline constexpr double kAttentionSumTolerance = 1e-12;

struct ForwardResult {
  Var probabilities;  // (targets)
  Var logits;
  // The rest have one row per distinct target.
  Var combined;
  Var aggregate;
  Var jump;
};

/// Records the network on `tape`. `params` holds one Var per ModelParams
/// tensor, in order. `features` has one standardized row per graph node.
ForwardResult forward(Tape& tape, const ModelConfig& cfg, std::span<const Var> params,
                      const Tensor& features, const BatchPlan& plan,
                      const ForwardOptions& options = {});

struct LossParts {
  Var classification;
  double regularization = 0.0;
  Var total;
};

// Mean BCE plus lambda * d.
LossParts loss(Var probabilities, const Tensor& labels, double lambda, std::size_t depth);

/// Forward without gradients; returns one probability per target. Attention
/// sums are always checked here.
std::vector<double> predict(const ModelParams& params, const Tensor& features,
                            const SampleCache& samples, std::span<const NodeId> targets,
                            std::size_t batch_size = 512, AttentionStats* stats = nullptr);

}  // namespace jagnn
