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

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jagnn/graphstore.hpp"

namespace jagnn {

struct RelationCovariance {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  // Inverse of covariance + ridge * I.
  Eigen::MatrixXd inverse;
  double ridge = 0.0;
  std::size_t population = 0;
  bool identity_fallback = false;
};

struct CovarianceSet {
  std::vector<RelationCovariance> relations;
  std::vector<std::string> warnings;
};

/// Per-relation feature covariance over the distinct endpoints of that
/// relation's edges (sample covariance, denominator n - 1).
///
/// `ridge` is added to the diagonal before inversion. When unset it defaults
/// to 1e-6 * trace(C) / d with an absolute floor of 1e-9. A relation with
/// fewer than two participating nodes falls back to identity and is listed in
/// `warnings`.
CovarianceSet compute_covariances(const TransactionGraph& g,
                                  std::optional<double> ridge = std::nullopt);

double mahalanobis(std::span<const double> a, std::span<const double> b,
                   const Eigen::MatrixXd& inverse);

enum class EdgeScoreMode {
  kReciprocal,  // 1 at distance 0, 1/d otherwise
  kSmoothed,    // 1 / (1 + d)
};

double edge_score(double distance, EdgeScoreMode mode = EdgeScoreMode::kReciprocal);

// Writes E(anchor, neighbor) into every edge slot using that edge's relation
// covariance. The OpenMP and serial versions produce identical bits.
void score_all_edges(TransactionGraph& g, const CovarianceSet& cov,
                     EdgeScoreMode mode = EdgeScoreMode::kReciprocal);
void score_all_edges_serial(TransactionGraph& g, const CovarianceSet& cov,
                            EdgeScoreMode mode = EdgeScoreMode::kReciprocal);

struct WmncScore {
  NodeId first;
  NodeId second;
  double value;
};

/// Weighted mutual neighbor coefficient between two anchors, using the stored
/// edge scores as weights and total degrees across relations. Parallel edges
/// between one anchor and one neighbor contribute their largest score.
WmncScore wmnc(const TransactionGraph& g, NodeId a1, NodeId a2);

/// Picks the top-k candidates (by WMNC, ties by ascending id) whose binary
/// clustering {target + top-k} vs {rest} maximizes the mean silhouette in raw
/// feature space, sweeping k over [k_min, k_max]. The first maximum wins.
std::vector<NodeId> select_k_top(const TransactionGraph& g, NodeId target,
                                 std::span<const WmncScore> scores, std::size_t k_min,
                                 std::size_t k_max);

// Two silhouettes closer than this are treated as equal.
inline constexpr double kSilhouetteTieTolerance = 1e-12;

struct SamplerConfig {
  double epsilon = 0.2;
  std::uint64_t seed = 0;
  std::size_t hypernode_cap = 100;
  std::size_t k_min = 1;
  std::size_t k_max_cap = 64;
};

struct Candidate {
  NodeId id;
  double wmnc;
  // Bit r set when the candidate shares a neighbor reached through one of the
  // target's relation-r edges.
  std::uint32_t relations;
};

struct SampledSubgraph {
  NodeId target = 0;
  // Ranked by WMNC descending, then id ascending.
  std::vector<Candidate> candidates;
  std::vector<NodeId> k_top;
  std::vector<NodeId> n_random;
  std::vector<NodeId> neighbor_closure;
  std::uint32_t target_relations = 0;

  std::uint32_t relations_of(NodeId candidate) const;
  // members grouped by relation; a member appears in every relation it links through.
  std::vector<std::vector<NodeId>> by_relation(std::span<const NodeId> members,
                                               std::size_t num_relations) const;
  std::vector<NodeId> candidate_ids() const;
};

/// Candidate two-hop anchors of `target` with hypernode capping applied to
/// every node on the way, together with their relation masks. Sorted by id.
std::vector<Candidate> capped_two_hop(const TransactionGraph& g, NodeId target,
                                      std::size_t cap, std::uint64_t seed);

SampledSubgraph sample_neighborhood(const TransactionGraph& g, NodeId target,
                                    const SamplerConfig& cfg);

// One sample per target; independent across targets, so the OpenMP version
// matches the serial one exactly.
std::vector<SampledSubgraph> sample_neighborhoods(const TransactionGraph& g,
                                                  std::span<const NodeId> targets,
                                                  const SamplerConfig& cfg);
std::vector<SampledSubgraph> sample_neighborhoods_serial(const TransactionGraph& g,
                                                         std::span<const NodeId> targets,
                                                         const SamplerConfig& cfg);

}  // namespace jagnn
