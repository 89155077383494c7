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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jagnn {

using NodeId = std::uint32_t;
using RelationId = std::uint16_t;
using EdgeIndex = std::uint32_t;

// Relation groups are tracked as bit masks, which bounds R.
inline constexpr std::size_t kMaxRelations = 32;

enum class NodeRole : std::uint8_t { kAnchor, kNeighbor };

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  NodeId anchor;
  NodeId neighbor;
  RelationId relation;
};

// One entry of a node's adjacency list.
struct Incidence {
  NodeId other;
  RelationId relation;
  EdgeIndex edge;
};

/// Bipartite multi-relation transaction graph.
///
/// Nodes are either anchors (the unit of prediction) or neighbors (shared
/// attribute nodes). Every edge joins one anchor and one neighbor under a
/// single relation and owns a mutable score slot. Build with add_node /
/// add_edge / set_label, then call finalize() before querying adjacency.
class TransactionGraph {
 public:
  TransactionGraph(std::size_t feature_dim, std::size_t num_relations);

  NodeId add_node(NodeRole role, std::span<const double> features);
  // Endpoints may be given in either order; throws GraphError for
  // anchor-anchor or neighbor-neighbor pairs.
  EdgeIndex add_edge(NodeId u, NodeId v, RelationId relation);
  void set_label(NodeId anchor, double fraud_score, std::int64_t timestamp,
                 double label_threshold = 50.0);
  // Time without a label, for anchors still awaiting a verdict.
  void set_timestamp(NodeId anchor, std::int64_t timestamp);
  void finalize();

  std::size_t num_nodes() const { return roles_.size(); }
  std::size_t num_relations() const { return num_relations_; }
  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_edges(RelationId relation) const;
  bool finalized() const { return finalized_; }

  NodeRole role(NodeId v) const;
  bool is_anchor(NodeId v) const { return role(v) == NodeRole::kAnchor; }
  const std::vector<NodeId>& anchors() const { return anchors_; }

  std::span<const double> features(NodeId v) const;
  std::span<const Incidence> incident(NodeId v) const;
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }

  // Edge-score slots start unset (NaN).
  double edge_score(EdgeIndex e) const { return scores_.at(e); }
  bool edge_scored(EdgeIndex e) const;
  void set_edge_score(EdgeIndex e, double score);

  bool has_label(NodeId v) const;
  int label(NodeId v) const;
  double fraud_score(NodeId v) const;
  bool has_timestamp(NodeId v) const;
  std::int64_t timestamp(NodeId v) const;

  // Copy keeping every node and label but only edges whose anchor is
  // flagged visible. Edge scores are carried over.
  TransactionGraph restricted_to(const std::vector<bool>& visible_anchor) const;

 private:
  void check_node(NodeId v) const;
  void require_finalized() const;

  std::size_t feature_dim_;
  std::size_t num_relations_;
  bool finalized_ = false;
  std::vector<NodeRole> roles_;
  std::vector<double> features_;
  std::vector<NodeId> anchors_;
  std::vector<Edge> edges_;
  std::vector<double> scores_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> adjacency_;
  std::vector<std::int8_t> labels_;
  std::vector<double> fraud_scores_;
  std::vector<std::int64_t> timestamps_;
  std::vector<std::uint8_t> has_timestamp_;
};

struct LoadOptions {
  double label_threshold = 50.0;
};

struct GraphFiles {
  std::filesystem::path nodes;
  std::filesystem::path edges;
  std::filesystem::path labels;

  static GraphFiles in_directory(const std::filesystem::path& dir);
};

TransactionGraph load_graph(const std::filesystem::path& node_file,
                            const std::filesystem::path& edge_file,
                            const std::filesystem::path& label_file,
                            const LoadOptions& options = {});
TransactionGraph load_graph_dir(const std::filesystem::path& dir,
                                const LoadOptions& options = {});

// Writes nodes.csv / edges.csv / labels.csv in the load_graph formats.
void save_graph_dir(const TransactionGraph& g, const std::filesystem::path& dir);

/// Anchors reachable through exactly one neighbor node, excluding `a`.
/// Sorted ascending.
std::vector<NodeId> two_hop_anchors(const TransactionGraph& g, NodeId a);

/// Distinct adjacent nodes of `v`; a uniform subset of size `cap` when there
/// are more than `cap`. Sorted ascending and reproducible per seed.
std::vector<NodeId> undersample_hypernode(const TransactionGraph& g, NodeId v,
                                          std::size_t cap, std::uint64_t rng_seed);

/// Incident edge count across all relations.
std::size_t degree(const TransactionGraph& g, NodeId v);

}  // namespace jagnn
