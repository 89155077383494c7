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

#include "jagnn/graphstore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "jagnn/csv.hpp"
#include "jagnn/rng.hpp"

namespace jagnn {

namespace {

constexpr double kUnscored = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TransactionGraph::TransactionGraph(std::size_t feature_dim, std::size_t num_relations)
    : feature_dim_(feature_dim), num_relations_(num_relations) {
  if (num_relations == 0 || num_relations > kMaxRelations) {
    throw GraphError("relation count must be in [1, " + std::to_string(kMaxRelations) + "]");
  }
}

NodeId TransactionGraph::add_node(NodeRole role, std::span<const double> features) {
  if (finalized_) throw GraphError("graph is finalized");
  if (features.size() != feature_dim_) {
    throw GraphError("inconsistent feature dimension: expected " + std::to_string(feature_dim_) +
                     ", got " + std::to_string(features.size()));
  }
  for (double x : features) {
    if (!std::isfinite(x)) throw GraphError("non-finite feature value");
  }
  const auto id = static_cast<NodeId>(roles_.size());
  roles_.push_back(role);
  features_.insert(features_.end(), features.begin(), features.end());
  if (role == NodeRole::kAnchor) anchors_.push_back(id);
  labels_.push_back(-1);
  fraud_scores_.push_back(0.0);
  timestamps_.push_back(0);
  has_timestamp_.push_back(0);
  return id;
}

EdgeIndex TransactionGraph::add_edge(NodeId u, NodeId v, RelationId relation) {
  if (finalized_) throw GraphError("graph is finalized");
  check_node(u);
  check_node(v);
  if (relation >= num_relations_) {
    throw GraphError("relation " + std::to_string(relation) + " out of range");
  }
  if (roles_[u] == roles_[v]) throw GraphError("non-bipartite edge");
  Edge e = roles_[u] == NodeRole::kAnchor ? Edge{u, v, relation} : Edge{v, u, relation};
  edges_.push_back(e);
  scores_.push_back(kUnscored);
  return static_cast<EdgeIndex>(edges_.size() - 1);
}

void TransactionGraph::set_label(NodeId anchor, double fraud_score, std::int64_t timestamp,
                                 double label_threshold) {
  check_node(anchor);
  if (roles_[anchor] != NodeRole::kAnchor) throw GraphError("label on non-anchor node");
  if (!(fraud_score >= 0.0 && fraud_score <= 100.0)) {
    throw GraphError("fraud score must lie in [0, 100]");
  }
  labels_[anchor] = fraud_score >= label_threshold ? 1 : 0;
  fraud_scores_[anchor] = fraud_score;
  timestamps_[anchor] = timestamp;
  has_timestamp_[anchor] = 1;
}

void TransactionGraph::set_timestamp(NodeId anchor, std::int64_t timestamp) {
  check_node(anchor);
  if (roles_[anchor] != NodeRole::kAnchor) throw GraphError("timestamp on non-anchor node");
  timestamps_[anchor] = timestamp;
  has_timestamp_[anchor] = 1;
}

void TransactionGraph::finalize() {
  const std::size_t n = roles_.size();
  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.anchor + 1];
    ++offsets_[e.neighbor + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.assign(offsets_.back(), Incidence{});
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeIndex i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    adjacency_[cursor[e.anchor]++] = Incidence{e.neighbor, e.relation, i};
    adjacency_[cursor[e.neighbor]++] = Incidence{e.anchor, e.relation, i};
  }
  finalized_ = true;
}

std::size_t TransactionGraph::num_edges(RelationId relation) const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [&](const Edge& e) { return e.relation == relation; }));
}

NodeRole TransactionGraph::role(NodeId v) const {
  check_node(v);
  return roles_[v];
}

std::span<const double> TransactionGraph::features(NodeId v) const {
  check_node(v);
  return {features_.data() + static_cast<std::size_t>(v) * feature_dim_, feature_dim_};
}

std::span<const Incidence> TransactionGraph::incident(NodeId v) const {
  require_finalized();
  check_node(v);
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool TransactionGraph::edge_scored(EdgeIndex e) const { return !std::isnan(scores_.at(e)); }

void TransactionGraph::set_edge_score(EdgeIndex e, double score) {
  if (!(score > 0.0) || !std::isfinite(score)) {
    throw GraphError("edge score must be finite and strictly positive");
  }
  scores_.at(e) = score;
}

bool TransactionGraph::has_label(NodeId v) const {
  check_node(v);
  return labels_[v] >= 0;
}

int TransactionGraph::label(NodeId v) const {
  if (!has_label(v)) throw GraphError("node " + std::to_string(v) + " has no label");
  return labels_[v];
}

double TransactionGraph::fraud_score(NodeId v) const {
  check_node(v);
  return fraud_scores_[v];
}

bool TransactionGraph::has_timestamp(NodeId v) const {
  check_node(v);
  return has_timestamp_[v] != 0;
}

std::int64_t TransactionGraph::timestamp(NodeId v) const {
  if (!has_timestamp(v)) throw GraphError("node " + std::to_string(v) + " has no timestamp");
  return timestamps_[v];
}

TransactionGraph TransactionGraph::restricted_to(const std::vector<bool>& visible_anchor) const {
  if (visible_anchor.size() != num_nodes()) throw GraphError("visibility mask size mismatch");
  TransactionGraph out(feature_dim_, num_relations_);
  out.roles_ = roles_;
  out.features_ = features_;
  out.anchors_ = anchors_;
  out.labels_ = labels_;
  out.fraud_scores_ = fraud_scores_;
  out.timestamps_ = timestamps_;
  out.has_timestamp_ = has_timestamp_;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!visible_anchor[edges_[i].anchor]) continue;
    out.edges_.push_back(edges_[i]);
    out.scores_.push_back(scores_[i]);
  }
  out.finalize();
  return out;
}

void TransactionGraph::check_node(NodeId v) const {
  if (v >= roles_.size()) throw GraphError("unknown node " + std::to_string(v));
}

void TransactionGraph::require_finalized() const {
  if (!finalized_) throw GraphError("graph is not finalized");
}

GraphFiles GraphFiles::in_directory(const std::filesystem::path& dir) {
  return {dir / "nodes.csv", dir / "edges.csv", dir / "labels.csv"};
}

TransactionGraph load_graph(const std::filesystem::path& node_file,
                            const std::filesystem::path& edge_file,
                            const std::filesystem::path& label_file,
                            const LoadOptions& options) {
  struct NodeRow {
    std::int64_t id;
    NodeRole role;
    std::vector<double> features;
    std::size_t line;
  };
  csv::Reader nodes(node_file);
  if (nodes.header().size() < 2) nodes.fail("node header needs node_id,role[,feat_*]");
  const std::size_t dim = nodes.header().size() - 2;
  std::vector<NodeRow> rows;
  while (nodes.next()) {
    const auto& f = nodes.fields();
    if (f.size() != dim + 2) {
      nodes.fail("inconsistent feature dimension: expected " + std::to_string(dim) +
                 " features, got " + std::to_string(f.size() < 2 ? 0 : f.size() - 2));
    }
    NodeRow row{nodes.as_int(0), NodeRole::kAnchor, std::vector<double>(dim), nodes.line()};
    if (f[1] == "anchor") {
      row.role = NodeRole::kAnchor;
    } else if (f[1] == "neighbor") {
      row.role = NodeRole::kNeighbor;
    } else {
      nodes.fail("unknown role '" + f[1] + "'");
    }
    for (std::size_t k = 0; k < dim; ++k) row.features[k] = nodes.as_double(k + 2);
    rows.push_back(std::move(row));
  }
  std::vector<const NodeRow*> by_id(rows.size(), nullptr);
  for (const NodeRow& row : rows) {
    if (row.id < 0 || static_cast<std::size_t>(row.id) >= rows.size() || by_id[row.id] != nullptr) {
      throw GraphError(node_file.string() + ":" + std::to_string(row.line) +
                       ": node ids must be unique and dense in [0, " +
                       std::to_string(rows.size()) + ")");
    }
    by_id[row.id] = &row;
  }

  struct EdgeRow {
    std::int64_t src, dst, relation;
    std::size_t line;
  };
  csv::Reader edges(edge_file);
  std::vector<EdgeRow> edge_rows;
  std::int64_t max_relation = 0;
  while (edges.next()) {
    if (edges.fields().size() != 3) edges.fail("expected src_id,dst_id,relation_id");
    EdgeRow e{edges.as_int(0), edges.as_int(1), edges.as_int(2), edges.line()};
    const auto n = static_cast<std::int64_t>(rows.size());
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      edges.fail("edge references unknown node");
    }
    if (e.relation < 0 || e.relation >= static_cast<std::int64_t>(kMaxRelations)) {
      edges.fail("relation id out of range");
    }
    if (by_id[e.src]->role == by_id[e.dst]->role) {
      throw GraphError("non-bipartite edge at line " + std::to_string(e.line) + " of " +
                       edge_file.string());
    }
    max_relation = std::max(max_relation, e.relation);
    edge_rows.push_back(e);
  }

  TransactionGraph g(dim, static_cast<std::size_t>(max_relation) + 1);
  for (const NodeRow* row : by_id) g.add_node(row->role, row->features);
  for (const EdgeRow& e : edge_rows) {
    g.add_edge(static_cast<NodeId>(e.src), static_cast<NodeId>(e.dst),
               static_cast<RelationId>(e.relation));
  }

  csv::Reader labels(label_file);
  std::vector<bool> seen(rows.size(), false);
  while (labels.next()) {
    if (labels.fields().size() != 3) labels.fail("expected node_id,fraud_score,timestamp");
    const std::int64_t id = labels.as_int(0);
    if (id < 0 || id >= static_cast<std::int64_t>(rows.size())) labels.fail("unknown node");
    if (by_id[id]->role != NodeRole::kAnchor) labels.fail("label row for a neighbor node");
    if (seen[id]) labels.fail("duplicate label row");
    seen[id] = true;
    // An empty score marks an unlabeled anchor that still has a time.
    if (labels.fields()[1].empty()) {
      g.set_timestamp(static_cast<NodeId>(id), labels.as_int(2));
      continue;
    }
    const double score = labels.as_double(1);
    if (score < 0.0 || score > 100.0) labels.fail("fraud score must lie in [0, 100]");
    g.set_label(static_cast<NodeId>(id), score, labels.as_int(2), options.label_threshold);
  }
  g.finalize();
  return g;
}

TransactionGraph load_graph_dir(const std::filesystem::path& dir, const LoadOptions& options) {
  const auto files = GraphFiles::in_directory(dir);
  return load_graph(files.nodes, files.edges, files.labels, options);
}

void save_graph_dir(const TransactionGraph& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto files = GraphFiles::in_directory(dir);
  char buf[64];
  {
    std::ofstream out(files.nodes);
    out << "node_id,role";
    for (std::size_t k = 0; k < g.feature_dim(); ++k) out << ",feat_" << k;
    out << '\n';
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      out << v << (g.is_anchor(v) ? ",anchor" : ",neighbor");
      for (double x : g.features(v)) {
        std::snprintf(buf, sizeof buf, ",%.17g", x);
        out << buf;
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(files.edges);
    out << "src_id,dst_id,relation_id\n";
    for (const Edge& e : g.edges()) out << e.anchor << ',' << e.neighbor << ',' << e.relation << '\n';
  }
  {
    std::ofstream out(files.labels);
    out << "node_id,fraud_score,timestamp\n";
    for (NodeId v : g.anchors()) {
      if (!g.has_timestamp(v)) continue;
      if (g.has_label(v)) {
        std::snprintf(buf, sizeof buf, "%.17g", g.fraud_score(v));
        out << v << ',' << buf << ',' << g.timestamp(v) << '\n';
      } else {
        out << v << ",," << g.timestamp(v) << '\n';
      }
    }
  }
}

std::vector<NodeId> two_hop_anchors(const TransactionGraph& g, NodeId a) {
  if (!g.is_anchor(a)) throw GraphError("node " + std::to_string(a) + " is not an anchor");
  std::vector<NodeId> out;
  for (const Incidence& hop1 : g.incident(a)) {
    for (const Incidence& hop2 : g.incident(hop1.other)) {
      if (hop2.other != a) out.push_back(hop2.other);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> undersample_hypernode(const TransactionGraph& g, NodeId v, std::size_t cap,
                                          std::uint64_t rng_seed) {
  if (cap == 0) throw GraphError("hypernode cap must be >= 1");
  std::vector<NodeId> adjacent;
  adjacent.reserve(g.incident(v).size());
  for (const Incidence& inc : g.incident(v)) adjacent.push_back(inc.other);
  std::sort(adjacent.begin(), adjacent.end());
  adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());
  if (adjacent.size() <= cap) return adjacent;
  // Partial Fisher-Yates over the sorted list keeps the draw reproducible.
  Rng rng = make_rng(rng_seed, v);
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + uniform_index(rng, adjacent.size() - i);
    std::swap(adjacent[i], adjacent[j]);
  }
  adjacent.resize(cap);
  std::sort(adjacent.begin(), adjacent.end());
  return adjacent;
}

std::size_t degree(const TransactionGraph& g, NodeId v) { return g.incident(v).size(); }

}  // namespace jagnn
