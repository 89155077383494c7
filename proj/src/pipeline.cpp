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

#include "jagnn/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace jagnn {

Tensor FeatureScaler::apply(const TransactionGraph& g) const {
  const std::size_t d = g.feature_dim();
  if (mean.size() != d || scale.size() != d) {
    throw std::invalid_argument("feature scaler dimension " + std::to_string(mean.size()) +
                                " does not match graph dimension " + std::to_string(d));
  }
  Tensor out = Tensor::matrix(g.num_nodes(), d);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto f = g.features(v);
    for (std::size_t j = 0; j < d; ++j) out(v, j) = (f[j] - mean[j]) / scale[j];
  }
  return out;
}

FeatureScaler fit_scaler(const TransactionGraph& g, std::span<const NodeId> anchors) {
  const std::size_t d = g.feature_dim();
  FeatureScaler s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  if (anchors.empty()) return s;
  for (NodeId v : anchors) {
    const auto f = g.features(v);
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += f[j];
  }
  const double n = static_cast<double>(anchors.size());
  for (double& m : s.mean) m /= n;
  std::vector<double> var(d, 0.0);
  for (NodeId v : anchors) {
    const auto f = g.features(v);
    for (std::size_t j = 0; j < d; ++j) var[j] += (f[j] - s.mean[j]) * (f[j] - s.mean[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / n);
    s.scale[j] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Phase build_phase(const TransactionGraph& g, const std::vector<bool>& visible,
                  const CovarianceSet& cov, const TrainConfig& cfg) {
  Phase p;
  p.graph = g.restricted_to(visible);
  score_all_edges(p.graph, cov, cfg.edge_score);
  std::vector<NodeId> targets;
  for (NodeId v : p.graph.anchors()) {
    if (v < visible.size() && visible[v]) targets.push_back(v);
  }
  p.samples = SampleCache(p.graph.num_nodes(),
                          sample_neighborhoods(p.graph, targets, cfg.sampler_config()));
  return p;
}

const Phase& PreparedData::phase(Split s) const {
  return s == Split::kTrain ? train : s == Split::kVal ? val : test;
}

const std::vector<NodeId>& PreparedData::anchors(Split s) const {
  return s == Split::kTrain ? splits.train : s == Split::kVal ? splits.val : splits.test;
}

PreparedData prepare(const TransactionGraph& g, const TrainConfig& cfg) {
  cfg.validate();
  PreparedData d;
  d.splits = make_splits(g, cfg.split);
  const std::vector<bool> train_mask = d.splits.mask({Split::kTrain});
  const TransactionGraph train_graph = g.restricted_to(train_mask);
  d.covariances = compute_covariances(train_graph, cfg.ridge);
  d.scaler = fit_scaler(g, d.splits.train);
  d.features = d.scaler.apply(g);
  d.train = build_phase(g, train_mask, d.covariances, cfg);
  d.val = build_phase(g, d.splits.mask({Split::kTrain, Split::kVal}), d.covariances, cfg);
  d.test = build_phase(g, d.splits.mask({Split::kTrain, Split::kVal, Split::kTest}), d.covariances,
                       cfg);
  return d;
}

std::vector<int> labels_of(const TransactionGraph& g, std::span<const NodeId> anchors) {
  std::vector<int> out;
  out.reserve(anchors.size());
  for (NodeId v : anchors) out.push_back(g.label(v));
  return out;
}

std::vector<NodeId> labeled(const TransactionGraph& g, std::span<const NodeId> anchors) {
  std::vector<NodeId> out;
  for (NodeId v : anchors) {
    if (g.has_label(v)) out.push_back(v);
  }
  return out;
}

}  // namespace jagnn
