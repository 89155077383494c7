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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace jagnn::oracle {

double wmnc_direct(const TransactionGraph& g, NodeId a1, NodeId a2) {
  std::size_t deg1 = 0, deg2 = 0;
  std::set<NodeId> n1, n2;
  for (const Edge& e : g.edges()) {
    if (e.anchor == a1) {
      ++deg1;
      n1.insert(e.neighbor);
    }
    if (e.anchor == a2) {
      ++deg2;
      n2.insert(e.neighbor);
    }
  }
  auto weight = [&](NodeId a, NodeId u) {
    double w = -1.0;
    for (EdgeIndex i = 0; i < g.num_edges(); ++i) {
      const Edge& e = g.edge(i);
      if (e.anchor == a && e.neighbor == u) w = std::max(w, g.edge_score(i));
    }
    return w;
  };
  double sum = 0.0;
  std::size_t common = 0;
  for (NodeId u : n1) {
    if (!n2.count(u)) continue;
    ++common;
    sum += (weight(a1, u) + weight(a2, u)) / (2.0 * static_cast<double>(std::min(deg1, deg2)));
  }
  return common == 0 ? 0.0 : sum / static_cast<double>(common);
}

namespace {

double dist(const TransactionGraph& g, NodeId a, NodeId b) {
  const auto x = g.features(a);
  const auto y = g.features(b);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(s);
}

}  // namespace

double silhouette_direct(const TransactionGraph& g, NodeId target,
                         const std::vector<NodeId>& ranked, std::size_t k) {
  std::vector<NodeId> in{target};
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < ranked.size(); ++i) (i < k ? in : out).push_back(ranked[i]);
  double total = 0.0;
  auto score = [&](NodeId p, const std::vector<NodeId>& own, const std::vector<NodeId>& other) {
    if (own.size() < 2) return 0.0;
    double a = 0.0, b = 0.0;
    for (NodeId q : own) a += q == p ? 0.0 : dist(g, p, q);
    for (NodeId q : other) b += dist(g, p, q);
    a /= static_cast<double>(own.size() - 1);
    b /= static_cast<double>(other.size());
    const double m = std::max(a, b);
    return m > 0.0 ? (b - a) / m : 0.0;
  };
  for (NodeId p : in) total += score(p, in, out);
  for (NodeId p : out) total += score(p, out, in);
  return total / static_cast<double>(in.size() + out.size());
}

std::vector<NodeId> k_top_exhaustive(const TransactionGraph& g, NodeId target,
                                     std::span<const WmncScore> scores, std::size_t k_min,
                                     std::size_t k_max) {
  std::vector<std::pair<double, NodeId>> order;
  for (const WmncScore& s : scores) order.emplace_back(s.value, s.first == target ? s.second : s.first);
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  std::vector<NodeId> ranked;
  for (const auto& o : order) ranked.push_back(o.second);
  if (ranked.size() <= k_min) return ranked;
  std::size_t best_k = 0;
  double best = 0.0;
  for (std::size_t k = k_min; k <= k_max && k < ranked.size(); ++k) {
    const double s = silhouette_direct(g, target, ranked, k);
    if (best_k == 0 || s > best + kSilhouetteTieTolerance) {
      best = s;
      best_k = k;
    }
  }
  if (best_k == 0) return ranked;
  ranked.resize(best_k);
  return ranked;
}

double auc_pairwise(std::span<const double> scores, std::span<const int> labels) {
  double hits = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) hits += 1.0;
      else if (scores[i] == scores[j]) hits += 0.5;
    }
  }
  return hits / static_cast<double>(pairs);
}

namespace {

using Mat = std::vector<std::vector<double>>;

const Tensor& P(const ModelParams& p, const std::string& name) { return p.at(name); }

std::vector<double> linear(const Tensor& w, const std::vector<double>& x) {
  std::vector<double> y(w.rows(), 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) y[i] += w(i, j) * x[j];
  }
  return y;
}

std::uint32_t mask_of(const SampledSubgraph& s, NodeId u) {
  for (const Candidate& c : s.candidates) {
    if (c.id == u) return c.relations;
  }
  return 0;
}

}  // namespace

std::vector<double> dense_forward(const ModelParams& params, const Tensor& features,
                                  const SampleCache& samples, std::span<const NodeId> targets) {
  const ModelConfig& cfg = params.config;
  const std::size_t V = features.rows(), W = cfg.width, H = cfg.heads, R = cfg.num_relations;
  std::vector<Mat> h(cfg.layers + 1, Mat(V));
  for (std::size_t v = 0; v < V; ++v) {
    std::vector<double> x(features.row(v).begin(), features.row(v).end());
    h[0][v] = linear(P(params, "input.weight"), x);
    for (std::size_t i = 0; i < W; ++i) h[0][v][i] += P(params, "input.bias")[i];
  }
  for (std::size_t n = 1; n <= cfg.layers; ++n) {
    const std::string ln = "layer" + std::to_string(n);
    Mat x(V);
    for (std::size_t v = 0; v < V; ++v) {
      const auto& a = h[n - 1][v];
      double mean = 0.0, var = 0.0;
      for (double t : a) mean += t;
      mean /= static_cast<double>(W);
      for (double t : a) var += (t - mean) * (t - mean);
      var /= static_cast<double>(W);
      x[v].resize(W);
      for (std::size_t i = 0; i < W; ++i) {
        x[v][i] = (a[i] - mean) / std::sqrt(var + 1e-5) * P(params, ln + ".norm.gain")[i] +
                  P(params, ln + ".norm.bias")[i];
      }
    }
    for (std::size_t v = 0; v < V; ++v) {
      std::vector<double> total(W, 0.0);
      const bool has = samples.contains(v);
      const std::uint32_t own = has ? samples.at(v).target_relations : 0u;
      for (std::size_t r = 0; r < R; ++r) {
        if (own ? !((own >> r) & 1u) : r != 0) continue;
        const std::string rl = ln + ".rel" + std::to_string(r);
        const Tensor& Wr = P(params, rl + ".weight");
        const Tensor& As = P(params, rl + ".attn_self");
        const Tensor& An = P(params, rl + ".attn_neigh");
        std::vector<NodeId> members{static_cast<NodeId>(v)};
        if (has) {
          const SampledSubgraph& s = samples.at(v);
          for (NodeId u : attention_members(s, cfg.variant)) {
            if ((mask_of(s, u) >> r) & 1u) members.push_back(u);
          }
        }
        const auto zv = linear(Wr, x[v]);
        Mat z;
        for (NodeId u : members) z.push_back(linear(Wr, x[u]));
        std::vector<double> alpha(members.size(), 0.0);
        for (std::size_t m = 0; m < H; ++m) {
          double self = 0.0;
          for (std::size_t i = 0; i < W; ++i) self += zv[i] * As(i, m);
          std::vector<double> e(members.size());
          double top = -INFINITY;
          for (std::size_t k = 0; k < members.size(); ++k) {
            double s = self;
            for (std::size_t i = 0; i < W; ++i) s += z[k][i] * An(i, m);
            e[k] = s > 0 ? s : cfg.leaky_slope * s;
            top = std::max(top, e[k]);
          }
          double sum = 0.0;
          for (double& t : e) sum += (t = std::exp(t - top));
          for (std::size_t k = 0; k < members.size(); ++k) alpha[k] += e[k] / sum / static_cast<double>(H);
        }
        for (std::size_t k = 0; k < members.size(); ++k) {
          for (std::size_t i = 0; i < W; ++i) total[i] += alpha[k] * z[k][i];
        }
      }
      for (double& t : total) t = std::max(t, 0.0);
      h[n][v] = std::move(total);
    }
  }

  const std::vector<std::size_t> jl = cfg.jump_layers();
  std::vector<double> out;
  for (NodeId t : targets) {
    std::vector<double> combined = h[cfg.layers][t];
    if (!cfg.has_jump()) {
      combined.resize(combined.size() + cfg.jump_width(), 0.0);
    } else {
      std::map<NodeId, double> weight;
      if (samples.contains(t)) {
        const SampledSubgraph& s = samples.at(t);
        const auto members = jump_members(s, cfg.variant);
        for (std::size_t r = 0; r < R; ++r) {
          std::vector<NodeId> in_r;
          for (NodeId u : members) {
            if ((mask_of(s, u) >> r) & 1u) in_r.push_back(u);
          }
          for (NodeId u : in_r) weight[u] += 1.0 / static_cast<double>(in_r.size());
        }
      }
      Mat per_layer;
      for (std::size_t n : jl) {
        std::vector<double> acc(W, 0.0);
        for (const auto& [u, w] : weight) {
          for (std::size_t i = 0; i < W; ++i) acc[i] += w * h[n - 1][u][i];
        }
        per_layer.push_back(std::move(acc));
      }
      std::vector<double> jump;
      if (cfg.aggregation == JumpAggregation::kConcat) {
        for (const auto& p : per_layer) jump.insert(jump.end(), p.begin(), p.end());
      } else {
        jump.assign(W, cfg.aggregation == JumpAggregation::kMax ? -INFINITY : 0.0);
        for (const auto& p : per_layer) {
          for (std::size_t i = 0; i < W; ++i) {
            if (cfg.aggregation == JumpAggregation::kMax) jump[i] = std::max(jump[i], p[i]);
            else jump[i] += p[i] / static_cast<double>(per_layer.size());
          }
        }
      }
      combined.insert(combined.end(), jump.begin(), jump.end());
    }
    double logit = P(params, "head.bias")[0];
    for (std::size_t i = 0; i < combined.size(); ++i) logit += combined[i] * P(params, "head.weight")[i];
    out.push_back(1.0 / (1.0 + std::exp(-logit)));
  }
  return out;
}

}  // namespace jagnn::oracle
