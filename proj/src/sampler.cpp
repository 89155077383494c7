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

#include "jagnn/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "jagnn/rng.hpp"

namespace jagnn {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

double score_edge(const TransactionGraph& g, const CovarianceSet& cov, EdgeIndex i,
                  EdgeScoreMode mode) {
  const Edge& e = g.edge(i);
  const double d =
      mahalanobis(g.features(e.anchor), g.features(e.neighbor), cov.relations.at(e.relation).inverse);
  return edge_score(d, mode);
}

// (neighbor, weight) pairs sorted by neighbor; parallel edges keep the max.
std::vector<std::pair<NodeId, double>> neighbor_weights(const TransactionGraph& g, NodeId a) {
  std::vector<std::pair<NodeId, double>> out;
  out.reserve(g.incident(a).size());
  for (const Incidence& inc : g.incident(a)) {
    if (!g.edge_scored(inc.edge)) {
      throw GraphError("edge " + std::to_string(inc.edge) + " has no score; run score_all_edges");
    }
    out.emplace_back(inc.other, g.edge_score(inc.edge));
  }
  std::sort(out.begin(), out.end());
  std::size_t w = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (w > 0 && out[w - 1].first == out[i].first) {
      out[w - 1].second = std::max(out[w - 1].second, out[i].second);
    } else {
      out[w++] = out[i];
    }
  }
  out.resize(w);
  return out;
}

double wmnc_from_weights(const std::vector<std::pair<NodeId, double>>& w1,
                         const std::vector<std::pair<NodeId, double>>& w2, std::size_t deg1,
                         std::size_t deg2) {
  const double denom = 2.0 * static_cast<double>(std::min(deg1, deg2));
  double total = 0.0;
  std::size_t common = 0;
  auto i = w1.begin();
  auto j = w2.begin();
  while (i != w1.end() && j != w2.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      total += (i->second + j->second) / denom;
      ++common;
      ++i;
      ++j;
    }
  }
  return common == 0 ? 0.0 : total / static_cast<double>(common);
}

// Incidences of v restricted to the hypernode-capped adjacent set.
std::vector<Incidence> capped_incidences(const TransactionGraph& g, NodeId v, std::size_t cap,
                                         std::uint64_t seed) {
  const auto all = g.incident(v);
  std::vector<Incidence> out(all.begin(), all.end());
  if (out.size() <= cap) return out;
  const auto keep = undersample_hypernode(g, v, cap, seed);
  if (keep.size() == out.size()) return out;
  std::erase_if(out, [&](const Incidence& inc) {
    return !std::binary_search(keep.begin(), keep.end(), inc.other);
  });
  return out;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double silhouette_term(double a, double b) {
  const double m = std::max(a, b);
  return m > 0.0 ? (b - a) / m : 0.0;
}

// Sweeps k over [k_min, k_max]; `ranked` excludes the target. Returns the
// best k, or 0 when no k leaves both clusters non-empty.
std::size_t best_split(const TransactionGraph& g, NodeId target, const std::vector<NodeId>& ranked,
                       std::size_t k_min, std::size_t k_max) {
  const std::size_t n = ranked.size() + 1;
  std::vector<std::span<const double>> pts;
  pts.reserve(n);
  pts.push_back(g.features(target));
  for (NodeId u : ranked) pts.push_back(g.features(u));

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i * n + j] = dist[j * n + i] = euclidean(pts[i], pts[j]);
    }
  }
  // Running distance sums from every point to the in / out clusters.
  std::vector<double> to_in(n), to_out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    to_in[i] = dist[i * n];
    for (std::size_t j = 1; j < n; ++j) to_out[i] += dist[i * n + j];
  }

  std::size_t best_k = 0;
  double best = 0.0;
  for (std::size_t k = 1; k <= k_max && k < n - 1; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      to_in[i] += dist[i * n + k];
      to_out[i] -= dist[i * n + k];
    }
    if (k < k_min) continue;
    const double in_size = static_cast<double>(k + 1);
    const double out_size = static_cast<double>(n - k - 1);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool inside = i <= k;
      const double own = inside ? in_size : out_size;
      if (own < 2.0) continue;
      const double a = (inside ? to_in[i] : to_out[i]) / (own - 1.0);
      const double b = inside ? to_out[i] / out_size : to_in[i] / in_size;
      total += silhouette_term(a, b);
    }
    const double s = total / static_cast<double>(n);
    if (best_k == 0 || s > best + kSilhouetteTieTolerance) {
      best = s;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace

CovarianceSet compute_covariances(const TransactionGraph& g, std::optional<double> ridge) {
  if (ridge && !(*ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
  const auto d = static_cast<Eigen::Index>(g.feature_dim());
  CovarianceSet out;
  std::vector<std::vector<NodeId>> members(g.num_relations());
  for (const Edge& e : g.edges()) {
    members[e.relation].push_back(e.anchor);
    members[e.relation].push_back(e.neighbor);
  }
  for (std::size_t r = 0; r < g.num_relations(); ++r) {
    auto& nodes = members[r];
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    RelationCovariance rc;
    rc.population = nodes.size();
    rc.mean = Eigen::VectorXd::Zero(d);
    for (NodeId v : nodes) rc.mean += as_vector(g.features(v));
    if (!nodes.empty()) rc.mean /= static_cast<double>(nodes.size());

    if (nodes.size() < 2) {
      rc.identity_fallback = true;
      rc.covariance = Eigen::MatrixXd::Identity(d, d);
      rc.inverse = Eigen::MatrixXd::Identity(d, d);
      out.warnings.push_back("relation " + std::to_string(r) + " has " +
                             std::to_string(nodes.size()) +
                             " participating nodes; using identity covariance");
      out.relations.push_back(std::move(rc));
      continue;
    }
    rc.covariance = Eigen::MatrixXd::Zero(d, d);
    for (NodeId v : nodes) {
      const Eigen::VectorXd c = as_vector(g.features(v)) - rc.mean;
      rc.covariance.noalias() += c * c.transpose();
    }
    rc.covariance /= static_cast<double>(nodes.size() - 1);
    if (!rc.covariance.allFinite()) throw GraphError("non-finite covariance");

    rc.ridge = ridge ? *ridge
                     : std::max(1e-6 * rc.covariance.trace() / static_cast<double>(d), 1e-9);
    const Eigen::MatrixXd reg =
        rc.covariance + rc.ridge * Eigen::MatrixXd::Identity(d, d);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(reg);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw GraphError("relation " + std::to_string(r) +
                       " covariance is not positive definite; increase the ridge");
    }
    rc.inverse = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
    rc.inverse = 0.5 * (rc.inverse + rc.inverse.transpose()).eval();
    out.relations.push_back(std::move(rc));
  }
  return out;
}

double mahalanobis(std::span<const double> a, std::span<const double> b,
                   const Eigen::MatrixXd& inverse) {
  if (a.size() != b.size() || static_cast<Eigen::Index>(a.size()) != inverse.rows() ||
      inverse.rows() != inverse.cols()) {
    throw std::invalid_argument("mahalanobis: dimension mismatch");
  }
  const Eigen::VectorXd diff = as_vector(a) - as_vector(b);
  const double q = diff.dot(inverse * diff);
  // Rounding can push q slightly negative for (near-)identical vectors.
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

double edge_score(double distance, EdgeScoreMode mode) {
  if (!(distance >= 0.0)) throw std::invalid_argument("edge_score: distance must be >= 0");
  if (mode == EdgeScoreMode::kSmoothed) return 1.0 / (1.0 + distance);
  return distance == 0.0 ? 1.0 : 1.0 / distance;
}

void score_all_edges(TransactionGraph& g, const CovarianceSet& cov, EdgeScoreMode mode) {
  if (cov.relations.size() != g.num_relations()) {
    throw std::invalid_argument("covariance set does not match relation count");
  }
  const auto m = static_cast<std::int64_t>(g.num_edges());
  std::vector<double> scores(g.num_edges());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < m; ++i) {
    scores[i] = score_edge(g, cov, static_cast<EdgeIndex>(i), mode);
  }
  for (EdgeIndex i = 0; i < scores.size(); ++i) g.set_edge_score(i, scores[i]);
}

void score_all_edges_serial(TransactionGraph& g, const CovarianceSet& cov, EdgeScoreMode mode) {
  if (cov.relations.size() != g.num_relations()) {
    throw std::invalid_argument("covariance set does not match relation count");
  }
  for (EdgeIndex i = 0; i < g.num_edges(); ++i) g.set_edge_score(i, score_edge(g, cov, i, mode));
}

WmncScore wmnc(const TransactionGraph& g, NodeId a1, NodeId a2) {
  if (!g.is_anchor(a1) || !g.is_anchor(a2)) throw GraphError("wmnc: arguments must be anchors");
  const double value =
      wmnc_from_weights(neighbor_weights(g, a1), neighbor_weights(g, a2), degree(g, a1), degree(g, a2));
  return {a1, a2, value};
}

std::vector<NodeId> select_k_top(const TransactionGraph& g, NodeId target,
                                 std::span<const WmncScore> scores, std::size_t k_min,
                                 std::size_t k_max) {
  if (scores.empty()) return {};
  if (k_min < 1 || k_min > k_max) throw std::invalid_argument("select_k_top: need 1 <= k_min <= k_max");
  std::vector<std::pair<double, NodeId>> order;
  order.reserve(scores.size());
  for (const WmncScore& s : scores) {
    const NodeId other = s.first == target ? s.second : s.first;
    order.emplace_back(s.value, other);
  }
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  std::vector<NodeId> ranked;
  ranked.reserve(order.size());
  for (const auto& [value, id] : order) ranked.push_back(id);
  if (ranked.size() <= k_min) return ranked;

  const std::size_t k = best_split(g, target, ranked, k_min, k_max);
  if (k == 0) return ranked;
  ranked.resize(k);
  return ranked;
}

std::uint32_t SampledSubgraph::relations_of(NodeId candidate) const {
  for (const Candidate& c : candidates) {
    if (c.id == candidate) return c.relations;
  }
  return 0;
}

std::vector<std::vector<NodeId>> SampledSubgraph::by_relation(std::span<const NodeId> members,
                                                              std::size_t num_relations) const {
  std::vector<std::vector<NodeId>> out(num_relations);
  for (NodeId u : members) {
    const std::uint32_t mask = relations_of(u);
    for (std::size_t r = 0; r < num_relations; ++r) {
      if (mask & (1u << r)) out[r].push_back(u);
    }
  }
  return out;
}

std::vector<NodeId> SampledSubgraph::candidate_ids() const {
  std::vector<NodeId> out;
  out.reserve(candidates.size());
  for (const Candidate& c : candidates) out.push_back(c.id);
  return out;
}

std::vector<Candidate> capped_two_hop(const TransactionGraph& g, NodeId target, std::size_t cap,
                                      std::uint64_t seed) {
  if (!g.is_anchor(target)) throw GraphError("node " + std::to_string(target) + " is not an anchor");
  std::vector<std::pair<NodeId, std::uint32_t>> hits;
  for (const Incidence& hop1 : capped_incidences(g, target, cap, seed)) {
    const std::uint32_t bit = 1u << hop1.relation;
    for (const Incidence& hop2 : capped_incidences(g, hop1.other, cap, seed)) {
      if (hop2.other != target) hits.emplace_back(hop2.other, bit);
    }
  }
  std::sort(hits.begin(), hits.end());
  std::vector<Candidate> out;
  for (const auto& [id, bit] : hits) {
    if (!out.empty() && out.back().id == id) {
      out.back().relations |= bit;
    } else {
      out.push_back({id, 0.0, bit});
    }
  }
  return out;
}

SampledSubgraph sample_neighborhood(const TransactionGraph& g, NodeId target,
                                    const SamplerConfig& cfg) {
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  SampledSubgraph out;
  out.target = target;
  out.candidates = capped_two_hop(g, target, cfg.hypernode_cap, cfg.seed);
  for (const Incidence& inc : g.incident(target)) out.target_relations |= 1u << inc.relation;

  const auto target_weights = neighbor_weights(g, target);
  const std::size_t target_degree = degree(g, target);
  for (Candidate& c : out.candidates) {
    c.wmnc = wmnc_from_weights(target_weights, neighbor_weights(g, c.id), target_degree,
                               degree(g, c.id));
  }
  std::sort(out.candidates.begin(), out.candidates.end(), [](const Candidate& x, const Candidate& y) {
    return x.wmnc != y.wmnc ? x.wmnc > y.wmnc : x.id < y.id;
  });

  const std::size_t c = out.candidates.size();
  if (c > 0) {
    std::vector<WmncScore> scores;
    scores.reserve(c);
    for (const Candidate& cand : out.candidates) scores.push_back({target, cand.id, cand.wmnc});
    const std::size_t k_min = std::max<std::size_t>(cfg.k_min, 1);
    const std::size_t k_max = std::max(k_min, std::min(c - 1, cfg.k_max_cap));
    out.k_top = select_k_top(g, target, scores, k_min, k_max);
  }

  std::vector<NodeId> remainder;
  for (std::size_t i = out.k_top.size(); i < c; ++i) remainder.push_back(out.candidates[i].id);
  const auto take = static_cast<std::size_t>(
      std::floor(cfg.epsilon * static_cast<double>(remainder.size()) + 0.5));
  Rng rng = make_rng(cfg.seed ^ 0x5A17'D0C5ULL, target);
  for (std::size_t i = 0; i < take && i < remainder.size(); ++i) {
    const std::size_t j = i + uniform_index(rng, remainder.size() - i);
    std::swap(remainder[i], remainder[j]);
  }
  out.n_random.assign(remainder.begin(),
                      remainder.begin() + static_cast<std::ptrdiff_t>(std::min(take, remainder.size())));
  std::sort(out.n_random.begin(), out.n_random.end());

  auto add_closure = [&](NodeId a) {
    for (const Incidence& inc : g.incident(a)) out.neighbor_closure.push_back(inc.other);
  };
  add_closure(target);
  for (NodeId u : out.k_top) add_closure(u);
  for (NodeId u : out.n_random) add_closure(u);
  std::sort(out.neighbor_closure.begin(), out.neighbor_closure.end());
  out.neighbor_closure.erase(std::unique(out.neighbor_closure.begin(), out.neighbor_closure.end()),
                             out.neighbor_closure.end());
  return out;
}

std::vector<SampledSubgraph> sample_neighborhoods(const TransactionGraph& g,
                                                  std::span<const NodeId> targets,
                                                  const SamplerConfig& cfg) {
  std::vector<SampledSubgraph> out(targets.size());
  const auto n = static_cast<std::int64_t>(targets.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = sample_neighborhood(g, targets[i], cfg);
    } catch (...) {
#pragma omp critical(jagnn_sample_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<SampledSubgraph> sample_neighborhoods_serial(const TransactionGraph& g,
                                                         std::span<const NodeId> targets,
                                                         const SamplerConfig& cfg) {
  std::vector<SampledSubgraph> out;
  out.reserve(targets.size());
  for (NodeId t : targets) out.push_back(sample_neighborhood(g, t, cfg));
  return out;
}

}  // namespace jagnn
