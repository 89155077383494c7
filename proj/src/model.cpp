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

#include "jagnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "jagnn/rng.hpp"

namespace jagnn {

std::string to_string(JumpAggregation a) {
  switch (a) {
    case JumpAggregation::kMean: return "mean";
    case JumpAggregation::kConcat: return "concat";
    case JumpAggregation::kMax: return "max";
  }
  return "?";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kSample: return "sample";
    case Variant::kSolo: return "solo";
  }
  return "?";
}

JumpAggregation parse_jump_aggregation(const std::string& s) {
  if (s == "mean") return JumpAggregation::kMean;
  if (s == "concat") return JumpAggregation::kConcat;
  if (s == "max") return JumpAggregation::kMax;
  throw std::invalid_argument("unknown jump aggregation '" + s + "' (mean, concat, max)");
}

Variant parse_variant(const std::string& s) {
  if (s == "full") return Variant::kFull;
  if (s == "sample") return Variant::kSample;
  if (s == "solo") return Variant::kSolo;
  throw std::invalid_argument("unknown variant '" + s + "' (full, sample, solo)");
}

void ModelConfig::validate() const {
  if (feature_dim == 0) throw std::invalid_argument("feature_dim must be positive");
  if (num_relations == 0 || num_relations > kMaxRelations) {
    throw std::invalid_argument("num_relations must lie in [1, 32]");
  }
  if (layers == 0) throw std::invalid_argument("layers must be positive");
  if (heads == 0) throw std::invalid_argument("heads must be positive");
  if (width == 0) throw std::invalid_argument("width must be positive");
  if (jump_depth > layers) throw std::invalid_argument("jump_depth must not exceed layers");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) {
    throw std::invalid_argument("leaky_slope must lie in (0, 1)");
  }
}

std::vector<std::size_t> ModelConfig::jump_layers() const {
  if (!has_jump()) return {};
  // d = layers would reach layer 0, which has no predecessor.
  const std::size_t first = jump_depth >= layers ? 1 : layers - jump_depth;
  std::vector<std::size_t> out;
  for (std::size_t n = first; n <= layers; ++n) out.push_back(n);
  return out;
}

std::size_t ModelConfig::jump_width() const {
  if (aggregation == JumpAggregation::kConcat && has_jump()) return width * jump_layers().size();
  return width;
}

std::size_t ModelParams::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw std::invalid_argument("no parameter named '" + name + "'");
}

std::size_t ModelParams::num_scalars() const {
  std::size_t n = 0;
  for (const Tensor& t : tensors) n += t.size();
  return n;
}

namespace {

std::string layer_prefix(std::size_t n) { return "layer" + std::to_string(n); }

std::string rel_prefix(std::size_t n, std::size_t r) {
  return layer_prefix(n) + ".rel" + std::to_string(r);
}

// Offsets of the parameters in ModelParams order.
struct Layout {
  std::size_t layers, relations;
  std::size_t input_weight() const { return 0; }
  std::size_t input_bias() const { return 1; }
  std::size_t layer_base(std::size_t n) const { return 2 + (n - 1) * (2 + 3 * relations); }
  std::size_t norm_gain(std::size_t n) const { return layer_base(n); }
  std::size_t norm_bias(std::size_t n) const { return layer_base(n) + 1; }
  std::size_t weight(std::size_t n, std::size_t r) const { return layer_base(n) + 2 + 3 * r; }
  std::size_t attn_self(std::size_t n, std::size_t r) const { return weight(n, r) + 1; }
  std::size_t attn_neigh(std::size_t n, std::size_t r) const { return weight(n, r) + 2; }
  std::size_t head_weight() const { return layer_base(layers + 1); }
  std::size_t head_bias() const { return head_weight() + 1; }
  std::size_t count() const { return head_bias() + 1; }
};

Layout layout_of(const ModelConfig& cfg) { return Layout{cfg.layers, cfg.num_relations}; }

void glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& x : t.data()) x = (2.0 * uniform01(rng) - 1.0) * a;
}

}  // namespace

ModelParams init_params(const ModelConfig& cfg, InitScheme scheme, std::uint64_t seed) {
  cfg.validate();
  ModelParams p;
  p.config = cfg;
  const std::size_t w = cfg.width;
  auto add = [&](std::string name, Tensor t) {
    p.names.push_back(std::move(name));
    p.tensors.push_back(std::move(t));
  };
  add("input.weight", Tensor::matrix(w, cfg.feature_dim));
  add("input.bias", Tensor({w}));
  for (std::size_t n = 1; n <= cfg.layers; ++n) {
    add(layer_prefix(n) + ".norm.gain", Tensor({w}, 1.0));
    add(layer_prefix(n) + ".norm.bias", Tensor({w}));
    for (std::size_t r = 0; r < cfg.num_relations; ++r) {
      add(rel_prefix(n, r) + ".weight", Tensor::matrix(w, w));
      add(rel_prefix(n, r) + ".attn_self", Tensor::matrix(w, cfg.heads));
      add(rel_prefix(n, r) + ".attn_neigh", Tensor::matrix(w, cfg.heads));
    }
  }
  add("head.weight", Tensor({cfg.combined_width()}));
  add("head.bias", Tensor({1}));
  if (scheme == InitScheme::kZeros) return p;

  const Layout L = layout_of(cfg);
  auto rng_for = [&](std::size_t index) { return make_rng(seed, 0x1A17 + index); };
  {
    Rng rng = rng_for(L.input_weight());
    glorot(p.tensors[L.input_weight()], cfg.feature_dim, w, rng);
  }
  for (std::size_t n = 1; n <= cfg.layers; ++n) {
    for (std::size_t r = 0; r < cfg.num_relations; ++r) {
      for (std::size_t idx : {L.weight(n, r), L.attn_self(n, r), L.attn_neigh(n, r)}) {
        Rng rng = rng_for(idx);
        Tensor& t = p.tensors[idx];
        glorot(t, t.cols(), t.rows(), rng);
      }
    }
  }
  Rng rng = rng_for(L.head_weight());
  glorot(p.tensors[L.head_weight()], cfg.combined_width(), 1, rng);
  return p;
}

SampleCache::SampleCache(std::size_t num_nodes, std::vector<SampledSubgraph> samples)
    : samples_(std::move(samples)), index_(num_nodes, -1) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const NodeId t = samples_[i].target;
    if (t >= num_nodes) throw std::invalid_argument("sample target outside the graph");
    index_[t] = static_cast<std::int64_t>(i);
  }
}

const SampledSubgraph& SampleCache::at(NodeId v) const {
  if (!contains(v)) throw std::out_of_range("no sample for node " + std::to_string(v));
  return samples_[static_cast<std::size_t>(index_[v])];
}

std::vector<NodeId> attention_members(const SampledSubgraph& s, Variant v) {
  return v == Variant::kSolo ? s.candidate_ids() : s.k_top;
}

std::vector<NodeId> jump_members(const SampledSubgraph& s, Variant v) {
  switch (v) {
    case Variant::kFull: return s.n_random;
    case Variant::kSolo: return s.candidate_ids();
    case Variant::kSample: return {};
  }
  return {};
}

namespace {

// Insertion-ordered set of nodes with their list positions.
struct NodeList {
  std::vector<NodeId> ids;
  std::unordered_map<NodeId, std::uint32_t> pos;

  std::uint32_t insert(NodeId v) {
    auto [it, fresh] = pos.emplace(v, static_cast<std::uint32_t>(ids.size()));
    if (fresh) ids.push_back(v);
    return it->second;
  }
  std::uint32_t at(NodeId v) const { return pos.at(v); }
};

struct MemberMasks {
  std::vector<NodeId> ids;
  std::vector<std::uint32_t> masks;
};

MemberMasks masked(const SampledSubgraph& s, std::vector<NodeId> ids) {
  std::unordered_map<NodeId, std::uint32_t> lookup;
  lookup.reserve(s.candidates.size());
  for (const Candidate& c : s.candidates) lookup.emplace(c.id, c.relations);
  MemberMasks m;
  m.ids = std::move(ids);
  for (NodeId u : m.ids) {
    auto it = lookup.find(u);
    m.masks.push_back(it == lookup.end() ? 0u : it->second);
  }
  return m;
}

}  // namespace

BatchPlan build_plan(const ModelConfig& cfg, const SampleCache& samples,
                     std::span<const NodeId> targets) {
  const std::size_t N = cfg.layers;
  const std::size_t R = cfg.num_relations;
  BatchPlan plan;
  plan.targets.assign(targets.begin(), targets.end());
  plan.nodes.resize(N + 1);
  plan.edges.assign(N, std::vector<RelationEdges>(R));

  NodeList top;
  for (NodeId t : targets) plan.target_rows.push_back(top.insert(t));
  plan.nodes[N] = top.ids;

  const std::vector<std::size_t> jump_layers = cfg.jump_layers();
  std::vector<MemberMasks> jump_sets;
  for (NodeId t : top.ids) {
    jump_sets.push_back(samples.contains(t) ? masked(samples.at(t), jump_members(samples.at(t), cfg.variant))
                                            : MemberMasks{});
  }

  std::vector<NodeList> lists(N + 1);
  lists[N] = top;
  for (std::size_t n = N; n >= 1; --n) {
    NodeList& in = lists[n - 1];
    for (NodeId v : lists[n].ids) in.insert(v);
    std::vector<MemberMasks> attend;
    for (NodeId v : lists[n].ids) {
      if (!samples.contains(v)) {
        attend.emplace_back();
        continue;
      }
      const SampledSubgraph& s = samples.at(v);
      attend.push_back(masked(s, attention_members(s, cfg.variant)));
      for (NodeId u : attend.back().ids) in.insert(u);
    }
    if (std::find(jump_layers.begin(), jump_layers.end(), n) != jump_layers.end()) {
      for (const MemberMasks& j : jump_sets) {
        for (NodeId u : j.ids) in.insert(u);
      }
    }

    std::vector<RelationEdges>& rel = plan.edges[n - 1];
    for (std::uint32_t i = 0; i < lists[n].ids.size(); ++i) {
      const NodeId v = lists[n].ids[i];
      const std::uint32_t self = in.at(v);
      const std::uint32_t own = samples.contains(v) ? samples.at(v).target_relations : 0u;
      for (std::size_t r = 0; r < R; ++r) {
        // A node with no edges at all keeps a self-loop under relation 0.
        const bool active = own ? (own >> r) & 1u : r == 0;
        if (!active) continue;
        RelationEdges& e = rel[r];
        const auto g = static_cast<std::uint32_t>(e.num_groups++);
        auto push = [&](std::uint32_t src) {
          e.src.push_back(src);
          e.self.push_back(self);
          e.dst.push_back(i);
          e.group.push_back(g);
        };
        push(self);
        const MemberMasks& a = attend[i];
        for (std::size_t k = 0; k < a.ids.size(); ++k) {
          if ((a.masks[k] >> r) & 1u) push(in.at(a.ids[k]));
        }
      }
    }
  }
  for (std::size_t n = 0; n < N; ++n) plan.nodes[n] = lists[n].ids;

  for (std::size_t n : jump_layers) {
    JumpEdges je;
    const NodeList& in = lists[n - 1];
    for (std::uint32_t i = 0; i < jump_sets.size(); ++i) {
      const MemberMasks& j = jump_sets[i];
      std::map<NodeId, double> weight;
      for (std::size_t r = 0; r < R; ++r) {
        std::size_t count = 0;
        for (std::uint32_t m : j.masks) count += (m >> r) & 1u;
        if (count == 0) continue;
        const double w = 1.0 / static_cast<double>(count);
        for (std::size_t k = 0; k < j.ids.size(); ++k) {
          if ((j.masks[k] >> r) & 1u) weight[j.ids[k]] += w;
        }
      }
      for (const auto& [u, w] : weight) {
        je.src.push_back(in.at(u));
        je.dst.push_back(i);
        je.weight.push_back(w);
      }
    }
    plan.jump.push_back(std::move(je));
  }
  return plan;
}

ForwardResult forward(Tape& tape, const ModelConfig& cfg, std::span<const Var> params,
                      const Tensor& features, const BatchPlan& plan,
                      const ForwardOptions& options) {
  const Layout L = layout_of(cfg);
  if (params.size() != L.count()) throw std::invalid_argument("parameter count does not match config");
  if (features.rank() != 2 || features.cols() != cfg.feature_dim) {
    throw std::invalid_argument("feature matrix does not match feature_dim");
  }
  const std::size_t N = cfg.layers;

  Tensor x0 = Tensor::matrix(plan.nodes[0].size(), cfg.feature_dim);
  for (std::size_t i = 0; i < plan.nodes[0].size(); ++i) {
    const NodeId v = plan.nodes[0][i];
    if (v >= features.rows()) throw std::out_of_range("node outside the feature matrix");
    std::copy(features.row(v).begin(), features.row(v).end(), x0.row(i).begin());
  }
  std::vector<Var> h(N + 1);
  h[0] = add_row(matmul_nt(tape.constant(std::move(x0)), params[L.input_weight()]),
                 params[L.input_bias()]);

  for (std::size_t n = 1; n <= N; ++n) {
    const Var x = layer_norm(h[n - 1], params[L.norm_gain(n)], params[L.norm_bias(n)]);
    const std::size_t out_rows = plan.nodes[n].size();
    std::vector<Var> parts;
    for (std::size_t r = 0; r < cfg.num_relations; ++r) {
      const RelationEdges& e = plan.edges[n - 1][r];
      if (e.src.empty()) continue;
      const Var z = matmul_nt(x, params[L.weight(n, r)]);
      const Var zs = matmul(z, params[L.attn_self(n, r)]);
      const Var zn = matmul(z, params[L.attn_neigh(n, r)]);
      const Var logits = add(gather_rows(zs, e.self), gather_rows(zn, e.src));
      const Var alpha = masked_softmax(leaky_relu(logits, cfg.leaky_slope), e.group, e.num_groups);
      if (options.check_attention) {
        const Tensor& a = alpha.value();
        const std::size_t heads = a.cols();
        std::vector<double> sums(e.num_groups * heads, 0.0);
        for (std::size_t k = 0; k < e.group.size(); ++k) {
          for (std::size_t m = 0; m < heads; ++m) sums[e.group[k] * heads + m] += a(k, m);
        }
        for (double s : sums) {
          const double dev = std::abs(s - 1.0);
          if (options.stats) {
            options.stats->max_deviation = std::max(options.stats->max_deviation, dev);
          }
          if (dev > kAttentionSumTolerance) {
            throw NumericError("attention weights of layer " + std::to_string(n) + " relation " +
                               std::to_string(r) + " sum to " + std::to_string(s));
          }
        }
        if (options.stats) options.stats->groups_checked += sums.size();
      }
      if (options.on_attention) options.on_attention(n, r, alpha.value(), e);
      parts.push_back(propagate(z, mean_cols(alpha), e.src, e.dst, out_rows));
    }
    Var sum = parts.at(0);
    for (std::size_t k = 1; k < parts.size(); ++k) sum = add(sum, parts[k]);
    h[n] = relu(sum);
  }

  ForwardResult out;
  out.aggregate = h[N];
  const std::size_t rows = plan.nodes[N].size();
  if (!cfg.has_jump()) {
    out.jump = tape.constant(Tensor::matrix(rows, cfg.jump_width()));
  } else {
    const std::vector<std::size_t> layers = cfg.jump_layers();
    std::vector<Var> contributions;
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const JumpEdges& je = plan.jump.at(k);
      if (je.src.empty()) {
        contributions.push_back(tape.constant(Tensor::matrix(rows, cfg.width)));
        continue;
      }
      const Var w = tape.constant(Tensor({je.weight.size()}, je.weight));
      contributions.push_back(propagate(h[layers[k] - 1], w, je.src, je.dst, rows));
    }
    switch (cfg.aggregation) {
      case JumpAggregation::kMean: out.jump = mean_of(contributions); break;
      case JumpAggregation::kConcat: out.jump = concat(contributions); break;
      case JumpAggregation::kMax: out.jump = maximum_of(contributions); break;
    }
  }
  const Var parts[] = {out.aggregate, out.jump};
  out.combined = concat(parts);
  Var logits = add_row(matmul(out.combined, params[L.head_weight()]), params[L.head_bias()]);
  Var probs = sigmoid(logits);
  bool identity = plan.target_rows.size() == rows;
  for (std::size_t i = 0; identity && i < rows; ++i) identity = plan.target_rows[i] == i;
  if (!identity) {
    logits = gather_rows(logits, plan.target_rows);
    probs = gather_rows(probs, plan.target_rows);
  }
  out.logits = logits;
  out.probabilities = probs;
  return out;
}

LossParts loss(Var probabilities, const Tensor& labels, double lambda, std::size_t depth) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be non-negative");
  LossParts parts;
  parts.classification = binary_cross_entropy(probabilities, labels);
  parts.regularization = lambda * static_cast<double>(depth);
  Tape& tape = probabilities.tape();
  parts.total = add(parts.classification, tape.constant(Tensor::scalar(parts.regularization)));
  return parts;
}

std::vector<double> predict(const ModelParams& params, const Tensor& features,
                            const SampleCache& samples, std::span<const NodeId> targets,
                            std::size_t batch_size, AttentionStats* stats) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  std::vector<double> out;
  out.reserve(targets.size());
  for (std::size_t start = 0; start < targets.size(); start += batch_size) {
    const std::size_t end = std::min(targets.size(), start + batch_size);
    const BatchPlan plan = build_plan(params.config, samples, targets.subspan(start, end - start));
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& t : params.tensors) vars.push_back(tape.constant(t));
    ForwardOptions options;
    options.check_attention = true;
    options.stats = stats;
    const ForwardResult r = forward(tape, params.config, vars, features, plan, options);
    for (double p : r.probabilities.value().data()) out.push_back(p);
  }
  return out;
}

}  // namespace jagnn
