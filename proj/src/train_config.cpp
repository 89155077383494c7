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

#include "jagnn/train_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace jagnn {

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (epochs == 0) fail("epochs must be positive");
  if (batch_size < 2 || batch_size % 2 != 0) fail("batch_size must be even and at least 2");
  if (eval_batch_size == 0) fail("eval_batch_size must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) fail("adam_beta1 must lie in [0, 1)");
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) fail("adam_beta2 must lie in [0, 1)");
  if (!(adam_eps > 0.0)) fail("adam_eps must be positive");
  for (double f : split) {
    if (!(f >= 0.0 && f <= 1.0)) fail("split fractions must lie in [0, 1]");
  }
  if (std::abs(split[0] + split[1] + split[2] - 1.0) > 1e-9) fail("split fractions must sum to 1");
  if (split[0] == 0.0) fail("train fraction must be positive");
  if (threads < 0) fail("threads must be >= 0");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must lie in [0, 1]");
  if (hypernode_cap == 0) fail("hypernode_cap must be positive");
  if (k_min == 0 || k_max < k_min) fail("need 1 <= k_min <= k_max");
  if (ridge && !(*ridge >= 0.0)) fail("ridge must be >= 0");
  if (!(label_threshold >= 0.0 && label_threshold <= 100.0)) fail("label_threshold must lie in [0, 100]");
  if (layers == 0) fail("layers must be positive");
  if (heads == 0) fail("heads must be positive");
  if (width == 0) fail("width must be positive");
  if (jump_depth && *jump_depth > layers) fail("jump_depth must not exceed layers");
  if (extraction_depth != 0 && extraction_depth < 2 * layers) {
    fail("extraction_depth must cover 2 * layers hops");
  }
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) fail("leaky_slope must lie in (0, 1)");
}

ModelConfig TrainConfig::model_config(std::size_t feature_dim, std::size_t num_relations,
                                      std::size_t depth) const {
  ModelConfig m;
  m.feature_dim = feature_dim;
  m.num_relations = num_relations;
  m.layers = layers;
  m.heads = heads;
  m.width = width;
  m.jump_depth = depth;
  m.aggregation = jump_aggregation;
  m.variant = variant;
  m.leaky_slope = leaky_slope;
  m.validate();
  return m;
}

SamplerConfig TrainConfig::sampler_config() const {
  SamplerConfig s;
  // The sample variant has no jump path, so nothing is drawn at random.
  s.epsilon = variant == Variant::kSample ? 0.0 : epsilon;
  s.seed = seed;
  s.hypernode_cap = hypernode_cap;
  s.k_min = k_min;
  s.k_max_cap = k_max;
  return s;
}

nlohmann::json TrainConfig::to_json() const {
  nlohmann::json j;
  j["epochs"] = epochs;
  j["batch_size"] = batch_size;
  j["eval_batch_size"] = eval_batch_size;
  j["learning_rate"] = learning_rate;
  j["adam_beta1"] = adam_beta1;
  j["adam_beta2"] = adam_beta2;
  j["adam_eps"] = adam_eps;
  j["seed"] = seed;
  j["split"] = split;
  j["patience"] = patience;
  j["init"] = init == InitScheme::kZeros ? "zeros" : "glorot";
  j["max_batches_per_epoch"] = max_batches_per_epoch;
  j["threads"] = threads;
  j["epsilon"] = epsilon;
  j["hypernode_cap"] = hypernode_cap;
  j["k_min"] = k_min;
  j["k_max"] = k_max;
  j["ridge"] = ridge ? nlohmann::json(*ridge) : nlohmann::json(nullptr);
  j["edge_score"] = edge_score == EdgeScoreMode::kSmoothed ? "smoothed" : "reciprocal";
  j["label_threshold"] = label_threshold;
  j["layers"] = layers;
  j["heads"] = heads;
  j["width"] = width;
  j["jump_depth"] = jump_depth ? nlohmann::json(*jump_depth) : nlohmann::json("progressive");
  j["extraction_depth"] = resolved_extraction_depth();
  j["lambda"] = lambda;
  j["jump_aggregation"] = to_string(jump_aggregation);
  j["variant"] = to_string(variant);
  j["leaky_slope"] = leaky_slope;
  return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  TrainConfig c;
  const std::set<std::string> known = [] {
    std::set<std::string> k;
    const nlohmann::json defaults = TrainConfig{}.to_json();
    for (const auto& [key, value] : defaults.items()) k.insert(key);
    return k;
  }();
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (doc.contains(key)) doc.at(key).get_to(field);
    };
    get("epochs", c.epochs);
    get("batch_size", c.batch_size);
    get("eval_batch_size", c.eval_batch_size);
    get("learning_rate", c.learning_rate);
    get("adam_beta1", c.adam_beta1);
    get("adam_beta2", c.adam_beta2);
    get("adam_eps", c.adam_eps);
    get("seed", c.seed);
    get("split", c.split);
    get("patience", c.patience);
    if (doc.contains("init")) {
      const std::string s = doc.at("init").get<std::string>();
      if (s == "glorot") c.init = InitScheme::kGlorot;
      else if (s == "zeros") c.init = InitScheme::kZeros;
      else throw std::invalid_argument("config: init must be glorot or zeros");
    }
    get("max_batches_per_epoch", c.max_batches_per_epoch);
    get("threads", c.threads);
    get("epsilon", c.epsilon);
    get("hypernode_cap", c.hypernode_cap);
    get("k_min", c.k_min);
    get("k_max", c.k_max);
    if (doc.contains("ridge")) {
      if (doc.at("ridge").is_null()) c.ridge.reset();
      else c.ridge = doc.at("ridge").get<double>();
    }
    if (doc.contains("edge_score")) {
      const std::string s = doc.at("edge_score").get<std::string>();
      if (s == "reciprocal") c.edge_score = EdgeScoreMode::kReciprocal;
      else if (s == "smoothed") c.edge_score = EdgeScoreMode::kSmoothed;
      else throw std::invalid_argument("config: edge_score must be reciprocal or smoothed");
    }
    get("label_threshold", c.label_threshold);
    get("layers", c.layers);
    get("heads", c.heads);
    get("width", c.width);
    if (doc.contains("jump_depth")) {
      const auto& d = doc.at("jump_depth");
      if (d.is_string()) {
        if (d.get<std::string>() != "progressive") {
          throw std::invalid_argument("config: jump_depth must be an integer or \"progressive\"");
        }
        c.jump_depth.reset();
      } else {
        c.jump_depth = d.get<std::size_t>();
      }
    }
    get("extraction_depth", c.extraction_depth);
    get("lambda", c.lambda);
    if (doc.contains("jump_aggregation")) {
      c.jump_aggregation = parse_jump_aggregation(doc.at("jump_aggregation").get<std::string>());
    }
    if (doc.contains("variant")) c.variant = parse_variant(doc.at("variant").get<std::string>());
    get("leaky_slope", c.leaky_slope);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

TrainConfig TrainConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace jagnn
