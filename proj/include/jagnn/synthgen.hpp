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
#include <vector>

#include "jagnn/graphstore.hpp"
#include "json.hpp"

namespace jagnn {

/// Knobs of the synthetic camouflage benchmark. The last feature dimension is
/// a 0/1 chargeback flag.
struct ScenarioConfig {
  std::size_t n_anchors = 10000;
  double fraud_rate = 0.0107;
  std::size_t n_relations = 3;
  std::size_t feature_dim = 8;
  std::size_t family_min = 2;
  std::size_t family_max = 8;
  std::size_t ring_min = 2;
  std::size_t ring_max = 5;
  double camouflage_fraction = 0.2;
  double blend = 0.85;
  // Camouflaged fraudsters per chargeback marker.
  std::size_t marker_fanout = 3;
  // Bipartite hops between a camouflaged fraudster and its marker: 2 or 4.
  std::size_t marker_hops = 2;
  // Chance that a family member links to the family's node in relation r;
  // missing entries default to the last one.
  std::vector<double> share_prob = {0.9, 0.7, 0.5};
  double cross_link_rate = 0.15;
  double hypernode_rate = 0.005;  // hypernodes per anchor
  std::size_t hypernode_min_degree = 101;
  std::size_t hypernode_max_degree = 160;
  double legit_chargeback_rate = 0.002;
  double center_spread = 1.0;
  double member_noise = 0.5;
  double fraud_shift = 1.5;
  double neighbor_noise = 0.1;
  std::int64_t time_span = 1000000;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static ScenarioConfig from_json(const nlohmann::json& doc);
};

struct GroundTruth {
  std::vector<int> label;             // per anchor id; -1 for neighbor nodes
  std::vector<bool> camouflaged;      // fraud anchors blended into a legit family
  std::vector<bool> marker;           // verified fraudsters carrying the chargeback flag
  std::vector<std::pair<NodeId, NodeId>> marker_links;  // (camouflaged, its marker)

  nlohmann::json to_json() const;
};

struct Scenario {
  TransactionGraph graph{1, 1};
  GroundTruth truth;
};

Scenario generate(const ScenarioConfig& cfg);

/// The small verified-fraudster picture: a family of legitimate members, a
/// verified fraudster with the chargeback flag tied in through one payment
/// node, and a new fraud node that joins the family and shares that payment
/// node. The new node carries a timestamp but no label.
struct CamouflageFixture {
  NodeId new_node = 0;
  NodeId verified = 0;
  std::vector<NodeId> family;
  std::vector<double> family_center;  // feature mean the family was drawn around
  nlohmann::json to_json() const;
};

struct CamouflageCase {
  Scenario scenario;  // background benchmark with the fixture planted in it
  CamouflageFixture fixture;
};

CamouflageCase camouflage_case(const ScenarioConfig& cfg);

// nodes.csv, edges.csv, labels.csv, ground_truth.json (+ fixture.json).
void write_scenario(const Scenario& s, const std::filesystem::path& dir);
void write_camouflage_case(const CamouflageCase& c, const std::filesystem::path& dir);

}  // namespace jagnn
