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

#include <filesystem>
#include <fstream>
#include <cmath>
#include <initializer_list>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "jagnn/graphstore.hpp"
#include "jagnn/rng.hpp"

namespace jagnn::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("jagnn_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

inline double normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng), u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Anchors 0..na-1, neighbors na..na+nn-1, features from `rng`, and edges
// given as (anchor, neighbor offset, relation).
inline TransactionGraph small_graph(std::size_t na, std::size_t nn, std::size_t dim, std::size_t relations,
                                    const std::vector<std::tuple<int, int, int>>& edges, Rng& rng) {
  TransactionGraph g(dim, relations);
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < na + nn; ++i) {
    for (double& t : x) t = normal(rng);
    g.add_node(i < na ? NodeRole::kAnchor : NodeRole::kNeighbor, x);
  }
  for (const auto& [a, n, r] : edges) {
    g.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(na + n), static_cast<RelationId>(r));
  }
  return g;
}

// Random bipartite graph; parallel edges allowed.
inline TransactionGraph random_graph(std::size_t na, std::size_t nn, std::size_t ne, std::size_t relations,
                                     std::size_t dim, Rng& rng) {
  std::vector<std::tuple<int, int, int>> edges;
  for (std::size_t e = 0; e < ne; ++e) {
    edges.emplace_back(static_cast<int>(uniform_index(rng, na)), static_cast<int>(uniform_index(rng, nn)),
                       static_cast<int>(uniform_index(rng, relations)));
  }
  TransactionGraph g = small_graph(na, nn, dim, relations, edges, rng);
  for (std::size_t a = 0; a < na; ++a) {
    g.set_label(static_cast<NodeId>(a), uniform01(rng) < 0.2 ? 90.0 : 10.0, static_cast<std::int64_t>(a));
  }
  g.finalize();
  return g;
}

}  // namespace jagnn::testing
