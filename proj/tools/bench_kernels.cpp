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

// Serial reference vs OpenMP for the parallel kernels. Arg 0 selects the
// serial version, 1 the OpenMP one.

#include <benchmark/benchmark.h>

#include <vector>

#include "jagnn/kernels.hpp"
#include "jagnn/rng.hpp"
#include "jagnn/sampler.hpp"
#include "jagnn/synthgen.hpp"

namespace {

using namespace jagnn;

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  std::vector<double> v(n);
  for (double& x : v) x = uniform01(rng) - 0.5;
  return v;
}

void BM_Matmul(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const auto n = static_cast<std::size_t>(state.range(1));
  const std::vector<double> a = random_values(n * n, 1), b = random_values(n * n, 2);
  std::vector<double> c(n * n);
  for (auto _ : state) {
    if (parallel) {
      kernels::matmul(a, b, c, n, n, n);
    } else {
      kernels::matmul_serial(a, b, c, n, n, n);
    }
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n * n));
}
BENCHMARK(BM_Matmul)->ArgsProduct({{0, 1}, {64, 256}})->Unit(benchmark::kMicrosecond);

const Scenario& scenario() {
  static const Scenario s = [] {
    ScenarioConfig c;
    c.n_anchors = 5000;
    c.seed = 1;
    return generate(c);
  }();
  return s;
}

void BM_ScoreEdges(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  TransactionGraph g = scenario().graph;
  const CovarianceSet cov = compute_covariances(g);
  for (auto _ : state) {
    if (parallel) {
      score_all_edges(g, cov);
    } else {
      score_all_edges_serial(g, cov);
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.num_edges()));
}
BENCHMARK(BM_ScoreEdges)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SampleNeighborhoods(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  TransactionGraph g = scenario().graph;
  score_all_edges(g, compute_covariances(g));
  SamplerConfig cfg;
  cfg.epsilon = 0.2;
  const std::vector<NodeId>& targets = g.anchors();
  for (auto _ : state) {
    auto out = parallel ? sample_neighborhoods(g, targets, cfg) : sample_neighborhoods_serial(g, targets, cfg);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * targets.size()));
}
BENCHMARK(BM_SampleNeighborhoods)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
