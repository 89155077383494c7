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

#include "jagnn/splits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jagnn/rng.hpp"

namespace jagnn {

std::vector<bool> SplitAssignment::mask(std::initializer_list<Split> splits) const {
  std::vector<bool> out(tag.size(), false);
  auto set = [&](const std::vector<NodeId>& ids) {
    for (NodeId v : ids) out[v] = true;
  };
  for (Split s : splits) {
    set(s == Split::kTrain ? train : s == Split::kVal ? val : test);
  }
  return out;
}

SplitAssignment make_splits(const TransactionGraph& g, const std::array<double, 3>& fractions) {
  const double total = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");
  std::vector<NodeId> order = g.anchors();
  for (NodeId v : order) {
    if (!g.has_timestamp(v)) {
      throw std::invalid_argument("anchor " + std::to_string(v) + " has no timestamp");
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const auto ta = g.timestamp(a), tb = g.timestamp(b);
    return ta != tb ? ta < tb : a < b;
  });
  const std::size_t n = order.size();
  // The small offset keeps fractions such as 0.6 * 10 from rounding down to 5.
  const auto cut = [&](double f) {
    return std::min(n, static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9)));
  };
  const std::size_t n_train = cut(fractions[0]);
  const std::size_t n_train_val = std::max(n_train, cut(fractions[0] + fractions[1]));
  SplitAssignment s;
  s.tag.assign(g.num_nodes(), Split::kTest);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = order[i];
    if (i < n_train) {
      s.train.push_back(v);
      s.tag[v] = Split::kTrain;
    } else if (i < n_train_val) {
      s.val.push_back(v);
      s.tag[v] = Split::kVal;
    } else {
      s.test.push_back(v);
    }
  }
  return s;
}

namespace {

void shuffle(std::vector<NodeId>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
  }
}

}  // namespace

std::vector<std::vector<NodeId>> balanced_batches(const TransactionGraph& g,
                                                  const std::vector<NodeId>& anchors,
                                                  std::size_t batch_size, std::uint64_t seed,
                                                  std::size_t epoch, std::size_t max_batches) {
  if (batch_size < 2 || batch_size % 2 != 0) {
    throw std::invalid_argument("batch size must be even and at least 2");
  }
  std::vector<NodeId> fraud, legit;
  for (NodeId v : anchors) {
    if (!g.has_label(v)) continue;
    (g.label(v) == 1 ? fraud : legit).push_back(v);
  }
  if (fraud.empty() || legit.empty()) {
    throw std::invalid_argument("balanced batches need both classes in the training split");
  }
  const std::size_t half = batch_size / 2;
  Rng rng = make_rng(seed ^ 0xBA7C4E5ULL, epoch);
  shuffle(legit, rng);
  std::size_t count = std::max<std::size_t>(1, legit.size() / half);
  if (max_batches != 0) count = std::min(count, max_batches);

  std::vector<std::vector<NodeId>> batches;
  std::vector<NodeId> pool;
  std::size_t next_fraud = 0;
  for (std::size_t b = 0; b < count; ++b) {
    std::vector<NodeId> batch;
    batch.reserve(batch_size);
    for (std::size_t i = 0; i < half; ++i) {
      if (next_fraud == pool.size()) {
        pool = fraud;
        shuffle(pool, rng);
        next_fraud = 0;
      }
      batch.push_back(pool[next_fraud++]);
    }
    for (std::size_t i = 0; i < half; ++i) {
      // Fewer non-fraud anchors than half a batch: wrap around.
      batch.push_back(legit[(b * half + i) % legit.size()]);
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

}  // namespace jagnn
