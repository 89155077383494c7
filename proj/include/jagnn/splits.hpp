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

#include <array>
#include <cstdint>
#include <vector>

#include "jagnn/graphstore.hpp"

namespace jagnn {

enum class Split : std::uint8_t { kTrain, kVal, kTest };

struct SplitAssignment {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;
  // Indexed by NodeId; anchors only.
  std::vector<Split> tag;

  std::vector<bool> mask(std::initializer_list<Split> splits) const;
};

/// Chronological split of all anchors: sorted by (timestamp, id), then cut at
/// floor(f_train * n) and floor((f_train + f_val) * n).
SplitAssignment make_splits(const TransactionGraph& g, const std::array<double, 3>& fractions);

/// Class-balanced batches over labeled anchors. Non-fraud anchors are drawn
/// without replacement from a per-epoch shuffle; fraud anchors cycle through
/// their own shuffles, so they repeat once exhausted. `max_batches` of 0 means
/// one pass over the non-fraud anchors.
std::vector<std::vector<NodeId>> balanced_batches(const TransactionGraph& g,
                                                  const std::vector<NodeId>& anchors,
                                                  std::size_t batch_size, std::uint64_t seed,
                                                  std::size_t epoch, std::size_t max_batches = 0);

}  // namespace jagnn
