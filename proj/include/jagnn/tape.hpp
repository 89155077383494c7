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
#include <functional>
#include <span>
#include <vector>

#include "jagnn/tensor.hpp"

namespace jagnn {

class Tape;

/// Handle to a value recorded on a Tape.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  Tape& tape() const;
  std::size_t id() const { return id_; }
  const Tensor& value() const;
  // Zero-filled when backward() has not reached this variable.
  Tensor grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recording of primitive operations.
///
/// Nodes are appended in creation order, which is a topological order, so
/// backward() walks the record once from the loss down. A tape belongs to a
/// single thread.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf whose gradient is accumulated.
  Var variable(Tensor value);
  Var constant(Tensor value);

  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  const Tensor& value(std::size_t id) const { return nodes_.at(id).value; }
  // Zero tensor when backward() has not reached the node.
  Tensor grad(std::size_t id) const;
  bool requires_grad(std::size_t id) const { return nodes_.at(id).requires_grad; }

  // Used by op implementations.
  Var record(Tensor value, const std::vector<Var>& parents, BackwardFn backward, const char* op);
  Tensor& grad_slot(std::size_t id);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool grad_ready = false;
    bool requires_grad = false;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

// Primitive operations. All inputs must live on the same tape; every output
// is checked for NaN/Inf and raises NumericError.

Var matmul(Var a, Var b);
// a (m x k) times b^T for b stored (n x k); the linear-layer form with weights
// kept as (out x in).
Var matmul_nt(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
// Adds a row vector (1 x n or (n)) to every row of a.
Var add_row(Var a, Var row);
Var scale(Var a, double factor);
Var mul(Var a, Var b);
// Rank-1 inputs concatenate end to end; rank-2 inputs along columns.
Var concat(std::span<const Var> parts);
Var sum_all(Var a);
Var mean_all(Var a);
// Elementwise mean / max over same-shape tensors.
Var mean_of(std::span<const Var> parts);
Var maximum_of(std::span<const Var> parts);
// Mean over columns: (m x h) -> (m x 1).
Var mean_cols(Var a);

Var leaky_relu(Var x, double slope);
Var relu(Var x);
Var sigmoid(Var x);
Var log(Var x);

Var gather_rows(Var a, std::vector<std::uint32_t> index);
Var scatter_add_rows(Var a, std::vector<std::uint32_t> index, std::size_t out_rows);
// Row i of a multiplied by col[i]; col is (m x 1) or (m).
Var scale_rows(Var a, Var col);
// out[dst[e]] += weight[e] * a[src[e]] for every e; out has out_rows rows.
// Same result as scatter_add_rows(scale_rows(gather_rows(a, src), weight), dst)
// without the per-edge intermediates.
Var propagate(Var a, Var weight, std::vector<std::uint32_t> src, std::vector<std::uint32_t> dst,
              std::size_t out_rows);

// Softmax within groups of rows, independently per column. group[i] names
// the group of row i; every group in [0, num_groups) must be non-empty.
Var masked_softmax(Var logits, std::vector<std::uint32_t> group, std::size_t num_groups);

// Per-row standardization followed by an affine map with gain/bias (n).
Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);

// Mean binary cross-entropy of probabilities against 0/1 labels. Probabilities
// are clamped to [1e-12, 1 - 1e-12] before the logs.
Var binary_cross_entropy(Var probabilities, const Tensor& labels);

inline constexpr double kProbabilityClamp = 1e-12;

}  // namespace jagnn
