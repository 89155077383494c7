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

#include "jagnn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jagnn/kernels.hpp"

namespace jagnn {

Tape& Var::tape() const {
  if (!tape_) throw NumericError("use of an empty Var");
  return *tape_;
}

const Tensor& Var::value() const { return tape().value(id_); }

Tensor Var::grad() const { return tape().grad(id_); }

Var Tape::variable(Tensor value) {
  if (!value.all_finite()) throw NumericError("non-finite parameter value");
  nodes_.push_back(Node{std::move(value), Tensor(), false, true, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value) {
  if (!value.all_finite()) throw NumericError("non-finite constant value");
  nodes_.push_back(Node{std::move(value), Tensor(), false, false, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, const std::vector<Var>& parents, BackwardFn backward,
                 const char* op) {
  if (!value.all_finite()) throw NumericError(std::string("non-finite value produced by ") + op);
  bool needs_grad = false;
  for (const Var& p : parents) {
    if (&p.tape() != this) throw NumericError(std::string(op) + ": operands on different tapes");
    needs_grad = needs_grad || nodes_[p.id()].requires_grad;
  }
  nodes_.push_back(Node{std::move(value), Tensor(), false, needs_grad,
                        needs_grad ? std::move(backward) : nullptr});
  return Var(this, nodes_.size() - 1);
}

Tensor& Tape::grad_slot(std::size_t id) {
  Node& n = nodes_.at(id);
  if (!n.grad_ready) {
    n.grad = Tensor(n.value.shape(), 0.0);
    n.grad_ready = true;
  }
  return n.grad;
}

Tensor Tape::grad(std::size_t id) const {
  const Node& n = nodes_.at(id);
  return n.grad_ready ? n.grad : Tensor(n.value.shape(), 0.0);
}

void Tape::backward(Var loss) {
  if (!loss.valid() || nodes_.empty()) throw NumericError("backward called before any forward pass");
  if (&loss.tape() != this) throw NumericError("backward on a variable from another tape");
  if (nodes_[loss.id()].value.size() != 1) {
    throw NumericError("backward requires a scalar loss, got shape " +
                       shape_string(nodes_[loss.id()].value.shape()));
  }
  for (Node& n : nodes_) {
    n.grad_ready = false;
    n.grad = Tensor();
  }
  grad_slot(loss.id())[0] = 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad_ready && n.backward) n.backward(*this, i);
  }
}

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw NumericError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                       shape_string(b.shape()));
  }
}

void require_matrix_like(const Tensor& a, const char* op) {
  if (a.rank() == 0) throw NumericError(std::string(op) + ": scalar operand");
}

// Accumulates the output gradient into a parent that requires it.
template <typename F>
void into(Tape& t, Var parent, F&& f) {
  if (t.requires_grad(parent.id())) f(t.grad_slot(parent.id()));
}

}  // namespace

Var matmul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || bv.rank() == 0 || av.cols() != bv.rows()) {
    throw NumericError("matmul: shape mismatch " + shape_string(av.shape()) + " x " +
                       shape_string(bv.shape()));
  }
  const std::size_t m = av.rows(), k = av.cols(), n = bv.cols();
  Tensor out = bv.rank() == 1 ? Tensor({m}) : Tensor::matrix(m, n);
  kernels::matmul(av.data(), bv.data(), out.data(), m, k, n);
  return a.tape().record(std::move(out), {a, b}, [a, b, m, k, n](Tape& t, std::size_t self) {
    const Tensor g = t.grad(self);
    into(t, a, [&](Tensor& ga) { kernels::matmul_nt(g.data(), b.value().data(), ga.data(), m, n, k, true); });
    into(t, b, [&](Tensor& gb) { kernels::matmul_tn(a.value().data(), g.data(), gb.data(), k, m, n, true); });
  }, "matmul");
}

Var matmul_nt(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || bv.rank() != 2 || av.cols() != bv.cols()) {
    throw NumericError("matmul_nt: shape mismatch " + shape_string(av.shape()) + " x " +
                       shape_string(bv.shape()) + "^T");
  }
  const std::size_t m = av.rows(), k = av.cols(), n = bv.rows();
  Tensor out = Tensor::matrix(m, n);
  kernels::matmul_nt(av.data(), bv.data(), out.data(), m, k, n);
  return a.tape().record(std::move(out), {a, b}, [a, b, m, k, n](Tape& t, std::size_t self) {
    const Tensor g = t.grad(self);
    into(t, a, [&](Tensor& ga) { kernels::matmul(g.data(), b.value().data(), ga.data(), m, n, k, true); });
    into(t, b, [&](Tensor& gb) { kernels::matmul_tn(g.data(), a.value().data(), gb.data(), n, m, k, true); });
  }, "matmul_nt");
}

Var add(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "add");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) { for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i]; });
    into(t, b, [&](Tensor& gb) { for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i]; });
  }, "add");
}

Var sub(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "sub");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.value()[i];
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) { for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i]; });
    into(t, b, [&](Tensor& gb) { for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i]; });
  }, "sub");
}

Var mul(Var a, Var b) {
  require_same_shape(a.value(), b.value(), "mul");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  return a.tape().record(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) { for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b.value()[i]; });
    into(t, b, [&](Tensor& gb) { for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a.value()[i]; });
  }, "mul");
}

Var add_row(Var a, Var row) {
  const Tensor& av = a.value();
  const Tensor& rv = row.value();
  require_matrix_like(av, "add_row");
  if (rv.size() != av.cols()) {
    throw NumericError("add_row: row of size " + std::to_string(rv.size()) + " for " +
                       std::to_string(av.cols()) + " columns");
  }
  Tensor out = av;
  const std::size_t m = av.rows(), n = av.cols();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] += rv[j];
  }
  return a.tape().record(std::move(out), {a, row}, [a, row, m, n](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) { for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i]; });
    into(t, row, [&](Tensor& gr) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) gr[j] += g[i * n + j];
      }
    });
  }, "add_row");
}

Var scale(Var a, double factor) {
  Tensor out = a.value();
  for (double& x : out.data()) x *= factor;
  return a.tape().record(std::move(out), {a}, [a, factor](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) { for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * factor; });
  }, "scale");
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw NumericError("concat: no inputs");
  const std::vector<Var> ps(parts.begin(), parts.end());
  const bool flat = ps[0].value().rank() == 1;
  std::size_t rows = ps[0].value().rows();
  std::size_t total = 0;
  for (const Var& p : ps) {
    const Tensor& v = p.value();
    if ((v.rank() == 1) != flat || v.rank() == 0) throw NumericError("concat: mixed ranks");
    if (!flat && v.rows() != rows) throw NumericError("concat: row count mismatch");
    total += flat ? v.size() : v.cols();
  }
  if (flat) rows = 1;
  Tensor out = flat ? Tensor({total}) : Tensor::matrix(rows, total);
  std::size_t offset = 0;
  std::vector<std::size_t> offsets;
  for (const Var& p : ps) {
    const Tensor& v = p.value();
    const std::size_t w = flat ? v.size() : v.cols();
    offsets.push_back(offset);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < w; ++j) out[i * total + offset + j] = v[i * w + j];
    }
    offset += w;
  }
  return ps[0].tape().record(std::move(out), ps, [ps, offsets, rows, total, flat](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      into(t, ps[k], [&](Tensor& gp) {
        const std::size_t w = flat ? gp.size() : gp.cols();
        for (std::size_t i = 0; i < rows; ++i) {
          for (std::size_t j = 0; j < w; ++j) gp[i * w + j] += g[i * total + offsets[k] + j];
        }
      });
    }
  }, "concat");
}

Var sum_all(Var a) {
  double s = 0.0;
  for (double x : a.value().data()) s += x;
  return a.tape().record(Tensor::scalar(s), {a}, [a](Tape& t, std::size_t self) {
    const double g = t.grad_slot(self)[0];
    into(t, a, [&](Tensor& ga) { for (double& x : ga.data()) x += g; });
  }, "sum_all");
}

Var mean_all(Var a) {
  const double n = static_cast<double>(a.value().size());
  if (n == 0) throw NumericError("mean_all: empty tensor");
  return scale(sum_all(a), 1.0 / n);
}

Var mean_of(std::span<const Var> parts) {
  if (parts.empty()) throw NumericError("mean_of: no inputs");
  const std::vector<Var> ps(parts.begin(), parts.end());
  Tensor out(ps[0].value().shape(), 0.0);
  for (const Var& p : ps) {
    require_same_shape(out, p.value(), "mean_of");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += p.value()[i];
  }
  const double inv = 1.0 / static_cast<double>(ps.size());
  for (double& x : out.data()) x *= inv;
  return ps[0].tape().record(std::move(out), ps, [ps, inv](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    for (const Var& p : ps) {
      into(t, p, [&](Tensor& gp) { for (std::size_t i = 0; i < g.size(); ++i) gp[i] += g[i] * inv; });
    }
  }, "mean_of");
}

Var maximum_of(std::span<const Var> parts) {
  if (parts.empty()) throw NumericError("maximum_of: no inputs");
  const std::vector<Var> ps(parts.begin(), parts.end());
  Tensor out = ps[0].value();
  std::vector<std::uint32_t> arg(out.size(), 0);
  for (std::size_t k = 1; k < ps.size(); ++k) {
    require_same_shape(out, ps[k].value(), "maximum_of");
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (ps[k].value()[i] > out[i]) {
        out[i] = ps[k].value()[i];
        arg[i] = static_cast<std::uint32_t>(k);
      }
    }
  }
  return ps[0].tape().record(std::move(out), ps, [ps, arg](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      into(t, ps[k], [&](Tensor& gp) {
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (arg[i] == k) gp[i] += g[i];
        }
      });
    }
  }, "maximum_of");
}

Var mean_cols(Var a) {
  const Tensor& av = a.value();
  require_matrix_like(av, "mean_cols");
  const std::size_t m = av.rows(), h = av.cols();
  Tensor out = Tensor::matrix(m, 1);
  const double inv = 1.0 / static_cast<double>(h);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < h; ++j) s += av[i * h + j];
    out[i] = s * inv;
  }
  return a.tape().record(std::move(out), {a}, [a, m, h, inv](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < h; ++j) ga[i * h + j] += g[i] * inv;
      }
    });
  }, "mean_cols");
}

Var leaky_relu(Var x, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) throw NumericError("leaky_relu: slope must lie in (0, 1)");
  Tensor out = x.value();
  for (double& v : out.data()) v = v >= 0.0 ? v : slope * v;
  return x.tape().record(std::move(out), {x}, [x, slope](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, x, [&](Tensor& gx) {
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += x.value()[i] >= 0.0 ? g[i] : slope * g[i];
    });
  }, "leaky_relu");
}

Var relu(Var x) {
  Tensor out = x.value();
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return x.tape().record(std::move(out), {x}, [x](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, x, [&](Tensor& gx) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (x.value()[i] > 0.0) gx[i] += g[i];
      }
    });
  }, "relu");
}

Var sigmoid(Var x) {
  Tensor out = x.value();
  for (double& v : out.data()) {
    if (v >= 0.0) {
      v = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      v = e / (1.0 + e);
    }
  }
  return x.tape().record(std::move(out), {x}, [x](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    const Tensor& yv = t.value(self);
    into(t, x, [&](Tensor& gx) {
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * yv[i] * (1.0 - yv[i]);
    });
}, "sigmoid");
}

Var log(Var x) {
  Tensor out = x.value();
  for (double& v : out.data()) v = std::log(v);
  return x.tape().record(std::move(out), {x}, [x](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, x, [&](Tensor& gx) {
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] / x.value()[i];
    });
  }, "log");
}

Var gather_rows(Var a, std::vector<std::uint32_t> index) {
  const Tensor& av = a.value();
  require_matrix_like(av, "gather_rows");
  const std::size_t n = av.cols(), m = av.rows();
  Tensor out = av.rank() == 1 ? Tensor({index.size()}) : Tensor::matrix(index.size(), n);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= m) throw NumericError("gather_rows: index out of range");
    std::copy_n(av.data().begin() + static_cast<std::ptrdiff_t>(index[i] * n), n,
                out.data().begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  return a.tape().record(std::move(out), {a}, [a, index = std::move(index), n](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) {
      for (std::size_t i = 0; i < index.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) ga[index[i] * n + j] += g[i * n + j];
      }
    });
  }, "gather_rows");
}

Var scatter_add_rows(Var a, std::vector<std::uint32_t> index, std::size_t out_rows) {
  const Tensor& av = a.value();
  require_matrix_like(av, "scatter_add_rows");
  if (index.size() != av.rows()) throw NumericError("scatter_add_rows: index length mismatch");
  const std::size_t n = av.cols();
  Tensor out = av.rank() == 1 ? Tensor({out_rows}) : Tensor::matrix(out_rows, n);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= out_rows) throw NumericError("scatter_add_rows: index out of range");
    for (std::size_t j = 0; j < n; ++j) out[index[i] * n + j] += av[i * n + j];
  }
  return a.tape().record(std::move(out), {a}, [a, index = std::move(index), n](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) {
      for (std::size_t i = 0; i < index.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += g[index[i] * n + j];
      }
    });
  }, "scatter_add_rows");
}

Var scale_rows(Var a, Var col) {
  const Tensor& av = a.value();
  const Tensor& cv = col.value();
  require_matrix_like(av, "scale_rows");
  if (cv.size() != av.rows()) throw NumericError("scale_rows: scale length mismatch");
  const std::size_t m = av.rows(), n = av.cols();
  Tensor out = av;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] *= cv[i];
  }
  return a.tape().record(std::move(out), {a, col}, [a, col, m, n](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) {
      const Tensor& cv = col.value();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += g[i * n + j] * cv[i];
      }
    });
    into(t, col, [&](Tensor& gc) {
      const Tensor& av = a.value();
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += g[i * n + j] * av[i * n + j];
        gc[i] += s;
      }
    });
  }, "scale_rows");
}

Var propagate(Var a, Var weight, std::vector<std::uint32_t> src, std::vector<std::uint32_t> dst,
              std::size_t out_rows) {
  const Tensor& av = a.value();
  const Tensor& wv = weight.value();
  require_matrix_like(av, "propagate");
  if (src.size() != dst.size() || wv.size() != src.size()) {
    throw NumericError("propagate: edge list length mismatch");
  }
  const std::size_t n = av.cols(), m = av.rows();
  Tensor out = Tensor::matrix(out_rows, n);
  for (std::size_t e = 0; e < src.size(); ++e) {
    if (src[e] >= m || dst[e] >= out_rows) throw NumericError("propagate: index out of range");
    const double w = wv[e];
    const double* x = av.data().data() + src[e] * n;
    double* y = &out[dst[e] * n];
    for (std::size_t j = 0; j < n; ++j) y[j] += w * x[j];
  }
  return a.tape().record(std::move(out), {a, weight},
                         [a, weight, src = std::move(src), dst = std::move(dst), n](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, a, [&](Tensor& ga) {
      const Tensor& wv = weight.value();
      for (std::size_t e = 0; e < src.size(); ++e) {
        const double w = wv[e];
        const double* gy = g.data().data() + dst[e] * n;
        double* gx = &ga[src[e] * n];
        for (std::size_t j = 0; j < n; ++j) gx[j] += w * gy[j];
      }
    });
    into(t, weight, [&](Tensor& gw) {
      const Tensor& av = a.value();
      for (std::size_t e = 0; e < src.size(); ++e) {
        const double* gy = g.data().data() + dst[e] * n;
        const double* x = av.data().data() + src[e] * n;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += gy[j] * x[j];
        gw[e] += s;
      }
    });
  }, "propagate");
}

Var masked_softmax(Var logits, std::vector<std::uint32_t> group, std::size_t num_groups) {
  const Tensor& x = logits.value();
  require_matrix_like(x, "masked_softmax");
  const std::size_t m = x.rows(), h = x.cols();
  if (group.size() != m) throw NumericError("masked_softmax: group index length mismatch");
  std::vector<std::size_t> count(num_groups, 0);
  for (std::uint32_t g : group) {
    if (g >= num_groups) throw NumericError("masked_softmax: group id out of range");
    ++count[g];
  }
  for (std::size_t g = 0; g < num_groups; ++g) {
    if (count[g] == 0) throw NumericError("masked_softmax: empty group " + std::to_string(g));
  }
  std::vector<double> peak(num_groups * h, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < h; ++c) {
      double& p = peak[group[i] * h + c];
      p = std::max(p, x[i * h + c]);
    }
  }
  Tensor out(x.shape());
  std::vector<double> denom(num_groups * h, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < h; ++c) {
      const double e = std::exp(x[i * h + c] - peak[group[i] * h + c]);
      out[i * h + c] = e;
      denom[group[i] * h + c] += e;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < h; ++c) out[i * h + c] /= denom[group[i] * h + c];
  }
  return logits.tape().record(std::move(out), {logits},
                              [logits, group = std::move(group), num_groups, m, h](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    const Tensor& yv = t.value(self);
    std::vector<double> dot(num_groups * h, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < h; ++c) dot[group[i] * h + c] += yv[i * h + c] * g[i * h + c];
    }
    into(t, logits, [&](Tensor& gx) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t c = 0; c < h; ++c) {
          gx[i * h + c] += yv[i * h + c] * (g[i * h + c] - dot[group[i] * h + c]);
        }
      }
    });
  }, "masked_softmax");
}

Var layer_norm(Var x, Var gain, Var bias, double eps) {
  const Tensor& xv = x.value();
  require_matrix_like(xv, "layer_norm");
  const std::size_t m = xv.rows(), n = xv.cols();
  if (gain.value().size() != n || bias.value().size() != n) {
    throw NumericError("layer_norm: gain/bias size mismatch");
  }
  Tensor normalized(xv.shape());
  std::vector<double> inv_std(m);
  for (std::size_t i = 0; i < m; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += xv[i * n + j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = xv[i * n + j] - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < n; ++j) normalized[i * n + j] = (xv[i * n + j] - mean) * inv_std[i];
  }
  Tensor out(xv.shape());
  const Tensor& gv = gain.value();
  const Tensor& bv = bias.value();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = normalized[i * n + j] * gv[j] + bv[j];
  }
  return x.tape().record(std::move(out), {x, gain, bias},
                         [x, gain, bias, normalized = std::move(normalized), inv_std = std::move(inv_std),
                          m, n](Tape& t, std::size_t self) {
    const Tensor& g = t.grad_slot(self);
    into(t, gain, [&](Tensor& gg) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) gg[j] += g[i * n + j] * normalized[i * n + j];
      }
    });
    into(t, bias, [&](Tensor& gb) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) gb[j] += g[i * n + j];
      }
    });
    into(t, x, [&](Tensor& gx) {
      const Tensor& gv = gain.value();
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t i = 0; i < m; ++i) {
        double mean_d = 0.0, mean_dx = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double d = g[i * n + j] * gv[j];
          mean_d += d;
          mean_dx += d * normalized[i * n + j];
        }
        mean_d *= inv_n;
        mean_dx *= inv_n;
        for (std::size_t j = 0; j < n; ++j) {
          const double d = g[i * n + j] * gv[j];
          gx[i * n + j] += inv_std[i] * (d - mean_d - normalized[i * n + j] * mean_dx);
        }
      }
    });
  }, "layer_norm");
}

Var binary_cross_entropy(Var probabilities, const Tensor& labels) {
  const Tensor& p = probabilities.value();
  if (p.size() != labels.size() || p.size() == 0) {
    throw NumericError("binary_cross_entropy: prediction/label length mismatch");
  }
  const double n = static_cast<double>(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double y = labels[i];
    if (y != 0.0 && y != 1.0) throw NumericError("binary_cross_entropy: labels must be 0 or 1");
    const double q = std::clamp(p[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    total += y * std::log(q) + (1.0 - y) * std::log(1.0 - q);
  }
  return probabilities.tape().record(Tensor::scalar(-total / n), {probabilities},
                                     [probabilities, labels, n](Tape& t, std::size_t self) {
    const double g = t.grad_slot(self)[0];
    into(t, probabilities, [&](Tensor& gp) {
      const Tensor& p = probabilities.value();
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < kProbabilityClamp || p[i] > 1.0 - kProbabilityClamp) continue;
        const double y = labels[i];
        gp[i] += -g / n * (y / p[i] - (1.0 - y) / (1.0 - p[i]));
      }
    });
  }, "binary_cross_entropy");
}

}  // namespace jagnn
