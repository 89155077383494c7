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
#include <span>

// Dense matrix kernels. Each OpenMP kernel has a serial reference that sums
// in the same order, so both produce identical bits; tests and the benchmark
// compare them. Matrices are row-major.
namespace jagnn::kernels {

// c (m x n) = [c +] a (m x k) * b (k x n)
void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c,
            std::size_t m, std::size_t k, std::size_t n, bool accumulate = false);
void matmul_serial(std::span<const double> a, std::span<const double> b, std::span<double> c,
                   std::size_t m, std::size_t k, std::size_t n, bool accumulate = false);

// c (m x n) = [c +] a (m x k) * b^T, with b stored n x k
void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n, bool accumulate = false);
void matmul_nt_serial(std::span<const double> a, std::span<const double> b, std::span<double> c,
                      std::size_t m, std::size_t k, std::size_t n, bool accumulate = false);

// c (m x n) = [c +] a^T * b, with a stored k x m and b stored k x n
void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t m, std::size_t k, std::size_t n, bool accumulate = false);
void matmul_tn_serial(std::span<const double> a, std::span<const double> b, std::span<double> c,
                      std::size_t m, std::size_t k, std::size_t n, bool accumulate = false);

// Below this many multiply-adds the OpenMP kernels stay on one thread.
inline constexpr std::size_t kParallelWorkThreshold = 1 << 15;

void set_threads(int threads);
int max_threads();

}  // namespace jagnn::kernels
