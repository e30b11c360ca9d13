// Copyright 2026 The CTSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTSR_KERNELS_HPP_
#define CTSR_KERNELS_HPP_

#include <cstddef>

#include "ctsr/tensor.hpp"

// Forward and backward kernels on plain tensors. Layouts are channel-last:
// conv2d input (h, w, c_in) with weights (kh, kw, c_in, c_out); conv1d input
// (t, c_in) with weights (kw, c_in, c_out); linear weights (n_in, n_out).
// Backward kernels accumulate into their gradient outputs; pass nullptr for a
// gradient that is not needed.
namespace ctsr::kernels {

// "Same" zero padding: out = ceil(n / stride) (never below 1), with any odd
// leftover padding placed after the high-index end.
struct SamePadding {
  std::size_t out = 0;
  std::size_t before = 0;
  std::size_t after = 0;
};
SamePadding ComputeSamePadding(std::size_t n, std::size_t kernel,
                               std::size_t stride);

Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& b,
              std::size_t stride);
void Conv2dBackward(const Tensor& x, const Tensor& w, std::size_t stride,
                    const Tensor& grad_out, Tensor* grad_x, Tensor* grad_w,
                    Tensor* grad_b);

Tensor Conv1d(const Tensor& x, const Tensor& w, const Tensor& b,
              std::size_t stride);
void Conv1dBackward(const Tensor& x, const Tensor& w, std::size_t stride,
                    const Tensor& grad_out, Tensor* grad_x, Tensor* grad_w,
                    Tensor* grad_b);

Tensor Relu(const Tensor& x);
Tensor Relu(Tensor&& x);
// Subgradient at exactly zero is 0.
void ReluBackward(const Tensor& x, const Tensor& grad_out, Tensor& grad_x);

// Mean over every axis except the last: (h, w, c) or (t, c) -> (c).
Tensor GlobalAvgPool(const Tensor& x);
void GlobalAvgPoolBackward(const Tensor& x, const Tensor& grad_out,
                           Tensor& grad_x);

// y = W^T x + b for x of shape (n_in).
Tensor Linear(const Tensor& x, const Tensor& w, const Tensor& b);
void LinearBackward(const Tensor& x, const Tensor& w, const Tensor& grad_out,
                    Tensor* grad_x, Tensor* grad_w, Tensor* grad_b);

}  // namespace ctsr::kernels

#endif  // CTSR_KERNELS_HPP_
