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

#ifndef CTSR_LAYERS_HPP_
#define CTSR_LAYERS_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "ctsr/autograd.hpp"
#include "ctsr/tensor.hpp"

namespace ctsr {

enum class LayerKind { kConv2d, kConv1d, kLinear };

// Weights and bias of one convolution or dense layer. Convolutions always use
// "same" zero padding (see kernels::ComputeSamePadding).
struct LayerParams {
  LayerKind kind = LayerKind::kLinear;
  Parameter weights;
  Parameter bias;
  std::size_t stride = 1;

  // Zero-initialised layers; names become "<name>.weight" / "<name>.bias".
  static LayerParams Conv2d(const std::string& name, std::size_t kernel_h,
                            std::size_t kernel_w, std::size_t c_in,
                            std::size_t c_out, std::size_t stride);
  static LayerParams Conv1d(const std::string& name, std::size_t kernel_w,
                            std::size_t c_in, std::size_t c_out,
                            std::size_t stride);
  static LayerParams Linear(const std::string& name, std::size_t n_in,
                            std::size_t n_out);

  std::size_t fan_in() const;
  std::size_t out_features() const;
  std::size_t parameter_count() const;

  // Weights ~ U(-sqrt(6 / fan_in), sqrt(6 / fan_in)), bias = 0.
  void InitHeUniform(std::mt19937_64& rng);

  Tensor Forward(const Tensor& x) const;
};

// Graph leaves for one layer, bound for the lifetime of a training step.
struct BoundLayer {
  const LayerParams* layer = nullptr;
  Var weights;
  Var bias;

  static BoundLayer Bind(LayerParams& layer);
  Var Apply(const Var& x) const;
};

}  // namespace ctsr

#endif  // CTSR_LAYERS_HPP_
