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

#include "ctsr/layers.hpp"

#include <cmath>

#include "ctsr/kernels.hpp"

namespace ctsr {

LayerParams LayerParams::Conv2d(const std::string& name, std::size_t kernel_h,
                                std::size_t kernel_w, std::size_t c_in,
                                std::size_t c_out, std::size_t stride) {
  LayerParams p;
  p.kind = LayerKind::kConv2d;
  p.weights = Parameter(name + ".weight",
                        Tensor({kernel_h, kernel_w, c_in, c_out}));
  p.bias = Parameter(name + ".bias", Tensor({c_out}));
  p.stride = stride;
  return p;
}

LayerParams LayerParams::Conv1d(const std::string& name, std::size_t kernel_w,
                                std::size_t c_in, std::size_t c_out,
                                std::size_t stride) {
  LayerParams p;
  p.kind = LayerKind::kConv1d;
  p.weights = Parameter(name + ".weight", Tensor({kernel_w, c_in, c_out}));
  p.bias = Parameter(name + ".bias", Tensor({c_out}));
  p.stride = stride;
  return p;
}

LayerParams LayerParams::Linear(const std::string& name, std::size_t n_in,
                                std::size_t n_out) {
  LayerParams p;
  p.kind = LayerKind::kLinear;
  p.weights = Parameter(name + ".weight", Tensor({n_in, n_out}));
  p.bias = Parameter(name + ".bias", Tensor({n_out}));
  return p;
}

std::size_t LayerParams::fan_in() const {
  const Shape& s = weights.value().shape();
  return ShapeSize(s) / s.back();
}

std::size_t LayerParams::out_features() const {
  return weights.value().shape().back();
}

std::size_t LayerParams::parameter_count() const {
  return weights.value().size() + bias.value().size();
}

void LayerParams::InitHeUniform(std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in()));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& w : weights.value().data()) w = dist(rng);
  bias.value().Fill(0.0);
}

Tensor LayerParams::Forward(const Tensor& x) const {
  switch (kind) {
    case LayerKind::kConv2d:
      return kernels::Conv2d(x, weights.value(), bias.value(), stride);
    case LayerKind::kConv1d:
      return kernels::Conv1d(x, weights.value(), bias.value(), stride);
    case LayerKind::kLinear:
      return kernels::Linear(x, weights.value(), bias.value());
  }
  return {};
}

BoundLayer BoundLayer::Bind(LayerParams& layer) {
  return {&layer, Var::Param(layer.weights), Var::Param(layer.bias)};
}

Var BoundLayer::Apply(const Var& x) const {
  switch (layer->kind) {
    case LayerKind::kConv2d:
      return ops::Conv2d(x, weights, bias, layer->stride);
    case LayerKind::kConv1d:
      return ops::Conv1d(x, weights, bias, layer->stride);
    case LayerKind::kLinear:
      return ops::Linear(x, weights, bias);
  }
  return {};
}

}  // namespace ctsr
