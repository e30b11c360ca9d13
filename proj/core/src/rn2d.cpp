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

#include "ctsr/rn2d.hpp"

#include <numeric>
#include <random>
#include <string>

#include "ctsr/distance.hpp"
#include "ctsr/error.hpp"
#include "ctsr/kernels.hpp"

namespace ctsr {

std::vector<const Parameter*> NeuralModel::Parameters() const {
  auto params = const_cast<NeuralModel*>(this)->Parameters();
  return {params.begin(), params.end()};
}

std::size_t NeuralModel::ParameterCount() const {
  std::size_t n = 0;
  for (const Parameter* p : Parameters()) n += p->value().size();
  return n;
}

void NeuralModel::ZeroGrad() {
  for (Parameter* p : Parameters()) p->ZeroGrad();
}

BottleneckBlockParams BottleneckBlockParams::Make(const std::string& prefix,
                                                  std::size_t n_in,
                                                  std::size_t n_neck,
                                                  std::size_t n_out) {
  return {LayerParams::Conv2d(prefix + ".reduce", 1, 1, n_in, n_neck, 1),
          LayerParams::Conv2d(prefix + ".spatial", 3, 3, n_neck, n_neck, 2),
          LayerParams::Conv2d(prefix + ".expand", 1, 1, n_neck, n_out, 1),
          LayerParams::Conv2d(prefix + ".skip", 1, 1, n_in, n_out, 2)};
}

std::array<LayerParams*, 4> BottleneckBlockParams::Layers() {
  return {&reduce, &spatial, &expand, &skip};
}

std::array<const LayerParams*, 4> BottleneckBlockParams::Layers() const {
  return {&reduce, &spatial, &expand, &skip};
}

Tensor BottleneckForward(const Tensor& x, const BottleneckBlockParams& p) {
  Tensor h = kernels::Relu(p.reduce.Forward(x));
  h = kernels::Relu(p.spatial.Forward(h));
  h = p.expand.Forward(h);
  const Tensor s = p.skip.Forward(x);
  auto hs = h.data();
  const auto ss = s.data();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double v = hs[i] + ss[i];
    hs[i] = v > 0.0 ? v : 0.0;
  }
  return h;
}

BoundBottleneck BoundBottleneck::Bind(BottleneckBlockParams& p) {
  return {BoundLayer::Bind(p.reduce), BoundLayer::Bind(p.spatial),
          BoundLayer::Bind(p.expand), BoundLayer::Bind(p.skip)};
}

Var BoundBottleneck::Apply(const Var& x) const {
  Var h = ops::Relu(reduce.Apply(x));
  h = ops::Relu(spatial.Apply(h));
  h = expand.Apply(h);
  return ops::Relu(ops::Add(skip.Apply(x), h));
}

Rn2dModel::Rn2dModel()
    : stem(LayerParams::Conv2d("stem", kStemKernel, kStemKernel, 1, kWidth,
                               kStemStride)),
      head(LayerParams::Linear("head", kWidth, 1)) {
  for (std::size_t i = 0; i < kBlockCount; ++i) {
    blocks[i] = BottleneckBlockParams::Make("blocks." + std::to_string(i),
                                            kWidth, kNeck, kWidth);
  }
  if (ParameterCount() != kParameterCount) {
    throw std::logic_error("Rn2dModel: parameter count " +
                           std::to_string(ParameterCount()) + " != " +
                           std::to_string(kParameterCount));
  }
}

Rn2dModel Rn2dModel::Initialized(std::uint64_t seed) {
  Rn2dModel m;
  std::mt19937_64 rng(seed);
  m.stem.InitHeUniform(rng);
  for (auto& b : m.blocks) {
    for (LayerParams* l : b.Layers()) l->InitHeUniform(rng);
  }
  m.head.InitHeUniform(rng);
  return m;
}

std::vector<Parameter*> Rn2dModel::Parameters() {
  std::vector<Parameter*> out{&stem.weights, &stem.bias};
  for (auto& b : blocks) {
    for (LayerParams* l : b.Layers()) {
      out.push_back(&l->weights);
      out.push_back(&l->bias);
    }
  }
  out.push_back(&head.weights);
  out.push_back(&head.bias);
  return out;
}

namespace {

void CheckFinite(const Tensor& t, std::size_t layer) {
  if (!t.AllFinite()) {
    throw NumericError("rn2d: non-finite activation at layer " +
                       std::to_string(layer));
  }
}

}  // namespace

double Rn2dModel::Score(std::span<const double> query,
                        std::span<const double> item) const {
  Tensor x = kernels::Relu(stem.Forward(PairwiseAbsMatrix(query, item).AsImage()));
  CheckFinite(x, 0);
  for (std::size_t i = 0; i < kBlockCount; ++i) {
    x = BottleneckForward(x, blocks[i]);
    CheckFinite(x, i + 1);
  }
  const Tensor out = head.Forward(kernels::GlobalAvgPool(x));
  CheckFinite(out, kBlockCount + 1);
  return out[0];
}

std::pair<Var, Var> Rn2dModel::TripletScores(
    std::span<const TripletValues> batch) {
  const BoundLayer bound_stem = BoundLayer::Bind(stem);
  std::vector<BoundBottleneck> bound_blocks;
  for (auto& b : blocks) bound_blocks.push_back(BoundBottleneck::Bind(b));
  const BoundLayer bound_head = BoundLayer::Bind(head);

  auto score = [&](std::span<const double> a, std::span<const double> b) {
    Var x = Var::Constant(PairwiseAbsMatrix(a, b).AsImage());
    x = ops::Relu(bound_stem.Apply(x));
    for (const auto& blk : bound_blocks) x = blk.Apply(x);
    return bound_head.Apply(ops::GlobalAvgPool(x));
  };

  std::vector<Var> pos;
  std::vector<Var> neg;
  for (const TripletValues& t : batch) {
    pos.push_back(score(t.anchor, t.positive));
    neg.push_back(score(t.anchor, t.negative));
  }
  return {ops::Stack(pos), ops::Stack(neg)};
}

std::unique_ptr<NeuralModel> Rn2dModel::Clone() const {
  return std::make_unique<Rn2dModel>(*this);
}

}  // namespace ctsr
