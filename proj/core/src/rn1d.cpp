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

#include "ctsr/rn1d.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ctsr/error.hpp"
#include "ctsr/kernels.hpp"

namespace ctsr {
namespace {

double EmbeddingDistance(const Tensor& a, const Tensor& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Tensor AsColumn(std::span<const double> series) {
  if (series.size() < Rn1dEncoder::kMinLength) {
    throw std::invalid_argument(
        "rn1d: series length " + std::to_string(series.size()) +
        " is below the minimum of " + std::to_string(Rn1dEncoder::kMinLength));
  }
  return Tensor({series.size(), 1},
                std::vector<double>(series.begin(), series.end()));
}

struct BoundBlock1d {
  std::array<BoundLayer, 3> convs;
  std::optional<BoundLayer> shortcut;

  Var Apply(const Var& x) const {
    Var h = ops::Relu(convs[0].Apply(x));
    h = ops::Relu(convs[1].Apply(h));
    h = convs[2].Apply(h);
    const Var s = shortcut ? shortcut->Apply(x) : x;
    return ops::Relu(ops::Add(s, h));
  }
};

}  // namespace

ResidualBlock1dParams ResidualBlock1dParams::Make(const std::string& prefix,
                                                  std::size_t c_in,
                                                  std::size_t c_out) {
  const auto& k = Rn1dEncoder::kKernels;
  ResidualBlock1dParams p{
      {LayerParams::Conv1d(prefix + ".conv0", k[0], c_in, c_out, 1),
       LayerParams::Conv1d(prefix + ".conv1", k[1], c_out, c_out, 1),
       LayerParams::Conv1d(prefix + ".conv2", k[2], c_out, c_out, 1)},
      std::nullopt};
  if (c_in != c_out) {
    p.shortcut = LayerParams::Conv1d(prefix + ".shortcut", 1, c_in, c_out, 1);
  }
  return p;
}

std::vector<LayerParams*> ResidualBlock1dParams::Layers() {
  std::vector<LayerParams*> out{&convs[0], &convs[1], &convs[2]};
  if (shortcut) out.push_back(&*shortcut);
  return out;
}

Rn1dEncoder::Rn1dEncoder()
    : projection(LayerParams::Linear("projection", kChannels.back(),
                                     kEmbeddingDim)) {
  std::size_t c_in = 1;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i] = ResidualBlock1dParams::Make("blocks." + std::to_string(i), c_in,
                                            kChannels[i]);
    c_in = kChannels[i];
  }
}

Rn1dEncoder Rn1dEncoder::Initialized(std::uint64_t seed) {
  Rn1dEncoder e;
  std::mt19937_64 rng(seed);
  for (auto& b : e.blocks) {
    for (LayerParams* l : b.Layers()) l->InitHeUniform(rng);
  }
  e.projection.InitHeUniform(rng);
  return e;
}

std::vector<Parameter*> Rn1dEncoder::Parameters() {
  std::vector<Parameter*> out;
  for (auto& b : blocks) {
    for (LayerParams* l : b.Layers()) {
      out.push_back(&l->weights);
      out.push_back(&l->bias);
    }
  }
  out.push_back(&projection.weights);
  out.push_back(&projection.bias);
  return out;
}

Tensor Rn1dEncoder::Embed(std::span<const double> series) const {
  Tensor x = AsColumn(series);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    Tensor h = kernels::Relu(b.convs[0].Forward(x));
    h = kernels::Relu(b.convs[1].Forward(h));
    h = b.convs[2].Forward(h);
    const Tensor s = b.shortcut ? b.shortcut->Forward(x) : x;
    auto hs = h.data();
    const auto ss = s.data();
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const double v = hs[k] + ss[k];
      hs[k] = v > 0.0 ? v : 0.0;
    }
    if (!h.AllFinite()) {
      throw NumericError("rn1d: non-finite activation at block " +
                         std::to_string(i));
    }
    x = std::move(h);
  }
  return projection.Forward(kernels::GlobalAvgPool(x));
}

double Rn1dEncoder::Score(std::span<const double> query,
                          std::span<const double> item) const {
  return -EmbeddingDistance(Embed(query), Embed(item));
}

void Rn1dEncoder::Prepare(const SeriesSpans& database) {
  cached_database_ = database;
  cached_embeddings_.clear();
  cached_embeddings_.reserve(database.size());
  for (const auto& s : database) cached_embeddings_.push_back(Embed(s));
}

std::vector<double> Rn1dEncoder::ScoreDatabase(
    std::span<const double> query, const SeriesSpans& database) const {
  bool cached = database.size() == cached_database_.size();
  for (std::size_t i = 0; cached && i < database.size(); ++i) {
    cached = database[i].data() == cached_database_[i].data() &&
             database[i].size() == cached_database_[i].size();
  }
  const Tensor q = Embed(query);
  std::vector<double> scores;
  scores.reserve(database.size());
  for (std::size_t i = 0; i < database.size(); ++i) {
    scores.push_back(cached ? -EmbeddingDistance(q, cached_embeddings_[i])
                            : -EmbeddingDistance(q, Embed(database[i])));
  }
  return scores;
}

std::pair<Var, Var> Rn1dEncoder::TripletScores(
    std::span<const TripletValues> batch) {
  std::vector<BoundBlock1d> bound;
  for (auto& b : blocks) {
    BoundBlock1d bb{{BoundLayer::Bind(b.convs[0]), BoundLayer::Bind(b.convs[1]),
                     BoundLayer::Bind(b.convs[2])},
                    std::nullopt};
    if (b.shortcut) bb.shortcut = BoundLayer::Bind(*b.shortcut);
    bound.push_back(std::move(bb));
  }
  const BoundLayer bound_projection = BoundLayer::Bind(projection);

  auto embed = [&](std::span<const double> s) {
    Var x = Var::Constant(AsColumn(s));
    for (const auto& b : bound) x = b.Apply(x);
    return bound_projection.Apply(ops::GlobalAvgPool(x));
  };

  std::vector<Var> pos;
  std::vector<Var> neg;
  for (const TripletValues& t : batch) {
    const Var anchor = embed(t.anchor);
    pos.push_back(ops::Neg(ops::L2Norm(ops::Sub(anchor, embed(t.positive)))));
    neg.push_back(ops::Neg(ops::L2Norm(ops::Sub(anchor, embed(t.negative)))));
  }
  return {ops::Stack(pos), ops::Stack(neg)};
}

std::unique_ptr<NeuralModel> Rn1dEncoder::Clone() const {
  auto copy = std::make_unique<Rn1dEncoder>(*this);
  copy->cached_database_.clear();
  copy->cached_embeddings_.clear();
  return copy;
}

}  // namespace ctsr
