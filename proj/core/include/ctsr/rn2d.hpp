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

#ifndef CTSR_RN2D_HPP_
#define CTSR_RN2D_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ctsr/layers.hpp"
#include "ctsr/neural_model.hpp"

namespace ctsr {

// Residual bottleneck unit: 1x1 reduce, 3x3 stride-2, 1x1 expand, with a
// stride-2 1x1 projection on the skip path.
struct BottleneckBlockParams {
  LayerParams reduce;
  LayerParams spatial;
  LayerParams expand;
  LayerParams skip;

  static BottleneckBlockParams Make(const std::string& prefix, std::size_t n_in,
                                    std::size_t n_neck, std::size_t n_out);
  std::array<LayerParams*, 4> Layers();
  std::array<const LayerParams*, 4> Layers() const;
};

// relu(skip(x) + expand(relu(spatial(relu(reduce(x)))))). Output spatial size
// is ceil(n / 2) per axis. Throws ShapeError on a channel mismatch.
Tensor BottleneckForward(const Tensor& x, const BottleneckBlockParams& p);

struct BoundBottleneck {
  BoundLayer reduce, spatial, expand, skip;

  static BoundBottleneck Bind(BottleneckBlockParams& p);
  Var Apply(const Var& x) const;
};

// Scores a pair of series by running a residual CNN over their pairwise
// absolute-difference matrix: 7x7/2 stem conv, eight 64-16-64 bottleneck
// blocks, global average pooling and a linear head.
class Rn2dModel final : public NeuralModel {
 public:
  static constexpr std::size_t kBlockCount = 8;
  static constexpr std::size_t kWidth = 64;
  static constexpr std::size_t kNeck = 16;
  static constexpr std::size_t kStemKernel = 7;
  static constexpr std::size_t kStemStride = 2;
  static constexpr std::size_t kBlockParameterCount =
      (kWidth * kNeck + kNeck) + (3 * 3 * kNeck * kNeck + kNeck) +
      (kNeck * kWidth + kWidth) + (kWidth * kWidth + kWidth);
  static constexpr std::size_t kParameterCount =
      (kStemKernel * kStemKernel * kWidth + kWidth) +
      kBlockCount * kBlockParameterCount + (kWidth + 1);

  // All parameters zero.
  Rn2dModel();
  // He-uniform weights, zero biases, drawn from `seed`.
  static Rn2dModel Initialized(std::uint64_t seed);

  std::string kind() const override { return "rn2d"; }
  std::vector<Parameter*> Parameters() override;
  using NeuralModel::Parameters;

  // Throws NumericError naming the layer (0 = stem, 1..8 = blocks, 9 = head)
  // whose output is not finite.
  double Score(std::span<const double> query,
               std::span<const double> item) const override;

  std::pair<Var, Var> TripletScores(
      std::span<const TripletValues> batch) override;

  std::unique_ptr<NeuralModel> Clone() const override;

  LayerParams stem;
  std::array<BottleneckBlockParams, kBlockCount> blocks;
  LayerParams head;
};

}  // namespace ctsr

#endif  // CTSR_RN2D_HPP_
