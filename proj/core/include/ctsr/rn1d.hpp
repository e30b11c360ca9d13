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

#ifndef CTSR_RN1D_HPP_
#define CTSR_RN1D_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ctsr/layers.hpp"
#include "ctsr/neural_model.hpp"

namespace ctsr {

// Three same-width convolutions (kernels 8, 5, 3) with a residual shortcut;
// the shortcut is a 1x1 projection when the channel count changes.
struct ResidualBlock1dParams {
  std::array<LayerParams, 3> convs;
  std::optional<LayerParams> shortcut;

  static ResidualBlock1dParams Make(const std::string& prefix, std::size_t c_in,
                                    std::size_t c_out);
  std::vector<LayerParams*> Layers();
};

// Siamese encoder: three residual blocks (64, 128, 128 channels), global
// average pooling over time and a linear projection to a 64-d embedding.
// Score(q, x) = -||embed(q) - embed(x)||.
class Rn1dEncoder final : public NeuralModel {
 public:
  static constexpr std::array<std::size_t, 3> kChannels{64, 128, 128};
  static constexpr std::array<std::size_t, 3> kKernels{8, 5, 3};
  static constexpr std::size_t kEmbeddingDim = 64;
  static constexpr std::size_t kMinLength = 8;

  Rn1dEncoder();
  static Rn1dEncoder Initialized(std::uint64_t seed);

  std::string kind() const override { return "rn1d"; }
  std::vector<Parameter*> Parameters() override;
  using NeuralModel::Parameters;

  // Throws std::invalid_argument for series shorter than kMinLength.
  Tensor Embed(std::span<const double> series) const;

  double Score(std::span<const double> query,
               std::span<const double> item) const override;

  // Caches database embeddings; ScoreDatabase reuses them when called with the
  // same database spans.
  void Prepare(const SeriesSpans& database) override;
  std::vector<double> ScoreDatabase(std::span<const double> query,
                                    const SeriesSpans& database) const override;

  std::pair<Var, Var> TripletScores(
      std::span<const TripletValues> batch) override;

  std::unique_ptr<NeuralModel> Clone() const override;

  std::array<ResidualBlock1dParams, 3> blocks;
  LayerParams projection;

 private:
  SeriesSpans cached_database_;
  std::vector<Tensor> cached_embeddings_;
};

}  // namespace ctsr

#endif  // CTSR_RN1D_HPP_
