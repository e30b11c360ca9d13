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

#ifndef CTSR_NEURAL_MODEL_HPP_
#define CTSR_NEURAL_MODEL_HPP_

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctsr/autograd.hpp"
#include "ctsr/scorer.hpp"

namespace ctsr {

// Values of one (anchor, positive, negative) training example.
struct TripletValues {
  std::span<const double> anchor;
  std::span<const double> positive;
  std::span<const double> negative;
};

// A trainable relevance scorer. Parameters() lists every trainable tensor in
// a fixed order; checkpoints and the optimizer rely on that order.
class NeuralModel : public Scorer {
 public:
  virtual std::string kind() const = 0;
  std::string name() const override { return kind(); }

  virtual std::vector<Parameter*> Parameters() = 0;
  std::vector<const Parameter*> Parameters() const;
  std::size_t ParameterCount() const;
  void ZeroGrad();

  // Builds a graph scoring f(anchor, positive) and f(anchor, negative) for
  // every triplet; returns the two score vectors, each of shape (batch).
  virtual std::pair<Var, Var> TripletScores(
      std::span<const TripletValues> batch) = 0;

  virtual std::unique_ptr<NeuralModel> Clone() const = 0;
};

}  // namespace ctsr

#endif  // CTSR_NEURAL_MODEL_HPP_
