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

#ifndef CTSR_OPTIMIZER_HPP_
#define CTSR_OPTIMIZER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "ctsr/autograd.hpp"

namespace ctsr {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment accumulators, one pair per parameter in registration order.
struct OptimizerState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
};

OptimizerState MakeAdamState(std::span<Parameter* const> params,
                             const AdamConfig& config);

// One bias-corrected Adam update from each parameter's current gradient.
// Parameters without a computed gradient are treated as having zero gradient.
void AdamStep(std::span<Parameter* const> params, OptimizerState& state);

}  // namespace ctsr

#endif  // CTSR_OPTIMIZER_HPP_
