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

#include "ctsr/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "ctsr/error.hpp"

namespace ctsr {

OptimizerState MakeAdamState(std::span<Parameter* const> params,
                             const AdamConfig& config) {
  OptimizerState state;
  state.config = config;
  for (const Parameter* p : params) {
    state.first_moment.emplace_back(p->value().shape());
    state.second_moment.emplace_back(p->value().shape());
  }
  return state;
}

void AdamStep(std::span<Parameter* const> params, OptimizerState& state) {
  if (params.size() != state.first_moment.size()) {
    throw std::invalid_argument("AdamStep: state tracks " +
                                std::to_string(state.first_moment.size()) +
                                " parameters, got " +
                                std::to_string(params.size()));
  }
  const AdamConfig& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    Tensor& m = state.first_moment[k];
    Tensor& v = state.second_moment[k];
    if (m.shape() != p.value().shape()) {
      throw ShapeError("AdamStep", p.name(), "moment shape mismatch");
    }
    const bool has_grad = p.has_grad();
    auto w = p.value().data();
    const auto grad = p.grad().data();
    auto ms = m.data();
    auto vs = v.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double g = has_grad ? grad[i] : 0.0;
      ms[i] = c.beta1 * ms[i] + (1.0 - c.beta1) * g;
      vs[i] = c.beta2 * vs[i] + (1.0 - c.beta2) * g * g;
      const double m_hat = ms[i] / correction1;
      const double v_hat = vs[i] / correction2;
      w[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

}  // namespace ctsr
