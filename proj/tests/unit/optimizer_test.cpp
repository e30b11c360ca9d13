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

#include <gtest/gtest.h>

namespace ctsr {
namespace {

// Sets a fixed gradient through a one-op graph: loss = sum(g * p).
void SetGradient(Parameter& p, const Tensor& g) {
  p.ZeroGrad();
  const std::size_t n = p.value().size();
  Backward(ops::Linear(ops::Reshape(Var::Param(p), {n}),
                       Var::Constant(g.Reshaped({n, 1})), Var::Constant(Tensor({1}))));
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  Parameter p("p", Tensor({3}, std::vector<double>{1, -2, 3}));
  Parameter* params[] = {&p};
  OptimizerState state = MakeAdamState(params, {});
  const Tensor before = p.value();
  for (int i = 0; i < 5; ++i) {
    SetGradient(p, Tensor({3}));
    AdamStep(params, state);
  }
  EXPECT_EQ(p.value(), before);
  EXPECT_EQ(state.step, 5u);
}

TEST(AdamTest, MissingGradientCountsAsZero) {
  Parameter p("p", Tensor({2}, 1.0));
  Parameter* params[] = {&p};
  OptimizerState state = MakeAdamState(params, {});
  AdamStep(params, state);
  EXPECT_EQ(p.value(), Tensor({2}, 1.0));
}

TEST(AdamTest, FirstStepMatchesHandEvaluation) {
  // Bias-corrected: m_hat = g, v_hat = g^2, so the step is lr*g/(|g|+eps).
  const AdamConfig config{.learning_rate = 0.01};
  Parameter p("p", Tensor({3}, std::vector<double>{0.5, 0.5, 0.5}));
  Parameter* params[] = {&p};
  OptimizerState state = MakeAdamState(params, config);
  const std::vector<double> g{2.0, -0.25, 1e-3};
  SetGradient(p, Tensor({3}, g));
  AdamStep(params, state);
  for (std::size_t i = 0; i < 3; ++i) {
    const double expected = 0.5 - 0.01 * g[i] / (std::abs(g[i]) + 1e-8);
    EXPECT_NEAR(p.value()[i], expected, 1e-15);
  }
}

TEST(AdamTest, SecondStepMatchesHandEvaluation) {
  const AdamConfig config{.learning_rate = 0.1, .beta1 = 0.9, .beta2 = 0.999,
                          .epsilon = 1e-8};
  Parameter p("p", Tensor({1}, 0.0));
  Parameter* params[] = {&p};
  OptimizerState state = MakeAdamState(params, config);
  SetGradient(p, Tensor({1}, 1.0));
  AdamStep(params, state);
  SetGradient(p, Tensor({1}, 3.0));
  AdamStep(params, state);
  const double m = 0.9 * 0.1 + 0.1 * 3.0;
  const double v = 0.999 * 0.001 + 0.001 * 9.0;
  const double m_hat = m / (1 - 0.81), v_hat = v / (1 - 0.999 * 0.999);
  const double first = -0.1 / (1.0 + 1e-8);
  const double expected = first - 0.1 * m_hat / (std::sqrt(v_hat) + 1e-8);
  EXPECT_NEAR(p.value()[0], expected, 1e-14);
}

TEST(AdamTest, ConstantGradientMovesAgainstItsSign) {
  Parameter p("p", Tensor({2}, 0.0));
  Parameter* params[] = {&p};
  OptimizerState state = MakeAdamState(params, {});
  for (int i = 0; i < 50; ++i) {
    SetGradient(p, Tensor({2}, std::vector<double>{0.3, -2.0}));
    AdamStep(params, state);
  }
  EXPECT_LT(p.value()[0], -0.04);
  EXPECT_GT(p.value()[1], 0.04);
}

}  // namespace
}  // namespace ctsr
