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

#include "ctsr/tensor.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "ctsr/error.hpp"

namespace ctsr {
namespace {

TEST(TensorTest, SizeMatchesShapeProduct) {
  Tensor t({2, 3, 4}, 1.5);
  EXPECT_EQ(t.size(), 24u);
  EXPECT_EQ(t.rank(), 3u);
  EXPECT_EQ(t.dim(1), 3u);
  EXPECT_EQ(ShapeString(t.shape()), "[2,3,4]");
  for (double v : t.data()) EXPECT_EQ(v, 1.5);
}

TEST(TensorTest, RowMajorIndexing) {
  Tensor t({2, 3}, std::vector<double>{0, 1, 2, 3, 4, 5});
  EXPECT_EQ(t.at({0, 2}), 2.0);
  EXPECT_EQ(t.at({1, 0}), 3.0);
  t.at({1, 1}) = 9.0;
  EXPECT_EQ(t[4], 9.0);
}

TEST(TensorTest, RejectsInconsistentShapes) {
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
  EXPECT_THROW(Tensor({2, 0}), ShapeError);
  Tensor t({2, 2});
  EXPECT_THROW(t.at({2, 0}), ShapeError);
  EXPECT_THROW(t.at({0}), ShapeError);
  EXPECT_THROW(t.Reshaped({3}), ShapeError);
}

TEST(TensorTest, ReshapeKeepsData) {
  Tensor t({2, 3}, std::vector<double>{0, 1, 2, 3, 4, 5});
  const Tensor r = t.Reshaped({3, 2, 1});
  EXPECT_EQ(r.shape(), (Shape{3, 2, 1}));
  EXPECT_EQ(r.values(), t.values());
}

TEST(TensorTest, FiniteCheck) {
  Tensor t({3}, 0.0);
  EXPECT_TRUE(t.AllFinite());
  t[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(t.AllFinite());
  t[1] = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(t.AllFinite());
}

}  // namespace
}  // namespace ctsr
