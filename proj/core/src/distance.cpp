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

#include "ctsr/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctsr/error.hpp"

namespace ctsr {

DistanceMatrix DistanceMatrix::Transposed() const {
  DistanceMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Tensor DistanceMatrix::AsImage() const {
  return Tensor({rows_, cols_, 1}, entries_);
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("euclidean_distance", "length",
                     "series lengths differ: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

DistanceMatrix PairwiseAbsMatrix(std::span<const double> a,
                                 std::span<const double> b) {
  DistanceMatrix d(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) d(i, j) = std::abs(a[i] - b[j]);
  }
  return d;
}

namespace {

void ExpectNonEmpty(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("dtw_distance: empty series");
  }
}

}  // namespace

DistanceMatrix DtwAccumulatedMatrix(std::span<const double> a,
                                    std::span<const double> b) {
  ExpectNonEmpty(a, b);
  DistanceMatrix d = PairwiseAbsMatrix(a, b);
  const std::size_t w = a.size();
  const std::size_t h = b.size();
  for (std::size_t j = 1; j < h; ++j) d(0, j) += d(0, j - 1);
  for (std::size_t i = 1; i < w; ++i) {
    d(i, 0) += d(i - 1, 0);
    for (std::size_t j = 1; j < h; ++j) {
      d(i, j) += std::min({d(i - 1, j), d(i, j - 1), d(i - 1, j - 1)});
    }
  }
  return d;
}

double DtwDistance(std::span<const double> a, std::span<const double> b,
                   DtwMode mode) {
  ExpectNonEmpty(a, b);
  if (mode == DtwMode::kFullMatrix) {
    const DistanceMatrix d = DtwAccumulatedMatrix(a, b);
    return d(a.size() - 1, b.size() - 1);
  }
  const std::size_t h = b.size();
  std::vector<double> prev(h);
  std::vector<double> curr(h);
  prev[0] = std::abs(a[0] - b[0]);
  for (std::size_t j = 1; j < h; ++j) prev[j] = prev[j - 1] + std::abs(a[0] - b[j]);
  for (std::size_t i = 1; i < a.size(); ++i) {
    curr[0] = prev[0] + std::abs(a[i] - b[0]);
    for (std::size_t j = 1; j < h; ++j) {
      curr[j] = std::abs(a[i] - b[j]) + std::min({prev[j], curr[j - 1], prev[j - 1]});
    }
    std::swap(prev, curr);
  }
  return prev[h - 1];
}

}  // namespace ctsr
