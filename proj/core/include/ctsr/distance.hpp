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

#ifndef CTSR_DISTANCE_HPP_
#define CTSR_DISTANCE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ctsr/tensor.hpp"

namespace ctsr {

// Row-major w x h matrix of pairwise costs between two series.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  std::span<const double> entries() const { return entries_; }

  DistanceMatrix Transposed() const;
  // (rows, cols, 1) tensor, the single-channel image fed to RN2D.
  Tensor AsImage() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

// sqrt(sum_i (a_i - b_i)^2). Throws ShapeError naming both lengths when they
// differ.
double EuclideanDistance(std::span<const double> a, std::span<const double> b);

// D[i][j] = |a_i - b_j|.
DistanceMatrix PairwiseAbsMatrix(std::span<const double> a,
                                 std::span<const double> b);

enum class DtwMode {
  kRollingRows,  // two-row buffer, O(h) memory
  kFullMatrix,   // materialises the accumulated matrix; for cross-checks
};

// Unconstrained DTW with |a_i - b_j| cost. The accumulated matrix follows
// D[i][j] += min(D[i-1][j], D[i][j-1], D[i-1][j-1]) with the first row and
// column accumulated along their single predecessor; the result is the
// bottom-right entry. Throws std::invalid_argument on an empty series.
double DtwDistance(std::span<const double> a, std::span<const double> b,
                   DtwMode mode = DtwMode::kRollingRows);

// The full accumulated cost matrix behind DtwDistance.
DistanceMatrix DtwAccumulatedMatrix(std::span<const double> a,
                                    std::span<const double> b);

}  // namespace ctsr

#endif  // CTSR_DISTANCE_HPP_
