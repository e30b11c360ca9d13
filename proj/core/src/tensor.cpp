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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "ctsr/error.hpp"

namespace ctsr {

std::size_t ShapeSize(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string ShapeString(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(ShapeSize(shape_), fill) {
  for (std::size_t d : shape_) {
    if (d == 0) throw ShapeError("Tensor", "shape", "zero-sized axis");
  }
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), data_(std::move(values)) {
  for (std::size_t d : shape_) {
    if (d == 0) throw ShapeError("Tensor", "shape", "zero-sized axis");
  }
  if (ShapeSize(shape_) != data_.size()) {
    throw ShapeError("Tensor", "data",
                     "shape " + ShapeString(shape_) + " needs " +
                         std::to_string(ShapeSize(shape_)) + " values, got " +
                         std::to_string(data_.size()));
  }
}

std::size_t Tensor::Offset(std::initializer_list<std::size_t> index) const {
  if (index.size() != shape_.size()) {
    throw ShapeError("Tensor::at", "rank",
                     "index has " + std::to_string(index.size()) +
                         " coordinates for rank " +
                         std::to_string(shape_.size()));
  }
  std::size_t off = 0;
  std::size_t axis = 0;
  for (std::size_t i : index) {
    if (i >= shape_[axis]) {
      throw ShapeError("Tensor::at", "axis " + std::to_string(axis),
                       "index out of range");
    }
    off = off * shape_[axis] + i;
    ++axis;
  }
  return off;
}

double& Tensor::at(std::initializer_list<std::size_t> index) {
  return data_[Offset(index)];
}

double Tensor::at(std::initializer_list<std::size_t> index) const {
  return data_[Offset(index)];
}

Tensor Tensor::Reshaped(Shape shape) const {
  return Tensor(std::move(shape), data_);
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::AllFinite() const {
  // v - v is 0 for finite v and NaN otherwise, so the lane sums stay zero
  // exactly when every element is finite. Eight lanes let this vectorize.
  double lanes[8] = {};
  const std::size_t n = data_.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t k = 0; k < 8; ++k) lanes[k] += data_[i + k] - data_[i + k];
  }
  double probe = 0.0;
  for (; i < n; ++i) probe += data_[i] - data_[i];
  for (double l : lanes) probe += l;
  return probe == 0.0;
}

}  // namespace ctsr
