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

#ifndef CTSR_AUTOGRAD_HPP_
#define CTSR_AUTOGRAD_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ctsr/tensor.hpp"

namespace ctsr {

// A named trainable tensor. Its gradient is written by Backward() and must be
// cleared with ZeroGrad() before the next Backward() that reaches it.
class Parameter {
 public:
  Parameter() = default;
  Parameter(std::string name, Tensor value);

  const std::string& name() const { return name_; }
  Tensor& value() { return value_; }
  const Tensor& value() const { return value_; }
  const Tensor& grad() const { return grad_; }
  bool has_grad() const { return grad_ready_; }
  void ZeroGrad();

 private:
  friend void Backward(const class Var& loss);

  std::string name_;
  Tensor value_;
  Tensor grad_;
  bool grad_ready_ = false;
};

namespace detail {
struct Node;
}

// Handle to a node of a dynamically built computation graph. Copies share the
// node. Parameters bound with Var::Param must outlive the graph.
class Var {
 public:
  Var() = default;

  // A value that takes no gradient.
  static Var Constant(Tensor value);
  // A free leaf that owns its gradient (readable via grad()).
  static Var Leaf(Tensor value);
  // A leaf whose gradient lands in `param`.
  static Var Param(Parameter& param);

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;
  // Gradient of a free leaf after Backward().
  const Tensor& grad() const;
  // Clears a free leaf's gradient so Backward() may run again.
  void ZeroGrad();

  explicit operator bool() const { return node_ != nullptr; }

 private:
  friend void Backward(const Var& loss);
  friend Var MakeVar(std::shared_ptr<detail::Node> node);
  friend const std::shared_ptr<detail::Node>& NodeOf(const Var& v);

  std::shared_ptr<detail::Node> node_;
};

// Reverse-mode sweep from a scalar loss. Throws std::invalid_argument for a
// non-scalar loss and std::logic_error when a reachable gradient has not been
// reset since the previous sweep.
void Backward(const Var& loss);

namespace ops {

Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Neg(const Var& a);
Var Scale(const Var& a, double factor);
Var Relu(const Var& a);
// log(1 + exp(a)), evaluated without overflow.
Var Softplus(const Var& a);
Var Sum(const Var& a);
Var Mean(const Var& a);
// Euclidean norm; the gradient at the origin is taken as zero.
Var L2Norm(const Var& a);
// Concatenates scalar vars into a vector of shape (n).
Var Stack(std::span<const Var> scalars);
Var Reshape(const Var& a, Shape shape);
Var GlobalAvgPool(const Var& a);
Var Conv2d(const Var& x, const Var& w, const Var& b, std::size_t stride);
Var Conv1d(const Var& x, const Var& w, const Var& b, std::size_t stride);
Var Linear(const Var& x, const Var& w, const Var& b);

}  // namespace ops
}  // namespace ctsr

#endif  // CTSR_AUTOGRAD_HPP_
