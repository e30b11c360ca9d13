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

#include "ctsr/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "ctsr/error.hpp"
#include "ctsr/kernels.hpp"

namespace ctsr {
namespace detail {

struct Node {
  Tensor value;
  Tensor grad;
  bool requires_grad = false;
  Parameter* param = nullptr;
  bool leaf_grad_ready = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Pushes this node's grad into the grads of parents that require one.
  std::function<void(Node&)> backward;
};

}  // namespace detail

using detail::Node;
using NodePtr = std::shared_ptr<Node>;

Var MakeVar(NodePtr node) {
  Var v;
  v.node_ = std::move(node);
  return v;
}

const NodePtr& NodeOf(const Var& v) {
  if (!v.node_) throw std::invalid_argument("use of an empty Var");
  return v.node_;
}

Parameter::Parameter(std::string name, Tensor value)
    : name_(std::move(name)), value_(std::move(value)), grad_(value_.shape()) {}

void Parameter::ZeroGrad() {
  if (grad_.shape() != value_.shape()) grad_ = Tensor(value_.shape());
  grad_.Fill(0.0);
  grad_ready_ = false;
}

Var Var::Constant(Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  return MakeVar(std::move(n));
}

Var Var::Leaf(Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = true;
  return MakeVar(std::move(n));
}

Var Var::Param(Parameter& param) {
  auto n = std::make_shared<Node>();
  n->value = param.value();
  n->requires_grad = true;
  n->param = &param;
  return MakeVar(std::move(n));
}

const Tensor& Var::value() const { return NodeOf(*this)->value; }
bool Var::requires_grad() const { return NodeOf(*this)->requires_grad; }

const Tensor& Var::grad() const {
  const NodePtr& n = NodeOf(*this);
  if (!n->leaf_grad_ready) {
    throw std::logic_error("Var::grad: no gradient has been computed");
  }
  return n->grad;
}

void Var::ZeroGrad() {
  const NodePtr& n = NodeOf(*this);
  n->leaf_grad_ready = false;
  if (!n->grad.empty()) n->grad.Fill(0.0);
}

void Backward(const Var& loss) {
  const NodePtr& root = NodeOf(loss);
  if (root->value.size() != 1) {
    throw std::invalid_argument("Backward: loss must be a scalar, got shape " +
                                ShapeString(root->value.shape()));
  }
  if (!root->requires_grad) {
    throw std::invalid_argument("Backward: loss does not depend on any leaf");
  }

  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{root.get(), 0}};
  seen.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  std::vector<Parameter*> params;
  for (Node* n : order) {
    if (n->param) {
      if (n->param->grad_ready_) {
        throw std::logic_error("Backward: gradient of parameter '" +
                               n->param->name() +
                               "' was not reset since the last call");
      }
      params.push_back(n->param);
    } else if (n->parents.empty() && n->leaf_grad_ready) {
      throw std::logic_error(
          "Backward: leaf gradient was not reset since the last call");
    }
  }

  // Leaves keep their buffers between calls. Interior gradients are created
  // just before the first consumer writes them and freed once propagated, so
  // the allocator hands back recently used memory.
  auto zero_grad = [](Node& n) {
    if (n.grad.shape() != n.value.shape() || n.grad.size() != n.value.size()) {
      n.grad = Tensor(n.value.shape());
    } else {
      n.grad.Fill(0.0);
    }
  };
  for (Node* n : order) {
    if (n->parents.empty()) zero_grad(*n);
  }
  if (!root->parents.empty()) zero_grad(*root);
  root->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node& n = **it;
    if (!n.backward) continue;
    for (const NodePtr& p : n.parents) {
      if (p->requires_grad && !p->parents.empty() && p->grad.size() != p->value.size()) {
        zero_grad(*p);
      }
    }
    n.backward(n);
    if (!n.parents.empty()) n.grad = Tensor();
  }

  for (Parameter* p : params) p->ZeroGrad();
  for (Node* n : order) {
    if (n->param) {
      auto dst = n->param->grad_.data();
      const auto src = n->grad.data();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    } else if (n->parents.empty()) {
      n->leaf_grad_ready = true;
    }
  }
  for (Parameter* p : params) p->grad_ready_ = true;
}

namespace ops {
namespace {

NodePtr NewNode(Tensor value, std::vector<NodePtr> parents,
                std::function<void(Node&)> backward) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = std::any_of(parents.begin(), parents.end(),
                                 [](const NodePtr& p) { return p->requires_grad; });
  if (n->requires_grad) n->backward = std::move(backward);
  n->parents = std::move(parents);
  return n;
}

Tensor* GradOf(const NodePtr& n) {
  return n->requires_grad ? &n->grad : nullptr;
}

void ExpectSameShape(const char* op, const Var& a, const Var& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(op, "shape",
                     ShapeString(a.shape()) + " vs " + ShapeString(b.shape()));
  }
}

}  // namespace

Var Add(const Var& a, const Var& b) {
  ExpectSameShape("add", a, b);
  Tensor out = a.value();
  const auto bs = b.value().data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bs[i];
  return MakeVar(NewNode(std::move(out), {NodeOf(a), NodeOf(b)}, [](Node& self) {
    for (auto& p : self.parents) {
      if (!p->requires_grad) continue;
      auto g = p->grad.data();
      const auto s = self.grad.data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += s[i];
    }
  }));
}

Var Sub(const Var& a, const Var& b) {
  ExpectSameShape("sub", a, b);
  Tensor out = a.value();
  const auto bs = b.value().data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bs[i];
  return MakeVar(NewNode(std::move(out), {NodeOf(a), NodeOf(b)}, [](Node& self) {
    const auto s = self.grad.data();
    for (std::size_t k = 0; k < 2; ++k) {
      auto& p = self.parents[k];
      if (!p->requires_grad) continue;
      const double sign = k == 0 ? 1.0 : -1.0;
      auto g = p->grad.data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += sign * s[i];
    }
  }));
}

Var Scale(const Var& a, double factor) {
  Tensor out = a.value();
  for (double& v : out.data()) v *= factor;
  return MakeVar(NewNode(std::move(out), {NodeOf(a)}, [factor](Node& self) {
    auto g = self.parents[0]->grad.data();
    const auto s = self.grad.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += factor * s[i];
  }));
}

Var Neg(const Var& a) { return Scale(a, -1.0); }

Var Relu(const Var& a) {
  return MakeVar(NewNode(kernels::Relu(a.value()), {NodeOf(a)}, [](Node& self) {
    auto& x = *self.parents[0];
    kernels::ReluBackward(x.value, self.grad, x.grad);
  }));
}

Var Softplus(const Var& a) {
  Tensor out = a.value();
  for (double& v : out.data()) {
    v = std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v)));
  }
  return MakeVar(NewNode(std::move(out), {NodeOf(a)}, [](Node& self) {
    auto& x = *self.parents[0];
    const auto xs = x.value.data();
    const auto s = self.grad.data();
    auto g = x.grad.data();
    for (std::size_t i = 0; i < g.size(); ++i) {
      // sigmoid(x), split by sign so exp never overflows.
      const double e = std::exp(-std::abs(xs[i]));
      const double sig = xs[i] >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
      g[i] += s[i] * sig;
    }
  }));
}

Var Sum(const Var& a) {
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  return MakeVar(NewNode(Tensor::Scalar(total), {NodeOf(a)}, [](Node& self) {
    const double s = self.grad[0];
    for (double& g : self.parents[0]->grad.data()) g += s;
  }));
}

Var Mean(const Var& a) {
  return Scale(Sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var L2Norm(const Var& a) {
  double sq = 0.0;
  for (double v : a.value().data()) sq += v * v;
  const double norm = std::sqrt(sq);
  return MakeVar(NewNode(Tensor::Scalar(norm), {NodeOf(a)}, [norm](Node& self) {
    if (norm == 0.0) return;
    auto& x = *self.parents[0];
    const double s = self.grad[0] / norm;
    const auto xs = x.value.data();
    auto g = x.grad.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += s * xs[i];
  }));
}

Var Stack(std::span<const Var> scalars) {
  if (scalars.empty()) throw ShapeError("stack", "count", "no inputs");
  std::vector<double> values;
  std::vector<NodePtr> parents;
  values.reserve(scalars.size());
  for (const Var& v : scalars) {
    if (v.value().size() != 1) {
      throw ShapeError("stack", "element", "expected scalars, got " +
                                               ShapeString(v.shape()));
    }
    values.push_back(v.value()[0]);
    parents.push_back(NodeOf(v));
  }
  const std::size_t n = values.size();
  Tensor out({n}, std::move(values));
  return MakeVar(NewNode(std::move(out), std::move(parents), [](Node& self) {
    for (std::size_t i = 0; i < self.parents.size(); ++i) {
      if (self.parents[i]->requires_grad) self.parents[i]->grad[0] += self.grad[i];
    }
  }));
}

Var Reshape(const Var& a, Shape shape) {
  return MakeVar(
      NewNode(a.value().Reshaped(std::move(shape)), {NodeOf(a)}, [](Node& self) {
        auto g = self.parents[0]->grad.data();
        const auto s = self.grad.data();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += s[i];
      }));
}

Var GlobalAvgPool(const Var& a) {
  return MakeVar(
      NewNode(kernels::GlobalAvgPool(a.value()), {NodeOf(a)}, [](Node& self) {
        auto& x = *self.parents[0];
        kernels::GlobalAvgPoolBackward(x.value, self.grad, x.grad);
      }));
}

Var Conv2d(const Var& x, const Var& w, const Var& b, std::size_t stride) {
  Tensor out = kernels::Conv2d(x.value(), w.value(), b.value(), stride);
  return MakeVar(NewNode(std::move(out), {NodeOf(x), NodeOf(w), NodeOf(b)},
                         [stride](Node& self) {
                           auto& px = self.parents[0];
                           auto& pw = self.parents[1];
                           auto& pb = self.parents[2];
                           kernels::Conv2dBackward(px->value, pw->value, stride,
                                                   self.grad, GradOf(px),
                                                   GradOf(pw), GradOf(pb));
                         }));
}

Var Conv1d(const Var& x, const Var& w, const Var& b, std::size_t stride) {
  Tensor out = kernels::Conv1d(x.value(), w.value(), b.value(), stride);
  return MakeVar(NewNode(std::move(out), {NodeOf(x), NodeOf(w), NodeOf(b)},
                         [stride](Node& self) {
                           auto& px = self.parents[0];
                           auto& pw = self.parents[1];
                           auto& pb = self.parents[2];
                           kernels::Conv1dBackward(px->value, pw->value, stride,
                                                   self.grad, GradOf(px),
                                                   GradOf(pw), GradOf(pb));
                         }));
}

Var Linear(const Var& x, const Var& w, const Var& b) {
  Tensor out = kernels::Linear(x.value(), w.value(), b.value());
  return MakeVar(NewNode(std::move(out), {NodeOf(x), NodeOf(w), NodeOf(b)},
                         [](Node& self) {
                           auto& px = self.parents[0];
                           auto& pw = self.parents[1];
                           auto& pb = self.parents[2];
                           kernels::LinearBackward(px->value, pw->value,
                                                   self.grad, GradOf(px),
                                                   GradOf(pw), GradOf(pb));
                         }));
}

}  // namespace ops
}  // namespace ctsr
