// Copyright 2026 The AGIF Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AGIF_AUTODIFF_TENSOR_HPP_
#define AGIF_AUTODIFF_TENSOR_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace agif {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

inline std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ')';
  return os.str();
}

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// Monotonic creation counter; ordering nodes by it recovers execution order.
inline std::uint64_t next_sequence() {
  thread_local std::uint64_t counter = 0;
  return ++counter;
}

inline bool& grad_mode_flag() {
  thread_local bool enabled = true;
  return enabled;
}

// Signature of the branches taken by piecewise ops (LeakyReLU, clamp) while
// a BranchRecorder is alive on this thread.
struct BranchTrace {
  int depth = 0;
  std::uint64_t signature = 0;
};

inline BranchTrace& branch_trace() {
  thread_local BranchTrace trace;
  return trace;
}

inline void record_branch(unsigned branch) {
  auto& t = branch_trace();
  if (t.depth == 0) return;
  t.signature = (t.signature ^ (branch + 1)) * 1099511628211ull;
}

template <typename T>
struct Node {
  Shape shape;
  std::vector<T> value;
  std::vector<T> grad;
  bool requires_grad = false;
  std::uint64_t sequence = next_sequence();
  // Recorded only for operation outputs; leaves keep both empty.
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;

  bool is_leaf() const { return !backward_fn; }

  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), T(0));
  }
};

}  // namespace detail

/// Records the branch signature of everything evaluated during its lifetime.
class BranchRecorder {
 public:
  BranchRecorder() {
    auto& t = detail::branch_trace();
    if (t.depth++ == 0) t.signature = 14695981039346656037ull;
  }
  ~BranchRecorder() { --detail::branch_trace().depth; }
  BranchRecorder(const BranchRecorder&) = delete;
  BranchRecorder& operator=(const BranchRecorder&) = delete;

  std::uint64_t signature() const { return detail::branch_trace().signature; }
};

// Gradient recording is enabled by default; a NoGradGuard disables it on the
// current thread for the lifetime of the guard.
inline bool grad_enabled() { return detail::grad_mode_flag(); }

class NoGradGuard {
 public:
  NoGradGuard() : previous_(detail::grad_mode_flag()) {
    detail::grad_mode_flag() = false;
  }
  ~NoGradGuard() { detail::grad_mode_flag() = previous_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

/// Dense row-major tensor with value semantics for its handle: copies share
/// the same storage, `clone()` makes an independent copy. Model code uses
/// rank-2 tensors throughout (vectors are 1×n).
template <typename T>
class Tensor {
 public:
  using value_type = T;
  using NodeT = detail::Node<T>;

  Tensor() = default;

  Tensor(Shape shape, std::vector<T> data, bool requires_grad = false)
      : node_(std::make_shared<NodeT>()) {
    for (auto d : shape) {
      if (d == 0) throw ShapeError("tensor dimensions must be positive");
    }
    if (shape_size(shape) != data.size()) {
      throw ShapeError("tensor data length " + std::to_string(data.size()) +
                       " does not match shape " + shape_string(shape));
    }
    node_->shape = std::move(shape);
    node_->value = std::move(data);
    node_->requires_grad = requires_grad;
  }

  static Tensor zeros(Shape shape, bool requires_grad = false) {
    std::vector<T> data(shape_size(shape), T(0));
    return Tensor(std::move(shape), std::move(data), requires_grad);
  }

  static Tensor full(Shape shape, T fill) {
    std::vector<T> data(shape_size(shape), fill);
    return Tensor(std::move(shape), std::move(data));
  }

  static Tensor scalar(T v) { return Tensor({1, 1}, {v}); }

  static Tensor row(std::vector<T> values) {
    const std::size_t n = values.size();
    return Tensor({1, n}, std::move(values));
  }

  static Tensor from_node(std::shared_ptr<NodeT> node) {
    Tensor t;
    t.node_ = std::move(node);
    return t;
  }

  bool defined() const { return static_cast<bool>(node_); }

  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t size() const { return node_->value.size(); }
  std::size_t rows() const { return rank() == 2 ? node_->shape[0] : 1; }
  std::size_t cols() const { return node_->shape.back(); }

  std::span<const T> data() const { return node_->value; }
  std::span<T> mutable_data() { return node_->value; }
  const std::vector<T>& values() const { return node_->value; }

  T operator[](std::size_t i) const { return node_->value[i]; }
  T at(std::size_t r, std::size_t c) const {
    return node_->value[r * cols() + c];
  }

  T item() const {
    if (size() != 1) throw ShapeError("item() on non-scalar tensor");
    return node_->value[0];
  }

  bool requires_grad() const { return node_ && node_->requires_grad; }
  Tensor& set_requires_grad(bool on) {
    node_->requires_grad = on;
    return *this;
  }

  bool has_grad() const { return node_->grad.size() == node_->value.size(); }
  std::span<const T> grad() const { return node_->grad; }
  std::span<T> mutable_grad() {
    node_->ensure_grad();
    return node_->grad;
  }
  void zero_grad() { node_->grad.assign(node_->value.size(), T(0)); }
  void clear_grad() { node_->grad.clear(); }

  Tensor clone() const {
    return Tensor(node_->shape, node_->value, node_->requires_grad);
  }

  // Returns a constant copy with no gradient history.
  Tensor detach() const { return Tensor(node_->shape, node_->value); }

  NodeT* node() const { return node_.get(); }
  const std::shared_ptr<NodeT>& node_ptr() const { return node_; }

 private:
  std::shared_ptr<NodeT> node_;
};

namespace detail {

// Builds the output of a primitive. The backward closure is attached only when
// recording is enabled and some input requires a gradient.
template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> value,
                      std::initializer_list<const Tensor<T>*> inputs,
                      std::function<void(Node<T>&)> backward_fn) {
  Tensor<T> out(std::move(shape), std::move(value));
  if (!grad_enabled()) return out;
  bool any = false;
  for (const auto* in : inputs) any = any || in->requires_grad();
  if (!any) return out;
  auto* node = out.node();
  node->requires_grad = true;
  for (const auto* in : inputs) node->parents.push_back(in->node_ptr());
  node->backward_fn = std::move(backward_fn);
  return out;
}

template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> value,
                      const std::vector<Tensor<T>>& inputs,
                      std::function<void(Node<T>&)> backward_fn) {
  Tensor<T> out(std::move(shape), std::move(value));
  if (!grad_enabled()) return out;
  bool any = false;
  for (const auto& in : inputs) any = any || in.requires_grad();
  if (!any) return out;
  auto* node = out.node();
  node->requires_grad = true;
  for (const auto& in : inputs) node->parents.push_back(in.node_ptr());
  node->backward_fn = std::move(backward_fn);
  return out;
}

}  // namespace detail

/// Operation nodes reachable from `root`, in execution order.
template <typename T>
std::vector<detail::Node<T>*> build_tape(const Tensor<T>& root) {
  std::vector<detail::Node<T>*> ops;
  std::unordered_set<const detail::Node<T>*> seen;
  std::vector<detail::Node<T>*> work{root.node()};
  while (!work.empty()) {
    auto* n = work.back();
    work.pop_back();
    if (!n->requires_grad || n->is_leaf() || !seen.insert(n).second) continue;
    ops.push_back(n);
    for (auto& p : n->parents) work.push_back(p.get());
  }
  std::sort(ops.begin(), ops.end(), [](const auto* a, const auto* b) {
    return a->sequence < b->sequence;
  });
  return ops;
}

/// Reverse-mode sweep from a scalar loss. Leaf gradients accumulate;
/// intermediate gradients are reset on every call so repeated sweeps over the
/// same graph are identical.
template <typename T>
void backward(const Tensor<T>& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw ShapeError("backward() requires a scalar loss");
  }
  if (!loss.requires_grad()) return;
  auto tape = build_tape(loss);
  for (auto* n : tape) n->grad.assign(n->value.size(), T(0));
  auto* root = loss.node();
  root->ensure_grad();
  if (root->is_leaf()) {
    root->grad[0] += T(1);
    return;
  }
  root->grad[0] = T(1);
  for (auto it = tape.rbegin(); it != tape.rend(); ++it) {
    (*it)->backward_fn(**it);
  }
}

}  // namespace agif

#endif  // AGIF_AUTODIFF_TENSOR_HPP_
