/*
 * Copyright (c) 2026 The FCPN Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FCPN_AUTODIFF_HPP
#define FCPN_AUTODIFF_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fcpn/tensor.hpp"

namespace fcpn {

template <typename T>
struct Node {
  Tensor<T> value;
  Tensor<T> grad;  // empty until something flows into it
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node&)> backward_fn;
  std::string name;

  Tensor<T>& ensure_grad() {
    if (grad.size() != value.size() || grad.shape() != value.shape()) grad = Tensor<T>(value.shape());
    return grad;
  }
};

/// Handle to a node of the computation graph. Copies share the node.
template <typename T>
class Var {
 public:
  Var() = default;
  explicit Var(Tensor<T> value, bool requires_grad = false, std::string name = {});
  explicit Var(std::shared_ptr<Node<T>> node) : node_(std::move(node)) {}

  static Var parameter(Tensor<T> value, std::string name) {
    return Var(std::move(value), true, std::move(name));
  }

  bool defined() const { return static_cast<bool>(node_); }
  const Tensor<T>& value() const { return node_->value; }
  /// Direct write access; used by optimizers and finite-difference probes.
  Tensor<T>& mutable_value() { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  std::size_t dim(std::size_t axis) const { return node_->value.dim(axis); }

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool on) { node_->requires_grad = on; }
  bool has_grad() const { return node_->grad.size() == node_->value.size() && !node_->value.empty(); }
  const Tensor<T>& grad() const { return node_->grad; }
  Tensor<T>& mutable_grad() { return node_->ensure_grad(); }
  void zero_grad();

  const std::string& name() const { return node_->name; }
  const std::shared_ptr<Node<T>>& node() const { return node_; }

  /// Reverse-mode sweep from a scalar (seed 1) or from an explicit seed.
  void backward() const;
  void backward(const Tensor<T>& seed) const;

 private:
  std::shared_ptr<Node<T>> node_;
};

/// While alive, ops on this thread do not record graph edges.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

  static bool active();

 private:
  bool previous_;
};

/// Wraps an op result. The backward closure is attached only if some input
/// requires a gradient and grad recording is on.
template <typename T>
Var<T> make_result(Tensor<T> value, std::vector<Var<T>> inputs, std::function<void(Node<T>&)> backward_fn);

/// Detached copy of the value (no graph edges).
template <typename T>
Var<T> detach(const Var<T>& v) {
  return Var<T>(v.value());
}

extern template class Var<float>;
extern template class Var<double>;

}  // namespace fcpn

#endif  // FCPN_AUTODIFF_HPP
