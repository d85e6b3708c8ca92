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

#include <cmath>
#include <memory>
#include <string>

#include "fcpn/error.hpp"
#include "fcpn/ops.hpp"

namespace fcpn::ops {

template <typename T>
Var<T> weighted_softmax_xent(const Var<T>& logits, std::span<const std::int32_t> targets,
                             std::span<const double> class_weights) {
  const auto& z = logits.value();
  if (z.rank() != 2) throw DimensionError("weighted_softmax_xent: logits must be [N,K], got " + shape_str(z.shape()));
  const std::size_t N = z.dim(0), K = z.dim(1);
  if (targets.size() != N) {
    throw DimensionError("weighted_softmax_xent: axis 0 has extent " + std::to_string(N) + " but " +
                         std::to_string(targets.size()) + " targets given");
  }
  if (class_weights.size() != K) {
    throw DimensionError("weighted_softmax_xent: axis 1 has extent " + std::to_string(K) + " but " +
                         std::to_string(class_weights.size()) + " class weights given");
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (!(class_weights[k] > 0.0) || !std::isfinite(class_weights[k])) {
      throw InputError("weighted_softmax_xent: class weight " + std::to_string(k) + " must be positive and finite");
    }
  }
  for (std::size_t n = 0; n < N; ++n) {
    if (targets[n] < 0 || static_cast<std::size_t>(targets[n]) >= K) {
      throw InputError("weighted_softmax_xent: target " + std::to_string(targets[n]) + " at row " + std::to_string(n) +
                       " outside [0," + std::to_string(K) + ")");
    }
  }

  auto probs = std::make_shared<Tensor<T>>(softmax_last(z));
  double total = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    const T* zr = z.ptr() + n * K;
    double m = zr[0];
    for (std::size_t k = 1; k < K; ++k) m = std::max(m, static_cast<double>(zr[k]));
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) sum += std::exp(static_cast<double>(zr[k]) - m);
    const double log_p = static_cast<double>(zr[targets[n]]) - m - std::log(sum);
    total += class_weights[targets[n]] * -log_p;
  }
  const double loss = N ? total / static_cast<double>(N) : 0.0;

  std::vector<std::int32_t> tgt(targets.begin(), targets.end());
  std::vector<double> cw(class_weights.begin(), class_weights.end());
  return make_result<T>(Tensor<T>({1}, static_cast<T>(loss)), {logits},
                        [probs, tgt = std::move(tgt), cw = std::move(cw), N, K](Node<T>& self) {
    auto& in = *self.parents[0];
    if (!in.requires_grad) return;
    auto& g = in.ensure_grad();
    const double seed = static_cast<double>(self.grad[0]) / static_cast<double>(N);
    for (std::size_t n = 0; n < N; ++n) {
      const T s = static_cast<T>(seed * cw[tgt[n]]);
      const T* p = probs->ptr() + n * K;
      T* gr = g.ptr() + n * K;
      for (std::size_t k = 0; k < K; ++k) gr[k] += s * p[k];
      gr[tgt[n]] -= s;
    }
  });
}

template <typename T>
Var<T> sigmoid_bce(const Var<T>& logits, std::span<const std::int32_t> targets, std::span<const double> weights) {
  const auto& z = logits.value();
  const std::size_t K = z.size();
  if (targets.size() != K) throw DimensionError("sigmoid_bce: " + std::to_string(targets.size()) + " targets for " + std::to_string(K) + " logits");
  if (weights.size() != K) throw DimensionError("sigmoid_bce: " + std::to_string(weights.size()) + " weights for " + std::to_string(K) + " logits");
  for (std::size_t k = 0; k < K; ++k) {
    if (targets[k] != 0 && targets[k] != 1) {
      throw InputError("sigmoid_bce: target " + std::to_string(targets[k]) + " at " + std::to_string(k) + " is not 0 or 1");
    }
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) throw InputError("sigmoid_bce: weights must be finite and non-negative");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double x = z[k];
    const double y = targets[k];
    // max(x,0) - x*y + log(1 + exp(-|x|)) is the overflow-free form.
    total += weights[k] * (std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x))));
  }
  const double loss = K ? total / static_cast<double>(K) : 0.0;
  std::vector<std::int32_t> tgt(targets.begin(), targets.end());
  std::vector<double> w(weights.begin(), weights.end());
  return make_result<T>(Tensor<T>({1}, static_cast<T>(loss)), {logits},
                        [tgt = std::move(tgt), w = std::move(w), K](Node<T>& self) {
    auto& in = *self.parents[0];
    if (!in.requires_grad) return;
    auto& g = in.ensure_grad();
    const double seed = static_cast<double>(self.grad[0]) / static_cast<double>(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double x = in.value[k];
      const double sig = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
      g[k] += static_cast<T>(seed * w[k] * (sig - tgt[k]));
    }
  });
}

template Var<float> weighted_softmax_xent(const Var<float>&, std::span<const std::int32_t>, std::span<const double>);
template Var<double> weighted_softmax_xent(const Var<double>&, std::span<const std::int32_t>, std::span<const double>);
template Var<float> sigmoid_bce(const Var<float>&, std::span<const std::int32_t>, std::span<const double>);
template Var<double> sigmoid_bce(const Var<double>&, std::span<const std::int32_t>, std::span<const double>);

}  // namespace fcpn::ops
