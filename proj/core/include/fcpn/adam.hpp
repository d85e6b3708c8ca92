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

#ifndef FCPN_ADAM_HPP
#define FCPN_ADAM_HPP

#include <cstdint>
#include <vector>

#include "fcpn/autodiff.hpp"

namespace fcpn {

template <typename T>
struct AdamState {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<Tensor<T>> first_moment;
  std::vector<Tensor<T>> second_moment;
};

/// One bias-corrected ADAM update of every parameter that requires a
/// gradient. Moments are created on first use and must keep the same
/// parameter order afterwards. Parameters without a gradient are left alone.
template <typename T>
void adam_step(std::vector<Var<T>>& params, AdamState<T>& state);

template <typename T>
void zero_grads(std::vector<Var<T>>& params) {
  for (auto& p : params) p.zero_grad();
}

extern template void adam_step(std::vector<Var<float>>&, AdamState<float>&);
extern template void adam_step(std::vector<Var<double>>&, AdamState<double>&);

}  // namespace fcpn

#endif  // FCPN_ADAM_HPP
