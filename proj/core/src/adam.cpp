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

#include "fcpn/adam.hpp"

#include <cmath>

#include "fcpn/error.hpp"

namespace fcpn {

template <typename T>
void adam_step(std::vector<Var<T>>& params, AdamState<T>& state) {
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.emplace_back(p.shape());
      state.second_moment.emplace_back(p.shape());
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw DimensionError("adam_step: optimizer holds " + std::to_string(state.first_moment.size()) +
                         " moments for " + std::to_string(params.size()) + " parameters");
  }
  ++state.step;
  const double b1 = state.beta1, b2 = state.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  const double lr = state.learning_rate;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    if (!p.requires_grad() || !p.has_grad()) continue;
    auto& m = state.first_moment[i];
    auto& v = state.second_moment[i];
    if (m.shape() != p.shape()) {
      throw DimensionError("adam_step: moment shape " + shape_str(m.shape()) + " != parameter " + shape_str(p.shape()));
    }
    auto& w = p.mutable_value();
    const auto& g = p.grad();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double gk = g[k];
      const double mk = b1 * m[k] + (1.0 - b1) * gk;
      const double vk = b2 * v[k] + (1.0 - b2) * gk * gk;
      m[k] = static_cast<T>(mk);
      v[k] = static_cast<T>(vk);
      const double update = lr * (mk / c1) / (std::sqrt(vk / c2) + state.epsilon);
      w[k] = static_cast<T>(w[k] - update);
    }
  }
}

template void adam_step(std::vector<Var<float>>&, AdamState<float>&);
template void adam_step(std::vector<Var<double>>&, AdamState<double>&);

}  // namespace fcpn
