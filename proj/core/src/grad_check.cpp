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

#include "fcpn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fcpn/error.hpp"
#include "fcpn/ops.hpp"

namespace fcpn {

double grad_check(const std::function<Var<double>()>& fn, std::vector<Var<double>> inputs,
                  const GradCheckOptions& options) {
  for (auto& in : inputs) {
    if (!in.requires_grad()) throw InputError("grad_check: every probed input must require a gradient");
    in.zero_grad();
  }
  {
    Var<double> out = fn();
    if (out.value().size() != 1) throw DimensionError("grad_check: closure must return a scalar");
    out.backward();
  }
  Rng rng(options.seed);
  double worst = 0.0;
  for (auto& in : inputs) {
    const std::size_t n = in.value().size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (n > options.samples_per_input) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(options.samples_per_input);
    }
    const Tensor<double> analytic = in.has_grad() ? in.grad() : Tensor<double>(in.shape());
    for (auto i : idx) {
      double& x = in.mutable_value()[i];
      const double saved = x;
      double fp, fm;
      {
        NoGradGuard guard;
        x = saved + options.step;
        fp = fn().value()[0];
        x = saved - options.step;
        fm = fn().value()[0];
      }
      x = saved;
      const double numeric = (fp - fm) / (2.0 * options.step);
      const double a = analytic[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace fcpn
