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

#ifndef FCPN_GRAD_CHECK_HPP
#define FCPN_GRAD_CHECK_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "fcpn/autodiff.hpp"

namespace fcpn {

struct GradCheckOptions {
  double step = 1e-5;
  // Elements probed per input; inputs smaller than this are probed fully.
  std::size_t samples_per_input = 5;
  // Gradients smaller than this in magnitude are compared absolutely.
  double floor = 1e-6;
  std::uint64_t seed = 1;
};

/// Compares reverse-mode gradients of a scalar closure against central
/// differences on a random subset of input elements. Returns the worst
/// relative error |a - n| / max(|a|, |n|, floor).
double grad_check(const std::function<Var<double>()>& fn, std::vector<Var<double>> inputs,
                  const GradCheckOptions& options = {});

}  // namespace fcpn

#endif  // FCPN_GRAD_CHECK_HPP
