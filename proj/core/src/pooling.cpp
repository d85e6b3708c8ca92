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

#include "fcpn/pooling.hpp"

#include <cmath>

#include "fcpn/error.hpp"

namespace fcpn {

double sphere_weight(double distance, double radius) {
  return std::max(0.0, 1.0 - std::abs(distance - radius) / radius);
}

ops::MixMatrix sphere_pooling_matrix(const Dims& dims, double cell_size, double radius) {
  ops::MixMatrix m;
  const std::size_t n = dims[0] * dims[1] * dims[2];
  m.cols = n;
  // Raw weights vanish beyond 2R, so only this many cells per axis matter.
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(2.0 * radius / cell_size));
  std::vector<std::size_t> cols;
  std::vector<double> raw;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = static_cast<std::ptrdiff_t>(i / (dims[1] * dims[2]));
    const auto cj = static_cast<std::ptrdiff_t>((i / dims[2]) % dims[1]);
    const auto ck = static_cast<std::ptrdiff_t>(i % dims[2]);
    cols.clear();
    raw.clear();
    double sum = 0.0;
    for (std::ptrdiff_t a = std::max<std::ptrdiff_t>(0, ci - reach); a <= std::min<std::ptrdiff_t>(dims[0] - 1, ci + reach); ++a) {
      for (std::ptrdiff_t b = std::max<std::ptrdiff_t>(0, cj - reach); b <= std::min<std::ptrdiff_t>(dims[1] - 1, cj + reach); ++b) {
        for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, ck - reach); c <= std::min<std::ptrdiff_t>(dims[2] - 1, ck + reach); ++c) {
          if (a == ci && b == cj && c == ck) continue;
          const double dx = static_cast<double>(a - ci) * cell_size;
          const double dy = static_cast<double>(b - cj) * cell_size;
          const double dz = static_cast<double>(c - ck) * cell_size;
          const double w = sphere_weight(std::sqrt(dx * dx + dy * dy + dz * dz), radius);
          if (w <= 0.0) continue;
          cols.push_back((static_cast<std::size_t>(a) * dims[1] + static_cast<std::size_t>(b)) * dims[2] + static_cast<std::size_t>(c));
          raw.push_back(w);
          sum += w;
        }
      }
    }
    if (sum > 0.0) {
      for (std::size_t k = 0; k < cols.size(); ++k) m.push(cols[k], raw[k] / sum);
    } else if (n > 1) {
      const double u = 1.0 / static_cast<double>(n - 1);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) m.push(j, u);
    }
    m.end_row();
  }
  return m;
}

template <typename T>
Var<T> weighted_average_pool(const Var<T>& top, double cell_size, double radius) {
  if (top.value().rank() != 4) throw DimensionError("weighted_average_pool: input must be [X,Y,Z,C], got " + shape_str(top.shape()));
  if (!(radius > 0.0) || !(cell_size > 0.0)) throw ConfigError("weighted_average_pool: radius and cell size must be positive");
  const Dims dims{top.dim(0), top.dim(1), top.dim(2)};
  const std::size_t C = top.dim(3);
  const auto mix = sphere_pooling_matrix(dims, cell_size, radius);
  auto flat = ops::reshape(top, {dims[0] * dims[1] * dims[2], C});
  return ops::reshape(ops::mix_rows(flat, mix), {dims[0], dims[1], dims[2], C});
}

template Var<float> weighted_average_pool(const Var<float>&, double, double);
template Var<double> weighted_average_pool(const Var<double>&, double, double);

}  // namespace fcpn
