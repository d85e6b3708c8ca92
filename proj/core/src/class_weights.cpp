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

#include "fcpn/class_weights.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fcpn/error.hpp"

namespace fcpn {

std::vector<double> class_weights(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw InputError("class_weights: histogram is all zero");
  std::vector<double> w(counts.size(), 0.0);
  double rarest = 0.0;
  std::uint64_t rarest_count = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    const double f = static_cast<double>(counts[c]) / static_cast<double>(total);
    w[c] = 1.0 / std::log(1.2 + f);
    if (counts[c] < rarest_count) {
      rarest_count = counts[c];
      rarest = w[c];
    }
  }
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] == 0) w[c] = rarest;
  return w;
}

std::vector<std::uint64_t> voxel_histogram(std::span<const VoxelLabelGrid> grids, std::size_t class_count) {
  std::vector<std::uint64_t> h(class_count, 0);
  for (const auto& g : grids) {
    for (auto l : g.labels) {
      if (l >= class_count) {
        throw InputError("voxel_histogram: label " + std::to_string(l) + " outside " + std::to_string(class_count) +
                         " classes");
      }
      ++h[l];
    }
  }
  return h;
}

std::vector<std::uint64_t> label_histogram(std::span<const std::int32_t> labels, std::size_t class_count) {
  std::vector<std::uint64_t> h(class_count, 0);
  for (auto l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= class_count) {
      throw InputError("label_histogram: label " + std::to_string(l) + " outside " + std::to_string(class_count) +
                       " classes");
    }
    ++h[static_cast<std::size_t>(l)];
  }
  return h;
}

}  // namespace fcpn
