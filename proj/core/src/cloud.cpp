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

#include "fcpn/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fcpn/error.hpp"

namespace fcpn {

void PointCloud::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (double c : points[i]) {
      if (!std::isfinite(c)) throw InputError("point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  if (!labels.empty() && labels.size() != points.size()) {
    throw InputError("label count " + std::to_string(labels.size()) + " != point count " + std::to_string(points.size()));
  }
}

Aabb PointCloud::bounds() const {
  Aabb box;
  if (points.empty()) return box;
  box.min = box.max = points.front();
  for (const auto& p : points) {
    for (int a = 0; a < 3; ++a) {
      box.min[a] = std::min(box.min[a], p[a]);
      box.max[a] = std::max(box.max[a], p[a]);
    }
  }
  return box;
}

Vec3 PointCloud::centroid() const {
  Vec3 c{0, 0, 0};
  if (points.empty()) return c;
  for (const auto& p : points)
    for (int a = 0; a < 3; ++a) c[a] += p[a];
  for (auto& v : c) v /= static_cast<double>(points.size());
  return c;
}

PointCloud PointCloud::select(const std::vector<std::size_t>& indices) const {
  PointCloud out;
  out.object_class = object_class;
  out.points.reserve(indices.size());
  const bool lab = has_labels();
  if (lab) out.labels.reserve(indices.size());
  for (auto i : indices) {
    out.points.push_back(points.at(i));
    if (lab) out.labels.push_back(labels[i]);
  }
  return out;
}

}  // namespace fcpn
