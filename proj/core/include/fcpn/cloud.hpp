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

#ifndef FCPN_CLOUD_HPP
#define FCPN_CLOUD_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace fcpn {

using Vec3 = std::array<double, 3>;

struct Aabb {
  Vec3 min{0, 0, 0};
  Vec3 max{0, 0, 0};
};

/// Unordered point set in meters, optionally with one semantic label per
/// point and an object category (part-segmentation shapes).
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<std::int32_t> labels;  // empty when unlabeled
  std::optional<std::int32_t> object_class;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_labels() const { return !points.empty() && labels.size() == points.size(); }
  /// Throws InputError on non-finite coordinates or a label count mismatch.
  void validate() const;
  Aabb bounds() const;
  Vec3 centroid() const;
  /// Copies of the selected points (and their labels) in the given order.
  PointCloud select(const std::vector<std::size_t>& indices) const;
};

}  // namespace fcpn

#endif  // FCPN_CLOUD_HPP
