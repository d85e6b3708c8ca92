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

#include "fcpn/volumes.hpp"

#include <cmath>

#include "fcpn/error.hpp"
#include "fcpn/grid.hpp"

namespace fcpn {

std::size_t placements_along(double scene_extent, double volume, double stride) {
  if (scene_extent <= volume) return 1;
  // Small slack so that exact multiples are not lost to rounding.
  return static_cast<std::size_t>(std::floor((scene_extent - volume) / stride + 1e-9)) + 1;
}

std::vector<TrainingVolume> extract_training_volumes(const PointCloud& scene, const VolumeExtractionOptions& options) {
  if (!scene.has_labels()) throw InputError("extract_training_volumes: scene has no labels");
  if (!(options.volume > 0.0) || !(options.stride > 0.0)) throw ConfigError("extract_training_volumes: volume and stride must be positive");
  const Aabb box = scene.bounds();
  std::array<std::vector<double>, 3> starts;
  for (int a = 0; a < 3; ++a) {
    const double e = box.max[a] - box.min[a];
    const std::size_t n = placements_along(e, options.volume, options.stride);
    if (e <= options.volume) {
      starts[a].push_back(0.5 * (box.min[a] + box.max[a]) - 0.5 * options.volume);
    } else {
      for (std::size_t k = 0; k < n; ++k) starts[a].push_back(box.min[a] + static_cast<double>(k) * options.stride);
    }
  }
  const Vec3 extent{options.volume, options.volume, options.volume};
  std::vector<TrainingVolume> out;
  for (double x0 : starts[0]) {
    for (double y0 : starts[1]) {
      for (double z0 : starts[2]) {
        const Vec3 origin{x0, y0, z0};
        std::vector<std::size_t> keep;
        std::size_t valid = 0;
        for (std::size_t i = 0; i < scene.size(); ++i) {
          const Vec3& p = scene.points[i];
          bool in = true;
          for (int a = 0; a < 3; ++a) in = in && p[a] >= origin[a] && p[a] <= origin[a] + options.volume;
          if (!in) continue;
          keep.push_back(i);
          if (scene.labels[i] != options.invalid_label) ++valid;
        }
        if (keep.empty()) continue;
        if (static_cast<double>(valid) < options.min_valid_fraction * static_cast<double>(keep.size())) continue;
        PointCloud cut = scene.select(keep);
        const UniformGrid occ = build_grid(cut, origin, extent, options.occupancy_cell);
        if (occupancy_fraction(occ) < options.min_occupancy) continue;
        TrainingVolume v;
        v.origin = origin;
        v.labels = voxelize_labels(cut, origin, extent, options.label_cell, options.invalid_label);
        v.cutout = std::move(cut);
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

}  // namespace fcpn
