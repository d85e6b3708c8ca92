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

#ifndef FCPN_VOLUMES_HPP
#define FCPN_VOLUMES_HPP

#include <cstdint>
#include <vector>

#include "fcpn/cloud.hpp"
#include "fcpn/voxel_grid.hpp"

namespace fcpn {

struct VolumeExtractionOptions {
  double volume = 2.4;  // cube edge, meters
  double stride = 1.2;
  double min_occupancy = 0.02;
  double min_valid_fraction = 0.70;
  // Cell size of the occupancy grid (S1 of the voxel network).
  double occupancy_cell = 0.15;
  double label_cell = 0.05;
  std::int32_t invalid_label = kInvalidPointLabel;
};

struct TrainingVolume {
  Vec3 origin{0, 0, 0};
  PointCloud cutout;
  VoxelLabelGrid labels;
};

/// Number of placements along one axis: a single centered placement when
/// the scene is no larger than the volume, else floor((E - V) / stride) + 1.
std::size_t placements_along(double scene_extent, double volume, double stride);

/// Slides a cube over the labeled scene; keeps cutouts that pass both the
/// occupancy and the valid-annotation thresholds.
std::vector<TrainingVolume> extract_training_volumes(const PointCloud& scene, const VolumeExtractionOptions& options = {});

}  // namespace fcpn

#endif  // FCPN_VOLUMES_HPP
