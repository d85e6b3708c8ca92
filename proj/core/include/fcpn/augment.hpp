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

#ifndef FCPN_AUGMENT_HPP
#define FCPN_AUGMENT_HPP

#include <optional>
#include <random>

#include "fcpn/cloud.hpp"

namespace fcpn {

using Rng = std::mt19937_64;

/// Exactly n points. Without replacement when the cloud has at least n
/// points; otherwise every point is kept once and the remainder is drawn
/// with replacement. Output order is shuffled. Labels follow their points.
PointCloud resample(const PointCloud& cloud, std::size_t n, Rng& rng);

struct AugmentParams {
  bool rotate = false;
  // Fixes the rotation angle (radians) instead of drawing it; for tests.
  std::optional<double> forced_angle;
  int up_axis = 2;
  double jitter = 0.0;  // uniform in [-jitter, +jitter] per coordinate, meters
  double dropout_lo = 0.0;
  double dropout_hi = 0.0;  // per-sample rate ~ U[lo, hi], then Bernoulli per point
  double shift = 0.0;       // uniform in [-shift, +shift] per axis, meters
  double scale = 0.0;       // isotropic factor ~ U[1 - scale, 1 + scale]

  /// Throws ConfigError when a range is out of its domain.
  void validate() const;
  bool geometric() const { return rotate || shift > 0.0 || scale > 0.0; }

  /// Voxel-labeling recipe: up-axis rotation, +/-2 cm jitter, 0-80% dropout.
  static AugmentParams voxel_defaults();
  /// Part-segmentation recipe: jitter and dropout as above plus +/-5 cm
  /// shift and +/-10% scale.
  static AugmentParams part_defaults();
};

struct AugmentResult {
  PointCloud augmented;
  // Same points after the rigid/scale/shift stage only, before jitter and
  // dropout; useful for re-deriving ground truth in the new frame.
  PointCloud reference;
};

/// rotation (about the up axis through the centroid) -> scale (about the
/// centroid) -> shift -> jitter -> dropout. A dropout that would leave no
/// points is redrawn; after 10 failed draws an InputError is raised.
AugmentResult augment_with_reference(const PointCloud& cloud, const AugmentParams& params, Rng& rng);
PointCloud augment(const PointCloud& cloud, const AugmentParams& params, Rng& rng);

struct UnitSphereTransform {
  double scale = 1.0;
  Vec3 center{0, 0, 0};

  Vec3 apply(const Vec3& p) const;
  Vec3 invert(const Vec3& p) const;
};

/// Centers on the centroid and scales so the farthest point lies at
/// distance 1. A cloud with all points coincident keeps scale 1.
std::pair<PointCloud, UnitSphereTransform> normalize_unit_sphere(const PointCloud& cloud);

}  // namespace fcpn

#endif  // FCPN_AUGMENT_HPP
