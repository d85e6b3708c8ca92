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

#include "fcpn/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fcpn/error.hpp"

namespace fcpn {

PointCloud resample(const PointCloud& cloud, std::size_t n, Rng& rng) {
  if (cloud.empty()) throw InputError("resample: empty cloud");
  const std::size_t N = cloud.size();
  std::vector<std::size_t> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  if (N >= n) {
    // Partial Fisher-Yates: the first n slots are a uniform sample.
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, N - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(n);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    while (idx.size() < n) idx.push_back(pick(rng));
    std::shuffle(idx.begin(), idx.end(), rng);
  }
  return cloud.select(idx);
}

void AugmentParams::validate() const {
  if (up_axis < 0 || up_axis > 2) throw ConfigError("augment: up_axis must be 0, 1 or 2");
  if (!(jitter >= 0.0)) throw ConfigError("augment: jitter must be non-negative");
  if (!(shift >= 0.0)) throw ConfigError("augment: shift must be non-negative");
  if (!(scale >= 0.0 && scale < 1.0)) throw ConfigError("augment: scale range must be in [0,1)");
  if (!(dropout_lo >= 0.0 && dropout_lo <= dropout_hi && dropout_hi < 1.0)) {
    throw ConfigError("augment: dropout range must satisfy 0 <= lo <= hi < 1");
  }
}

AugmentParams AugmentParams::voxel_defaults() {
  AugmentParams p;
  p.rotate = true;
  p.jitter = 0.02;
  p.dropout_lo = 0.0;
  p.dropout_hi = 0.8;
  return p;
}

AugmentParams AugmentParams::part_defaults() {
  AugmentParams p;
  p.jitter = 0.02;
  p.dropout_lo = 0.0;
  p.dropout_hi = 0.8;
  p.shift = 0.05;
  p.scale = 0.10;
  return p;
}

AugmentResult augment_with_reference(const PointCloud& cloud, const AugmentParams& params, Rng& rng) {
  params.validate();
  AugmentResult res;
  PointCloud out = cloud;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Vec3 c = cloud.centroid();

  if (params.rotate) {
    const double angle = params.forced_angle ? *params.forced_angle : uni(rng) * 2.0 * std::numbers::pi;
    const double cs = std::cos(angle), sn = std::sin(angle);
    const int a = (params.up_axis + 1) % 3, b = (params.up_axis + 2) % 3;
    for (auto& p : out.points) {
      const double u = p[a] - c[a], v = p[b] - c[b];
      p[a] = c[a] + cs * u - sn * v;
      p[b] = c[b] + sn * u + cs * v;
    }
  }
  if (params.scale > 0.0) {
    const double f = 1.0 + params.scale * (2.0 * uni(rng) - 1.0);
    for (auto& p : out.points)
      for (int a = 0; a < 3; ++a) p[a] = c[a] + f * (p[a] - c[a]);
  }
  if (params.shift > 0.0) {
    Vec3 t;
    for (auto& v : t) v = params.shift * (2.0 * uni(rng) - 1.0);
    for (auto& p : out.points)
      for (int a = 0; a < 3; ++a) p[a] += t[a];
  }
  res.reference = out;

  if (params.jitter > 0.0) {
    for (auto& p : out.points)
      for (auto& v : p) v += params.jitter * (2.0 * uni(rng) - 1.0);
  }
  if (params.dropout_hi > 0.0 && !out.empty()) {
    std::vector<std::size_t> keep;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 10) throw InputError("augment: dropout removed every point in 10 consecutive draws");
      const double rate = params.dropout_lo + (params.dropout_hi - params.dropout_lo) * uni(rng);
      keep.clear();
      for (std::size_t i = 0; i < out.size(); ++i)
        if (uni(rng) >= rate) keep.push_back(i);
      if (!keep.empty()) break;
    }
    if (keep.size() != out.size()) out = out.select(keep);
  }
  res.augmented = std::move(out);
  return res;
}

PointCloud augment(const PointCloud& cloud, const AugmentParams& params, Rng& rng) {
  return augment_with_reference(cloud, params, rng).augmented;
}

Vec3 UnitSphereTransform::apply(const Vec3& p) const {
  return {(p[0] - center[0]) * scale, (p[1] - center[1]) * scale, (p[2] - center[2]) * scale};
}

Vec3 UnitSphereTransform::invert(const Vec3& p) const {
  return {p[0] / scale + center[0], p[1] / scale + center[1], p[2] / scale + center[2]};
}

std::pair<PointCloud, UnitSphereTransform> normalize_unit_sphere(const PointCloud& cloud) {
  if (cloud.empty()) throw InputError("normalize_unit_sphere: empty cloud");
  UnitSphereTransform t;
  t.center = cloud.centroid();
  double r = 0.0;
  for (const auto& p : cloud.points) {
    const double dx = p[0] - t.center[0], dy = p[1] - t.center[1], dz = p[2] - t.center[2];
    r = std::max(r, std::sqrt(dx * dx + dy * dy + dz * dz));
  }
  t.scale = r > 0.0 ? 1.0 / r : 1.0;
  PointCloud out = cloud;
  for (auto& p : out.points) p = t.apply(p);
  return {std::move(out), t};
}

}  // namespace fcpn
