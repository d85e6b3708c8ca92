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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "criteria.hpp"
#include "fcpn/grid.hpp"
#include "fcpn/model.hpp"

namespace acceptance {

using namespace fcpn;

namespace {

// Uniform background plus a few dense clusters so that max pooling sees
// groups of every size up to p_max.
PointCloud mixed_cloud(std::mt19937_64& rng, double lo, double hi, double quantum) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::uniform_int_distribution<int> n_bg(50, 1500), n_cl(0, 4), n_pts(5, 40);
  std::normal_distribution<double> g(0.0, 0.03);
  auto q = [&](double v) {
    v = std::clamp(v, lo, hi);
    return quantum > 0 ? std::round(v / quantum) * quantum : v;
  };
  PointCloud c;
  for (int i = n_bg(rng); i > 0; --i) c.points.push_back({q(u(rng)), q(u(rng)), q(u(rng))});
  for (int k = n_cl(rng); k > 0; --k) {
    const Vec3 m{u(rng), u(rng), u(rng)};
    for (int i = n_pts(rng); i > 0; --i) c.points.push_back({q(m[0] + g(rng)), q(m[1] + g(rng)), q(m[2] + g(rng))});
  }
  return c;
}

std::size_t largest_group(const PointCloud& c, const FcpnConfig& cfg, const Canvas& canvas) {
  const auto grid = build_grid(c, canvas.origin, canvas.extent(), cfg.s1);
  const auto groups = radius_group(c, grid, cfg.radius(), 1u << 20, 0);
  return *std::max_element(groups.counts.begin(), groups.counts.end());
}

bool bit_equal(const Tensor<float>& a, const Tensor<float>& b) {
  return a.shape() == b.shape() && std::memcmp(a.ptr(), b.ptr(), a.size() * sizeof(float)) == 0;
}

}  // namespace

Outcome permutation_invariance() {
  const auto cfg = FcpnConfig::voxel_preset();
  FcpnModel<float> model(cfg, 17);
  const auto canvas = make_canvas(cfg, {0, 0, 0}, cfg.extent);
  std::mt19937_64 rng(99);
  NoGradGuard no_grad;
  std::size_t trials = 0, identical = 0, max_group = 0, max_points = 0;
  while (trials < 100) {
    auto cloud = mixed_cloud(rng, 0.0, 2.4, 0.0);
    const auto largest = largest_group(cloud, cfg, canvas);
    if (largest > cfg.p_max) continue;  // keep subsampling out of the picture
    max_group = std::max(max_group, largest);
    max_points = std::max(max_points, cloud.size());
    auto shuffled = cloud;
    std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
    const auto a = model.forward_voxel(cloud, canvas, {}).value();
    const auto b = model.forward_voxel(shuffled, canvas, {}).value();
    identical += bit_equal(a, b);
    ++trials;
    if (trials % 20 == 0) progress("  permutation: %zu/100", trials);
  }
  return {identical == trials, fmt("%zu/%zu clouds bit-identical, up to %zu points, largest group %zu", identical,
                                   trials, max_points, max_group)};
}

Outcome grid_shift_equivariance() {
  // Dyadic cell sizes and coordinates on a 2^-12 lattice keep every
  // coordinate difference exact, so equality can be bitwise.
  auto cfg = FcpnConfig::voxel_preset();
  cfg.s1 = 0.125;
  cfg.s2 = 0.25;
  cfg.s3 = 0.5;
  cfg.extent = {2.0, 2.0, 2.0};
  cfg.output_cell = cfg.s1 / 3.0;
  FcpnModel<float> model(cfg, 23);
  const std::size_t f = cfg.upsample_factor();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> step(-3, 3);
  NoGradGuard no_grad;

  std::size_t passed = 0, compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = mixed_cloud(rng, 0.5, 1.5, 1.0 / 4096.0);
    std::array<int, 3> k{};
    while (k == std::array<int, 3>{}) k = {step(rng), step(rng), step(rng)};
    if (trial < 6) k = {0, 0, 0}, k[trial % 3] = trial < 3 ? 1 : -1;  // single-axis unit shifts first
    PointCloud moved = cloud;
    for (auto& p : moved.points)
      for (int a = 0; a < 3; ++a) p[a] += k[a] * cfg.s1;

    const auto ca = canvas_for_cloud(cfg, cloud);
    const auto cb = canvas_for_cloud(cfg, moved);
    const auto A = model.forward_voxel(cloud, ca, {}).value();
    const auto B = model.forward_voxel(moved, cb, {}).value();
    const std::size_t K = cfg.class_count;

    // World cell w is A index w - oA and B index w + 3k - oB.
    std::array<long, 3> off{};
    for (int a = 0; a < 3; ++a)
      off[a] = std::lround((ca.origin[a] - cb.origin[a]) / cfg.s1) * long(f) + long(f) * k[a];
    const std::array<long, 3> na{long(A.dim(0)), long(A.dim(1)), long(A.dim(2))};
    const std::array<long, 3> nb{long(B.dim(0)), long(B.dim(1)), long(B.dim(2))};
    const long ring = long(f);
    bool ok = true;
    std::size_t cells = 0;
    for (long x = ring; x < na[0] - ring && ok; ++x)
      for (long y = ring; y < na[1] - ring && ok; ++y)
        for (long z = ring; z < na[2] - ring && ok; ++z) {
          const long bx = x + off[0], by = y + off[1], bz = z + off[2];
          if (bx < ring || by < ring || bz < ring || bx >= nb[0] - ring || by >= nb[1] - ring || bz >= nb[2] - ring)
            continue;
          const float* pa = A.ptr() + ((x * na[1] + y) * na[2] + z) * K;
          const float* pb = B.ptr() + ((bx * nb[1] + by) * nb[2] + bz) * K;
          ok = std::memcmp(pa, pb, K * sizeof(float)) == 0;
          ++cells;
        }
    passed += ok && cells > 0;
    compared += cells;
  }

  // Diagnostic only: the same one-cell shift on a canvas that stays put.
  // Stride-2 abstraction commutes with shifts of 2 cells per level only,
  // so exact equality is not expected here.
  const auto cloud = mixed_cloud(rng, 0.5, 1.5, 1.0 / 4096.0);
  PointCloud moved = cloud;
  for (auto& p : moved.points) p[0] += cfg.s1;
  const auto fixed = make_canvas(cfg, {0, 0, 0}, cfg.extent);
  const auto A = model.forward_voxel(cloud, fixed, {}).value();
  const auto B = model.forward_voxel(moved, fixed, {}).value();
  const std::size_t n = A.dim(0), K = cfg.class_count;
  std::size_t same = 0, total = 0;
  for (std::size_t x = f; x + 2 * f < n; ++x)
    for (std::size_t y = f; y + f < n; ++y)
      for (std::size_t z = f; z + f < n; ++z, ++total)
        same += std::memcmp(A.ptr() + ((x * n + y) * n + z) * K, B.ptr() + (((x + f) * n + y) * n + z) * K,
                            K * sizeof(float)) == 0;

  return {passed == 20, fmt("%zu/20 shifts exact over %zu interior cells; fixed canvas: %.1f%% equal", passed,
                            compared, 100.0 * double(same) / double(total))};
}

}  // namespace acceptance
