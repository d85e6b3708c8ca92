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

#ifndef FCPN_GRID_HPP
#define FCPN_GRID_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "fcpn/cloud.hpp"
#include "fcpn/tensor.hpp"

namespace fcpn {

using Dims = std::array<std::size_t, 3>;

/// Cell-indexed partition of an axis-aligned box. Cells are numbered with z
/// fastest, matching the [X,Y,Z,C] feature-volume layout.
struct UniformGrid {
  Vec3 origin{0, 0, 0};
  double cell_size = 0.0;
  Dims dims{0, 0, 0};
  // Per input point: owning cell, or -1 when outside the box.
  std::vector<std::int64_t> point_cell;
  // Points of cell c are cell_points[cell_start[c] .. cell_start[c+1]),
  // in increasing point index.
  std::vector<std::size_t> cell_start;
  std::vector<std::size_t> cell_points;
  std::size_t out_of_bounds = 0;

  std::size_t cell_count() const { return dims[0] * dims[1] * dims[2]; }
  std::size_t cell_id(std::size_t i, std::size_t j, std::size_t k) const { return (i * dims[1] + j) * dims[2] + k; }
  Dims cell_coords(std::size_t id) const {
    return {id / (dims[1] * dims[2]), (id / dims[2]) % dims[1], id % dims[2]};
  }
  Vec3 cell_center(std::size_t id) const;
  std::size_t points_in(std::size_t id) const { return cell_start[id + 1] - cell_start[id]; }
};

/// Returns round(extent / cell_size) per axis after checking that every
/// extent is a positive multiple of cell_size (ConfigError otherwise).
Dims grid_dims(const Vec3& extent, double cell_size);

/// Bins every point into floor((p - origin) / cell_size). A point on a
/// max face belongs to the last cell; points outside the box are counted in
/// out_of_bounds and left unassigned.
UniformGrid build_grid(const PointCloud& cloud, const Vec3& origin, const Vec3& extent, double cell_size);

/// Fixed-radius groups around every cell center.
struct CellGroups {
  Dims dims{0, 0, 0};
  Vec3 origin{0, 0, 0};
  double cell_size = 0.0;
  double radius = 0.0;
  std::size_t p_max = 0;
  // Group c is rows [starts[c], starts[c] + counts[c]) of the packed arrays.
  std::vector<std::size_t> starts;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> point_index;
  // (p - center) / radius, three values per packed row.
  std::vector<double> relative;

  std::size_t cell_count() const { return counts.size(); }
  std::size_t total_rows() const { return point_index.size(); }
  Vec3 center(std::size_t cell) const;
  /// Dense [Ncells, p_max, 3] view; rows past a group's count repeat its
  /// first point (all zeros for empty groups).
  Tensor<double> padded() const;
};

/// Collects, for every cell center, the in-grid points at Euclidean
/// distance <= radius. Groups larger than p_max are subsampled uniformly
/// with a generator seeded from (seed, cell id), so the result does not
/// depend on thread count. Only cells within the radius are visited
/// (the 3x3x3 neighbourhood when radius <= cell_size).
CellGroups radius_group(const PointCloud& cloud, const UniformGrid& grid, double radius, std::size_t p_max,
                        std::uint64_t seed);

/// Share of cells holding at least one point; 0 for an empty grid.
double occupancy_fraction(const UniformGrid& grid);

}  // namespace fcpn

#endif  // FCPN_GRID_HPP
