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

#include "fcpn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fcpn/error.hpp"

namespace fcpn {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Dims grid_dims(const Vec3& extent, double cell_size) {
  if (!(cell_size > 0.0)) throw ConfigError("grid: cell size must be positive");
  Dims d{};
  for (int a = 0; a < 3; ++a) {
    if (!(extent[a] > 0.0)) throw ConfigError("grid: extent on axis " + std::to_string(a) + " must be positive");
    const double ratio = extent[a] / cell_size;
    const double r = std::round(ratio);
    if (r < 1.0 || std::abs(ratio - r) > 1e-6) {
      throw ConfigError("grid: extent " + std::to_string(extent[a]) + " on axis " + std::to_string(a) +
                        " is not a multiple of cell size " + std::to_string(cell_size));
    }
    d[a] = static_cast<std::size_t>(r);
  }
  return d;
}

Vec3 UniformGrid::cell_center(std::size_t id) const {
  const Dims c = cell_coords(id);
  return {origin[0] + (static_cast<double>(c[0]) + 0.5) * cell_size,
          origin[1] + (static_cast<double>(c[1]) + 0.5) * cell_size,
          origin[2] + (static_cast<double>(c[2]) + 0.5) * cell_size};
}

UniformGrid build_grid(const PointCloud& cloud, const Vec3& origin, const Vec3& extent, double cell_size) {
  UniformGrid g;
  g.origin = origin;
  g.cell_size = cell_size;
  g.dims = grid_dims(extent, cell_size);
  const std::size_t n_cells = g.cell_count();
  g.point_cell.assign(cloud.size(), -1);
  std::vector<std::size_t> count(n_cells + 1, 0);
  for (std::size_t p = 0; p < cloud.size(); ++p) {
    const Vec3& pt = cloud.points[p];
    std::size_t idx[3];
    bool inside = true;
    for (int a = 0; a < 3 && inside; ++a) {
      const double rel = pt[a] - origin[a];
      if (!(rel >= 0.0)) {
        inside = false;
        break;
      }
      const double f = std::floor(rel / cell_size);
      std::size_t i = static_cast<std::size_t>(f);
      if (i >= g.dims[a]) {
        // Max face belongs to the last cell; anything beyond is outside.
        if (rel <= extent[a]) {
          i = g.dims[a] - 1;
        } else {
          inside = false;
        }
      }
      idx[a] = i;
    }
    if (!inside) {
      ++g.out_of_bounds;
      continue;
    }
    const std::size_t id = g.cell_id(idx[0], idx[1], idx[2]);
    g.point_cell[p] = static_cast<std::int64_t>(id);
    ++count[id + 1];
  }
  for (std::size_t c = 0; c < n_cells; ++c) count[c + 1] += count[c];
  g.cell_start = count;
  g.cell_points.resize(count[n_cells]);
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  for (std::size_t p = 0; p < cloud.size(); ++p) {
    if (g.point_cell[p] >= 0) g.cell_points[fill[static_cast<std::size_t>(g.point_cell[p])]++] = p;
  }
  return g;
}

Vec3 CellGroups::center(std::size_t cell) const {
  const std::size_t i = cell / (dims[1] * dims[2]);
  const std::size_t j = (cell / dims[2]) % dims[1];
  const std::size_t k = cell % dims[2];
  return {origin[0] + (static_cast<double>(i) + 0.5) * cell_size,
          origin[1] + (static_cast<double>(j) + 0.5) * cell_size,
          origin[2] + (static_cast<double>(k) + 0.5) * cell_size};
}

Tensor<double> CellGroups::padded() const {
  Tensor<double> out({cell_count(), p_max, 3});
  for (std::size_t c = 0; c < cell_count(); ++c) {
    if (counts[c] == 0) continue;
    double* dst = out.ptr() + c * p_max * 3;
    const double* src = relative.data() + starts[c] * 3;
    for (std::size_t r = 0; r < p_max; ++r) {
      const std::size_t from = r < counts[c] ? r : 0;
      std::copy(src + from * 3, src + from * 3 + 3, dst + r * 3);
    }
  }
  return out;
}

CellGroups radius_group(const PointCloud& cloud, const UniformGrid& grid, double radius, std::size_t p_max,
                        std::uint64_t seed) {
  if (!(radius > 0.0)) throw ConfigError("radius_group: radius must be positive");
  if (p_max == 0) throw ConfigError("radius_group: p_max must be positive");
  if (grid.point_cell.size() != cloud.size()) throw InputError("radius_group: grid was built for a different cloud");
  CellGroups out;
  out.dims = grid.dims;
  out.origin = grid.origin;
  out.cell_size = grid.cell_size;
  out.radius = radius;
  out.p_max = p_max;
  const std::size_t n_cells = grid.cell_count();
  const auto reach = static_cast<std::ptrdiff_t>(std::floor(radius / grid.cell_size + 0.5));
  const double r2 = radius * radius;

  std::vector<std::vector<std::size_t>> members(n_cells);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t c = 0; c < n_cells; ++c) {
    const Dims cc = grid.cell_coords(c);
    const Vec3 ctr = grid.cell_center(c);
    std::vector<std::size_t>& m = members[c];
    std::ptrdiff_t lo[3], hi[3];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(cc[a]) - reach);
      hi[a] = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(grid.dims[a]) - 1, static_cast<std::ptrdiff_t>(cc[a]) + reach);
    }
    for (std::ptrdiff_t i = lo[0]; i <= hi[0]; ++i) {
      for (std::ptrdiff_t j = lo[1]; j <= hi[1]; ++j) {
        for (std::ptrdiff_t k = lo[2]; k <= hi[2]; ++k) {
          const std::size_t nb = grid.cell_id(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k));
          for (std::size_t q = grid.cell_start[nb]; q < grid.cell_start[nb + 1]; ++q) {
            const std::size_t p = grid.cell_points[q];
            const Vec3& pt = cloud.points[p];
            const double dx = pt[0] - ctr[0], dy = pt[1] - ctr[1], dz = pt[2] - ctr[2];
            if (dx * dx + dy * dy + dz * dz <= r2) m.push_back(p);
          }
        }
      }
    }
    std::sort(m.begin(), m.end());
    if (m.size() > p_max) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(c)));
      for (std::size_t s = 0; s < p_max; ++s) {
        std::uniform_int_distribution<std::size_t> pick(s, m.size() - 1);
        std::swap(m[s], m[pick(rng)]);
      }
      m.resize(p_max);
      std::sort(m.begin(), m.end());
    }
  }

  out.starts.resize(n_cells);
  out.counts.resize(n_cells);
  std::size_t total = 0;
  for (std::size_t c = 0; c < n_cells; ++c) {
    out.starts[c] = total;
    out.counts[c] = members[c].size();
    total += members[c].size();
  }
  out.point_index.resize(total);
  out.relative.resize(total * 3);
  for (std::size_t c = 0; c < n_cells; ++c) {
    const Vec3 ctr = grid.cell_center(c);
    for (std::size_t r = 0; r < members[c].size(); ++r) {
      const std::size_t row = out.starts[c] + r;
      const std::size_t p = members[c][r];
      out.point_index[row] = p;
      for (int a = 0; a < 3; ++a) out.relative[row * 3 + a] = (cloud.points[p][a] - ctr[a]) / radius;
    }
  }
  return out;
}

double occupancy_fraction(const UniformGrid& grid) {
  const std::size_t n = grid.cell_count();
  if (n == 0) return 0.0;
  std::size_t occ = 0;
  for (std::size_t c = 0; c < n; ++c)
    if (grid.cell_start[c + 1] > grid.cell_start[c]) ++occ;
  return static_cast<double>(occ) / static_cast<double>(n);
}

}  // namespace fcpn
