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

#include "fcpn/voxel_grid.hpp"

#include <cmath>
#include <map>

#include "binary_io.hpp"
#include "fcpn/error.hpp"

namespace fcpn {

VoxelLabelGrid voxelize_labels(const PointCloud& cloud, const Vec3& origin, const Vec3& extent, double cell_size,
                               std::int32_t invalid_label) {
  if (!cloud.empty() && !cloud.has_labels()) throw InputError("voxelize_labels: cloud has no labels");
  const UniformGrid grid = build_grid(cloud, origin, extent, cell_size);
  VoxelLabelGrid out;
  out.origin = origin;
  out.cell_size = cell_size;
  out.dims = grid.dims;
  out.labels.assign(out.size(), 0);
  std::map<std::int32_t, std::size_t> votes;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (grid.points_in(c) == 0) continue;
    votes.clear();
    for (std::size_t q = grid.cell_start[c]; q < grid.cell_start[c + 1]; ++q) {
      const std::int32_t l = cloud.labels[grid.cell_points[q]];
      if (l != invalid_label) ++votes[l];
    }
    std::int32_t best = 0;
    std::size_t best_n = 0;
    for (const auto& [label, n] : votes) {  // ascending ids: strict > keeps the smallest on ties
      if (n > best_n) {
        best = label;
        best_n = n;
      }
    }
    if (best < 0 || best > 255) throw InputError("voxelize_labels: label " + std::to_string(best) + " does not fit in u8");
    const Dims ijk = grid.cell_coords(c);
    out.at(ijk[0], ijk[1], ijk[2]) = static_cast<std::uint8_t>(best);
  }
  return out;
}

std::vector<std::uint8_t> encode_fcvx(const VoxelLabelGrid& grid) {
  if (grid.labels.size() != grid.size()) throw DimensionError("fcvx: label count does not match dims");
  detail::ByteWriter w;
  w.str("FCVX");
  w.u16(kFcvxVersion);
  for (auto d : grid.dims) w.u32(static_cast<std::uint32_t>(d));
  for (auto o : grid.origin) w.f32(static_cast<float>(o));
  w.f32(static_cast<float>(grid.cell_size));
  w.bytes(grid.labels);
  return std::move(w.buffer());
}

VoxelLabelGrid decode_fcvx(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "fcvx");
  if (r.str(4) != "FCVX") r.fail("bad magic");
  const auto version = r.u16();
  if (version != kFcvxVersion) r.fail("unsupported version " + std::to_string(version));
  VoxelLabelGrid g;
  for (auto& d : g.dims) d = r.u32();
  for (auto& o : g.origin) o = r.f32();
  g.cell_size = r.f32();
  for (auto o : g.origin)
    if (!std::isfinite(o)) r.fail("non-finite origin");
  if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size)) r.fail("cell size must be positive");
  std::size_t n = 1;
  for (auto d : g.dims) {
    if (d != 0 && n > r.remaining() / d) r.fail("dims exceed the payload");
    n *= d;
  }
  if (r.remaining() != n) {
    r.fail("expected " + std::to_string(n) + " label bytes, found " + std::to_string(r.remaining()));
  }
  g.labels.resize(n);
  for (auto& l : g.labels) l = r.u8();
  return g;
}

void write_fcvx(const std::string& path, const VoxelLabelGrid& grid) { detail::write_file_bytes(path, encode_fcvx(grid)); }

VoxelLabelGrid read_fcvx(const std::string& path) { return decode_fcvx(detail::read_file_bytes(path)); }

}  // namespace fcpn
