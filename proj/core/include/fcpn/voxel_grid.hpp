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

#ifndef FCPN_VOXEL_GRID_HPP
#define FCPN_VOXEL_GRID_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fcpn/cloud.hpp"
#include "fcpn/grid.hpp"

namespace fcpn {

/// Point label that marks an unannotated point. Voxel class 0 separately
/// means "unoccupied".
inline constexpr std::int32_t kInvalidPointLabel = 0;

/// Dense class-id volume. Labels are stored x-fastest (the FCVX order):
/// index = x + X * (y + Y * z).
struct VoxelLabelGrid {
  Vec3 origin{0, 0, 0};
  double cell_size = 0.05;
  Dims dims{0, 0, 0};
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const { return x + dims[0] * (y + dims[1] * z); }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t z) const { return labels[index(x, y, z)]; }
  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t z) { return labels[index(x, y, z)]; }
};

/// Majority vote of valid point labels per voxel; ties go to the smallest
/// class id; voxels without valid points get class 0.
VoxelLabelGrid voxelize_labels(const PointCloud& cloud, const Vec3& origin, const Vec3& extent, double cell_size = 0.05,
                               std::int32_t invalid_label = kInvalidPointLabel);

/// FCVX file: "FCVX" | version u16 | dims 3 x u32 | origin 3 x f32 |
/// cell_size f32 | dims.x*dims.y*dims.z u8 class ids, x fastest. Little-endian.
inline constexpr std::uint16_t kFcvxVersion = 1;
std::vector<std::uint8_t> encode_fcvx(const VoxelLabelGrid& grid);
VoxelLabelGrid decode_fcvx(std::span<const std::uint8_t> bytes);
void write_fcvx(const std::string& path, const VoxelLabelGrid& grid);
VoxelLabelGrid read_fcvx(const std::string& path);

}  // namespace fcpn

#endif  // FCPN_VOXEL_GRID_HPP
